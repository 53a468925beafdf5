#!/usr/bin/env python3
"""
gridwave 命令行入口

退出码：0 成功；1 领域错误（算例、潮流、仿真、线性化等失败）；2 用法错误（参数或输入输出标签）。
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from .. import __version__, setup_logging
from ..case import load_case, resolve_case_dir, validate_case
from ..errors import GridwaveError, InvalidCase, UsageError
from ..powerflow import solve_powerflow
from .commands import (
    RunOptions,
    build_dynamic_system,
    load_valid_case,
    run_frequency_response,
    run_linearize,
    run_modes,
    run_powerflow,
    run_residues,
    run_time_domain,
)
from .config import CLI_CONFIG
from .manifest import RunManifest, case_checksum
from .pipeline import full_pipeline

logger = logging.getLogger(__name__)


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"不是数值: {text}")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"必须为正数: {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"不是整数: {text}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"必须不小于 1: {text}")
    return value


def _label_list(text: str) -> List[str]:
    labels = [item.strip() for item in text.split(",") if item.strip()]
    if not labels:
        raise argparse.ArgumentTypeError("标签列表为空")
    return labels


def build_parser() -> argparse.ArgumentParser:
    """构造带全部子命令的参数解析器"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--case", required=True, help="算例目录或内置算例名（ieee68/68bus/smib/two_bus）")
    common.add_argument("--out", default=None, help="输出目录，缺省为配置中的 OUTPUT_DIR")
    common.add_argument("--seed-free", action="store_true", help="确定性运行（所有计算本身都不使用随机数）")
    common.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], default=None)
    common.add_argument("--svg", action="store_true", help="同时输出 SVG 图（需要 matplotlib）")
    common.add_argument("--dump-matrices", action="store_true", help="导出节点导纳矩阵和降阶矩阵")

    pf = argparse.ArgumentParser(add_help=False)
    pf.add_argument("--pf-tol", type=_positive_float, default=None, help="潮流收敛判据（缺省 1e-8）")
    pf.add_argument("--pf-max-iter", type=_positive_int, default=None, help="潮流最大迭代次数（缺省 20）")

    sim = argparse.ArgumentParser(add_help=False)
    sim.add_argument("--dt", type=_positive_float, default=None, help="积分步长 (s)")
    sim.add_argument("--t-end", type=_positive_float, default=None, help="仿真终止时刻 (s)")
    sim.add_argument("--decimation", type=_positive_int, default=None, help="记录间隔（步）")
    sim.add_argument("--fault-admittance", type=_positive_float, default=None, help="故障并联电导 (pu)")

    lin = argparse.ArgumentParser(add_help=False)
    lin.add_argument("--eq-tol", type=_positive_float, default=None, help="平衡点残差判据（缺省 1e-5）")
    lin.add_argument(
        "--relative-angles",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="消去参考机转子角（缺省取场景设置）",
    )

    io = argparse.ArgumentParser(add_help=False)
    io.add_argument("--inputs", type=_label_list, default=None, help="逗号分隔的输入标签")
    io.add_argument("--outputs", type=_label_list, default=None, help="逗号分隔的输出标签")

    modal = argparse.ArgumentParser(add_help=False)
    modal.add_argument("--zeta-threshold", type=_positive_float, default=None, help="弱阻尼判据 (%%)")

    fr = argparse.ArgumentParser(add_help=False)
    fr.add_argument("--input", dest="fr_input", default=None, help="频域输入标签（缺省 omega_s）")
    fr.add_argument("--output", dest="fr_output", default=None, help="频域输出标签（缺省第一台同步机 omega）")
    fr.add_argument("--wmin", type=_positive_float, default=None, help="最低频率 (rad/s)")
    fr.add_argument("--wmax", type=_positive_float, default=None, help="最高频率 (rad/s)")
    fr.add_argument("--points", type=_positive_int, default=None, help="频率点数")

    parser = argparse.ArgumentParser(
        prog=CLI_CONFIG["prog"],
        description="电力系统动态仿真与小信号分析",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    commands = {
        "powerflow": ("交流潮流", [common, pf]),
        "simulate": ("故障时域仿真", [common, pf, sim]),
        "linearize": ("数值线性化，输出 A/B/C/D", [common, pf, lin, io]),
        "modes": ("特征值、阻尼比与振型", [common, pf, lin, io, modal]),
        "participation": ("参与因子", [common, pf, lin, io, modal]),
        "residues": ("可控性、可观性与留数", [common, pf, lin, io, modal]),
        "freqresp": ("Bode/Nyquist/Nichols、稳定裕度与零极点", [common, pf, lin, fr]),
        "validate": ("只读取并校验算例", [common]),
        "pipeline": ("依次运行全部分析", [common, pf, sim, lin, io, modal, fr]),
    }
    for name, (text, parents) in commands.items():
        sub.add_parser(name, parents=parents, help=text, description=text)
    return parser


def _options(args, app_config) -> RunOptions:
    return RunOptions(
        pf_tol=getattr(args, "pf_tol", None),
        pf_max_iter=getattr(args, "pf_max_iter", None),
        dt=getattr(args, "dt", None),
        t_end=getattr(args, "t_end", None),
        decimation=getattr(args, "decimation", None),
        fault_admittance=getattr(args, "fault_admittance", None),
        eq_tol=getattr(args, "eq_tol", None),
        relative_angles=getattr(args, "relative_angles", None),
        zeta_threshold=getattr(args, "zeta_threshold", None),
        inputs=tuple(getattr(args, "inputs", None) or ()),
        outputs=tuple(getattr(args, "outputs", None) or ()),
        fr_input=getattr(args, "fr_input", None),
        fr_output=getattr(args, "fr_output", None),
        wmin=getattr(args, "wmin", None),
        wmax=getattr(args, "wmax", None),
        points=getattr(args, "points", None),
        svg=bool(args.svg or app_config.SVG_ENABLED),
        dump_matrices=bool(args.dump_matrices),
        float_format=app_config.OUTPUT_FLOAT_FORMAT,
    )


def _parameters(args) -> Dict[str, object]:
    """记入清单的参数（只保留给出的项）"""
    return {key: value for key, value in sorted(vars(args).items()) if value is not None and key != "command"}


def _system(case, options: RunOptions):
    pf = solve_powerflow(case, tol=options.pf_tol, max_iter=options.pf_max_iter)
    return build_dynamic_system(case, pf, options)


def _cmd_powerflow(case, out: Path, options: RunOptions):
    return run_powerflow(case, out, options)[1]


def _cmd_simulate(case, out: Path, options: RunOptions):
    system = _system(case, options)
    return run_time_domain(case, system, out, options)[1]


def _cmd_linearize(case, out: Path, options: RunOptions):
    return run_linearize(_system(case, options), out, options)[1]


def _cmd_modes(case, out: Path, options: RunOptions):
    model, _ = run_linearize(_system(case, options), None, options)
    return run_modes(model, case, out, options, which=("modes",))[1]


def _cmd_participation(case, out: Path, options: RunOptions):
    model, _ = run_linearize(_system(case, options), None, options)
    return run_modes(model, case, out, options, which=("participation",))[1]


def _cmd_residues(case, out: Path, options: RunOptions):
    model, _ = run_linearize(_system(case, options), None, options)
    report, _ = run_modes(model, case, out, options, which=())
    return run_residues(model, report, case, out, options)[1]


def _cmd_freqresp(case, out: Path, options: RunOptions):
    return run_frequency_response(_system(case, options), out, options)[1]


COMMANDS: Dict[str, Callable] = {
    "powerflow": _cmd_powerflow,
    "simulate": _cmd_simulate,
    "linearize": _cmd_linearize,
    "modes": _cmd_modes,
    "participation": _cmd_participation,
    "residues": _cmd_residues,
    "freqresp": _cmd_freqresp,
}


def _validate(args) -> int:
    case = load_case(resolve_case_dir(args.case))
    report = validate_case(case)
    if not report.ok:
        raise InvalidCase(report)
    print(
        f"算例 {case.name} 校验通过: {len(case.buses)} 条母线, {len(case.branches)} 条支路, "
        f"{len(case.machines)} 台同步机, {len(case.res_plants)} 座新能源电站"
    )
    return CLI_CONFIG["exit_ok"]


def _run(args, options: RunOptions, out: Path) -> int:
    if args.command == "validate":
        return _validate(args)
    if args.command == "pipeline":
        full_pipeline(args.case, out, options, parameters=_parameters(args))
        return CLI_CONFIG["exit_ok"]

    case, case_dir = load_valid_case(args.case, options)
    out.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(
        command=args.command,
        case=str(args.case),
        case_checksum=case_checksum(case_dir),
        parameters=_parameters(args),
    )
    files = COMMANDS[args.command](case, out, options)
    manifest.add_outputs(files, out)
    manifest.write(out)
    return CLI_CONFIG["exit_ok"]


def _report(prog: str, exc: Exception):
    print(f"{prog}: 错误: {exc}", file=sys.stderr)


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """
    解析参数并执行子命令

    Args:
        argv: 参数列表，缺省取 sys.argv[1:]

    Returns:
        退出码
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse 已把用法说明和出错的参数写到 stderr
        return exc.code if isinstance(exc.code, int) else CLI_CONFIG["exit_usage_error"]

    from config import get_config

    app_config = get_config()
    if args.log_level:
        app_config.LOG_LEVEL = args.log_level
    setup_logging(app_config)

    out = Path(args.out or app_config.OUTPUT_DIR)
    try:
        return _run(args, _options(args, app_config), out)
    except UsageError as exc:
        logger.error(f"用法错误: {exc}")
        _report(parser.prog, exc)
        return CLI_CONFIG["exit_usage_error"]
    except GridwaveError as exc:
        logger.error(f"{args.command} 失败: {exc}")
        _report(parser.prog, exc)
        return CLI_CONFIG["exit_domain_error"]
    except Exception as exc:
        logger.exception(f"{args.command} 内部错误: {exc}")
        _report(parser.prog, exc)
        return CLI_CONFIG["exit_domain_error"]


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
