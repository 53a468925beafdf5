"""
完整分析流水线

读取校验 → 潮流 → 平启动检查 → 故障仿真 → 线性化 → 模态与参与因子 → 留数 → 频率响应。
任一阶段失败立即停止并抛出带阶段名的 PipelineStageError，此时不写运行清单。
"""

import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Optional

from ..errors import PipelineStageError, SimulationError
from ..simulate import flat_run
from ..simulate.config import SIMULATE_CONFIG
from ..smallsignal import lightly_damped_filter
from .commands import (
    RunOptions,
    build_dynamic_system,
    frequency_channel,
    load_valid_case,
    run_frequency_response,
    run_linearize,
    run_modes,
    run_powerflow,
    run_residues,
    run_time_domain,
)
from .config import stage_dirs
from .manifest import RunManifest, case_checksum

logger = logging.getLogger(__name__)


@contextmanager
def _stage(name: str):
    logger.info(f"流水线阶段开始: {name}")
    try:
        yield
    except PipelineStageError:
        raise
    except Exception as exc:
        logger.error(f"流水线阶段 {name} 失败: {exc}")
        raise PipelineStageError(name, exc) from exc


def _stage_dir(out_dir: Path, stage: str) -> Path:
    path = out_dir / stage_dirs()[stage]
    path.mkdir(parents=True, exist_ok=True)
    return path


def full_pipeline(case_dir, out_dir, options: Optional[RunOptions] = None, parameters=None) -> RunManifest:
    """
    按顺序运行全部分析并写出运行清单

    Args:
        case_dir: 算例目录或内置算例名
        out_dir: 输出根目录，各阶段写入同名子目录
        options: 命令行覆盖参数
        parameters: 记入清单的参数字典

    Returns:
        RunManifest（已写入 out_dir/manifest.json）

    Raises:
        PipelineStageError: 任一阶段失败
    """
    options = options or RunOptions()
    out_dir = Path(out_dir)

    with _stage("load"):
        case, resolved = load_valid_case(case_dir, options)
        manifest = RunManifest(
            command="pipeline",
            case=str(case_dir),
            case_checksum=case_checksum(resolved),
            parameters=dict(parameters or {}),
        )
        out_dir.mkdir(parents=True, exist_ok=True)
        manifest.add_stage("load", buses=len(case.buses), machines=len(case.machines), res=len(case.res_plants))

    with _stage("powerflow"):
        pf, files = run_powerflow(case, _stage_dir(out_dir, "powerflow"), options)
        manifest.add_outputs(files, out_dir)
        manifest.add_stage("powerflow", iterations=pf.iterations, max_mismatch=pf.max_mismatch)

    with _stage("flat_run"):
        system = build_dynamic_system(case, pf, options)
        flat = flat_run(case, system=system)
        deviation = flat.max_deviation()
        if deviation > SIMULATE_CONFIG["flat_run_tolerance"]:
            raise SimulationError(f"平启动仿真偏离平衡点 {deviation:.3e}")
        manifest.add_stage("flat_run", max_deviation=deviation)

    with _stage("simulate"):
        result, files = run_time_domain(case, system, _stage_dir(out_dir, "simulate"), options)
        manifest.add_outputs(files, out_dir)
        manifest.add_stage("simulate", samples=len(result.t), events=len(result.event_log))

    with _stage("linearize"):
        model, files = run_linearize(system, _stage_dir(out_dir, "linearize"), options)
        manifest.add_outputs(files, out_dir)
        manifest.add_stage("linearize", states=model.n_states, reference=model.reference)

    with _stage("modes"):
        report, files = run_modes(model, case, _stage_dir(out_dir, "modes"), options)
        manifest.add_outputs(files, out_dir)
        light = lightly_damped_filter(report, case.scenario.zeta_threshold)
        manifest.add_stage("modes", modes=report.n_modes, lightly_damped=len(light))

    with _stage("residues"):
        _, files = run_residues(model, report, case, _stage_dir(out_dir, "residues"), options)
        manifest.add_outputs(files, out_dir)
        manifest.add_stage("residues")

    with _stage("freqresp"):
        if not system.layout.n_machines and options.fr_output is None:
            logger.warning("算例没有同步机，跳过频率响应阶段")
            manifest.add_stage("freqresp", status="skipped")
        else:
            channel = frequency_channel(system, options)
            margin_report, files = run_frequency_response(
                system, _stage_dir(out_dir, "freqresp"), options, channel
            )
            manifest.add_outputs(files, out_dir)
            manifest.add_stage("freqresp", **margin_report.as_row())

    manifest.write(out_dir)
    logger.info(f"流水线完成: {len(manifest.outputs)} 个输出文件")
    return manifest
