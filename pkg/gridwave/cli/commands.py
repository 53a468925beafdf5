"""
各分析阶段的执行与结果写出

命令行子命令和完整流水线共用这些函数，每个函数返回计算结果和写出的文件列表。
"""

import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from ..case import ensure_valid, load_case, resolve_case_dir
from ..errors import UsageError
from ..freqresp import evaluate_refined, export_plots, margins, pole_zero
from ..freqresp.config import FREQRESP_CONFIG
from ..network.ybus import build_ybus, dump_admittance
from ..powerflow import solve_powerflow, write_solution
from ..simulate import build_system, run_simulation, write_simulation
from ..smallsignal import (
    IoSelection,
    eigenanalysis,
    linearize_system,
    machine_areas,
    residues,
    write_modes,
    write_participation,
    write_residues,
)
from .config import CLI_CONFIG

logger = logging.getLogger(__name__)


@dataclass
class RunOptions:
    """命令行可覆盖的参数，None 表示沿用场景文件或模块默认值"""

    pf_tol: Optional[float] = None
    pf_max_iter: Optional[int] = None
    dt: Optional[float] = None
    t_end: Optional[float] = None
    decimation: Optional[int] = None
    fault_admittance: Optional[float] = None
    eq_tol: Optional[float] = None
    relative_angles: Optional[bool] = None
    zeta_threshold: Optional[float] = None
    inputs: Tuple[str, ...] = ()
    outputs: Tuple[str, ...] = ()
    fr_input: Optional[str] = None
    fr_output: Optional[str] = None
    wmin: Optional[float] = None
    wmax: Optional[float] = None
    points: Optional[int] = None
    svg: bool = False
    dump_matrices: bool = False
    float_format: str = "%.10g"


def load_valid_case(case_arg, options: Optional[RunOptions] = None):
    """
    解析 --case、读取算例，套用命令行覆盖项后校验

    Args:
        case_arg: 目录或内置算例名
        options: 运行参数

    Returns:
        (NetworkCase, 算例目录)
    """
    case_dir = resolve_case_dir(str(case_arg))
    case = load_case(case_dir)
    if options is not None:
        case = apply_overrides(case, options)
    return ensure_valid(case), case_dir


def apply_overrides(case, options: RunOptions):
    """命令行参数优先于 scenario.cfg"""
    overrides = {}
    for name in ("dt", "t_end", "decimation", "fault_admittance", "zeta_threshold", "relative_angles"):
        value = getattr(options, name)
        if value is not None:
            overrides[name] = value
    if options.inputs:
        overrides["input_selection"] = tuple(options.inputs)
    if options.outputs:
        overrides["output_selection"] = tuple(options.outputs)
    if not overrides:
        return case
    logger.debug(f"场景覆盖项: {overrides}")
    return replace(case, scenario=replace(case.scenario, **overrides))


def run_powerflow(case, out_dir, options: RunOptions):
    out_dir = Path(out_dir)
    solution = solve_powerflow(case, tol=options.pf_tol, max_iter=options.pf_max_iter)
    files = [write_solution(solution, out_dir, options.float_format)]
    if options.dump_matrices:
        files.append(dump_admittance(build_ybus(case), out_dir / CLI_CONFIG["ybus_file"], options.float_format))
    return solution, files


def build_dynamic_system(case, pf_solution, options: RunOptions):
    return build_system(case, pf_solution=pf_solution, fault_admittance=options.fault_admittance)


def dump_reduced(system, out_dir, options: RunOptions) -> List[Path]:
    """写出三种拓扑的降阶导纳矩阵"""
    out_dir = Path(out_dir)
    files = []
    for name, topology in system.rns.topologies.items():
        path = out_dir / CLI_CONFIG["yred_file"].format(topology=name)
        files.append(dump_admittance(topology.y_red, path, options.float_format))
    return files


def run_time_domain(case, system, out_dir, options: RunOptions):
    result = run_simulation(case, system=system)
    files = write_simulation(result, out_dir, options.float_format, options.svg)
    if options.dump_matrices:
        files += dump_reduced(system, out_dir, options)
    return result, files


def run_linearize(system, out_dir, options: RunOptions, io_selection: Optional[IoSelection] = None):
    model = linearize_system(system, io_selection=io_selection, equilibrium_tol=options.eq_tol)
    files = model.write_matrices(out_dir, options.float_format) if out_dir is not None else []
    return model, files


def run_modes(model, case, out_dir, options: RunOptions, which: Sequence[str] = ("modes", "participation")):
    """
    特征分析并按 which 写出模态表和/或参与因子表

    Returns:
        (ModalReport, 文件列表)
    """
    report = eigenanalysis(model)
    zeta = case.scenario.zeta_threshold
    files = []
    if "modes" in which:
        files += write_modes(report, out_dir, zeta, machine_areas(case), options.float_format, options.svg)
    if "participation" in which:
        files += write_participation(report, out_dir, zeta, options.float_format, options.svg)
    return report, files


def run_residues(model, report, case, out_dir, options: RunOptions):
    residue_report = residues(model, report)
    files = write_residues(
        residue_report, report, out_dir, case.scenario.zeta_threshold, options.float_format, options.svg
    )
    return residue_report, files


def frequency_channel(system, options: RunOptions) -> Tuple[str, str]:
    """频域通道，缺省为 ω_s -> 第一台同步机转速"""
    input_label = options.fr_input or FREQRESP_CONFIG["default_input"]
    output_label = options.fr_output
    if output_label is None:
        if not system.layout.n_machines:
            raise UsageError("算例没有同步机，必须用 --output 指定频域输出")
        output_label = f"{system.layout.machine_labels[0]}.{FREQRESP_CONFIG['default_output_state']}"
    return input_label, output_label


def run_frequency_response(system, out_dir, options: RunOptions, channel: Optional[Tuple[str, str]] = None):
    """
    单通道线性化后计算 Bode/Nyquist/Nichols、裕度和零极点

    Returns:
        (MarginReport, 文件列表)
    """
    io = channel or frequency_channel(system, options)
    model = linearize_system(system, io_selection=IoSelection((io[0],), (io[1],)), equilibrium_tol=options.eq_tol)
    response, phase = evaluate_refined(model, io, options.wmin, options.wmax, options.points)
    margin_report = margins(model, io, response, phase)
    pz = pole_zero(model, io)
    files = export_plots(response, margin_report, pz, out_dir, phase, options.float_format, options.svg)
    logger.info(
        f"频域通道 {io[0]} -> {io[1]}: 增益裕度 {margin_report.gain_margin_db:.2f} dB, "
        f"相位裕度 {margin_report.phase_margin_deg:.2f}°"
    )
    return margin_report, files
