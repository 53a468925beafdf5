"""
小信号分析结果输出
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from .config import SMALLSIGNAL_CONFIG
from .modal import (
    ModalReport,
    ResidueReport,
    classify_mode,
    dominant_states,
    lightly_damped_filter,
    mode_shape,
    participation_frame,
    rank_sites,
)

logger = logging.getLogger(__name__)

FILES = SMALLSIGNAL_CONFIG["files"]


def _write(frame: pd.DataFrame, path: Path, float_format: str) -> Path:
    frame.to_csv(path, index=False, float_format=float_format)
    return path


def write_modes(
    report: ModalReport,
    out_dir,
    zeta_threshold: Optional[float] = None,
    areas: Optional[Dict[str, int]] = None,
    float_format: str = "%.10g",
    svg: bool = False,
) -> List[Path]:
    """
    写出 modes.csv、lightly_damped.csv、mode_shapes.csv，可选振型罗盘图

    Args:
        report: ModalReport
        out_dir: 输出目录
        zeta_threshold: 弱阻尼判据（%）
        areas: 设备 -> 区域，用于模态分类

    Returns:
        输出文件列表
    """
    out_dir = Path(out_dir)
    written = [_write(report.modes_frame(), out_dir / FILES["modes"], float_format)]

    light = lightly_damped_filter(report, zeta_threshold)
    rows = [
        {
            "mode": i + 1,
            "re": report.eigenvalues[i].real,
            "im": report.eigenvalues[i].imag,
            "freq_hz": report.freq_hz[i],
            "damping_pct": report.damping_pct[i],
            "kind": classify_mode(report, i, areas),
        }
        for i in light
    ]
    columns = ["mode", "re", "im", "freq_hz", "damping_pct", "kind"]
    written.append(_write(pd.DataFrame(rows, columns=columns), out_dir / FILES["lightly_damped"], float_format))

    shapes = []
    has_speed = any(label.endswith(".omega") for label in report.state_labels)
    for i in light if has_speed else []:
        shape = mode_shape(report, i)
        shape.insert(0, "mode", i + 1)
        shapes.append(shape[["mode", "state", "magnitude", "angle_deg"]])
        if svg:
            from ..plotting import compass_plot

            written.append(
                compass_plot(
                    shape,
                    out_dir / FILES["compass_plot"].format(mode=i + 1),
                    f"模态 {i + 1}: {report.freq_hz[i]:.3f} Hz, ζ={report.damping_pct[i]:.2f}%",
                )
            )
    frame = pd.concat(shapes, ignore_index=True) if shapes else pd.DataFrame(
        columns=["mode", "state", "magnitude", "angle_deg"]
    )
    written.append(_write(frame, out_dir / FILES["mode_shapes"], float_format))

    logger.info(f"{report.n_modes} 个模态, 其中 {len(light)} 个弱阻尼模态")
    return written


def write_participation(
    report: ModalReport,
    out_dir,
    zeta_threshold: Optional[float] = None,
    float_format: str = "%.10g",
    svg: bool = False,
) -> List[Path]:
    """写出参与因子全表、归一化表、机电状态子表、主导状态表，可选热图"""
    out_dir = Path(out_dir)
    written = [
        _write(participation_frame(report), out_dir / FILES["participation"], float_format),
        _write(participation_frame(report, normalized=True), out_dir / FILES["participation_normalized"], float_format),
    ]
    electromech = [label for label in report.state_labels if label.endswith((".delta", ".omega"))]
    written.append(
        _write(
            participation_frame(report, normalized=True, states=electromech),
            out_dir / FILES["participation_electromech"],
            float_format,
        )
    )
    light = lightly_damped_filter(report, zeta_threshold)
    written.append(_write(dominant_states(report, light), out_dir / FILES["dominant_states"], float_format))

    if svg and report.n_modes:
        from ..plotting import heatmap

        modes = light or list(range(report.n_modes))
        written.append(
            heatmap(
                report.participation_normalized[:, modes],
                report.state_labels,
                [f"mode_{i + 1}" for i in modes],
                out_dir / FILES["participation_plot"],
                "归一化参与因子",
            )
        )
    return written


def write_residues(
    residue_report: ResidueReport,
    report: ModalReport,
    out_dir,
    zeta_threshold: Optional[float] = None,
    float_format: str = "%.10g",
    svg: bool = False,
) -> List[Path]:
    """写出弱阻尼模态的 residues.csv 与 site_ranking.csv，可选留数柱状图"""
    out_dir = Path(out_dir)
    light = lightly_damped_filter(report, zeta_threshold)
    written = [_write(residue_report.to_frame(light), out_dir / FILES["residues"], float_format)]

    rankings = []
    if residue_report.input_labels and residue_report.output_labels:
        for i in light:
            ranking = rank_sites(residue_report, i)
            rankings.append(ranking)
            if svg:
                from ..plotting import bar_chart

                written.append(
                    bar_chart(
                        ranking["input"].tolist(),
                        ranking["res_mag"].to_numpy(),
                        out_dir / FILES["residue_plot"].format(mode=i + 1),
                        "归一化留数",
                        f"模态 {i + 1} 控制点排序 ({ranking['output'].iloc[0]})",
                    )
                )
    columns = ["mode", "output", "rank", "input", "res_abs", "res_mag", "res_phase_deg", "compensation_deg"]
    frame = pd.concat(rankings, ignore_index=True) if rankings else pd.DataFrame(columns=columns)
    written.append(_write(frame, out_dir / FILES["site_ranking"], float_format))

    if rankings:
        best = rankings[0].iloc[0]
        logger.info(f"最弱阻尼模态的首选控制点: {best['input']}（补偿角 {best['compensation_deg']:.1f}°）")
    return written


def machine_areas(case) -> Dict[str, int]:
    """同步机标签 -> 区域编号，未给出区域时取 1"""
    return {
        label: (machine.area if machine.area is not None else 1)
        for label, machine in zip(case.machine_labels, case.machines)
    }


def count_near_zero(report: ModalReport, limit: Optional[float] = None) -> int:
    """模小于 limit 的特征值个数"""
    if limit is None:
        limit = SMALLSIGNAL_CONFIG["zero_eigenvalue"]
    return int(np.sum(np.abs(report.eigenvalues) < limit))
