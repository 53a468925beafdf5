"""
频率响应结果输出
"""

import logging
from pathlib import Path
from typing import List, Optional

import numpy as np
import pandas as pd

from .config import FREQRESP_CONFIG
from .margins import MarginReport
from .response import FrequencyResponse, unwrap_phase

logger = logging.getLogger(__name__)


def export_plots(
    response: FrequencyResponse,
    margin_report: Optional[MarginReport],
    pz,
    out_dir,
    phase=None,
    float_format: str = "%.10g",
    svg: bool = False,
) -> List[Path]:
    """
    写出 bode.csv、nyquist.csv、nichols.csv、poles_zeros.csv、margins.csv，可选 SVG

    Args:
        response: 频率响应
        margin_report: 裕度结果，None 时 margins.csv 只有表头
        pz: (poles, zeros)
        out_dir: 输出目录
        phase: 展开相位，缺省时重新展开

    Returns:
        输出文件列表
    """
    out_dir = Path(out_dir)
    files = FREQRESP_CONFIG["files"]
    if phase is None:
        phase = unwrap_phase(response)
    mag_db = response.mag_db

    poles, zeros = pz
    frames = {
        "bode": pd.DataFrame({"omega": response.omega, "mag_db": mag_db, "phase_deg": phase}),
        "nyquist": pd.DataFrame({"re": response.g.real, "im": response.g.imag}),
        "nichols": pd.DataFrame({"phase_deg": phase, "mag_db": mag_db}),
        "poles_zeros": pd.DataFrame(
            {
                "kind": ["pole"] * len(poles) + ["zero"] * len(zeros),
                "re": np.concatenate([np.real(poles), np.real(zeros)]),
                "im": np.concatenate([np.imag(poles), np.imag(zeros)]),
            },
            columns=["kind", "re", "im"],
        ),
        "margins": pd.DataFrame(
            [margin_report.as_row()] if margin_report is not None else [],
            columns=["input", "output", "gain_margin_db", "omega_pc", "phase_margin_deg", "omega_gc",
                     "stable_closed_loop"],
        ),
    }
    written = []
    for key, frame in frames.items():
        path = out_dir / files[key]
        frame.to_csv(path, index=False, float_format=float_format)
        written.append(path)

    if svg and len(response):
        from ..plotting import bode_plot, nichols_plot, nyquist_plot, pole_zero_plot

        title = f"{response.io[0]} -> {response.io[1]}"
        written.append(bode_plot(response.omega, mag_db, phase, out_dir / files["bode_plot"], title))
        written.append(nyquist_plot(response.g, out_dir / files["nyquist_plot"], title))
        written.append(nichols_plot(phase, mag_db, out_dir / files["nichols_plot"], title))
        written.append(pole_zero_plot(poles, zeros, out_dir / files["pole_zero_plot"], title))

    logger.info(f"频率响应结果已写入 {out_dir}（{len(written)} 个文件）")
    return written
