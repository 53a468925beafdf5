"""
仿真结果输出
"""

import logging
from pathlib import Path
from typing import List

from .config import SIMULATE_CONFIG
from .runner import SimulationResult

logger = logging.getLogger(__name__)


def write_simulation(result: SimulationResult, out_dir, float_format: str = "%.10g", svg: bool = False) -> List[Path]:
    """
    写出 states.csv、bus_voltages.csv、frequencies.csv、events.csv，可选 SVG 曲线

    Args:
        result: 仿真结果
        out_dir: 输出目录
        float_format: 浮点格式
        svg: 是否输出电压、频率曲线

    Returns:
        输出文件列表
    """
    out_dir = Path(out_dir)
    files = SIMULATE_CONFIG["files"]
    written = []

    frames = {
        "states": result.states_frame(),
        "bus_voltages": result.voltages_frame(),
        "frequencies": result.frequencies_frame(),
        "events": result.events_frame(),
    }
    for key, frame in frames.items():
        path = out_dir / files[key]
        frame.to_csv(path, index=False, float_format=float_format)
        written.append(path)

    if svg:
        from ..plotting import line_plot

        written.append(
            line_plot(frames["bus_voltages"], "t", out_dir / files["voltage_plot"], "电压幅值 (pu)", "母线电压")
        )
        written.append(
            line_plot(frames["frequencies"], "t", out_dir / files["frequency_plot"], "频率 (Hz)", "同步机频率")
        )

    logger.info(f"仿真结果已写入 {out_dir}（{len(written)} 个文件）")
    return written
