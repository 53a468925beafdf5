#!/usr/bin/env python3
"""
频率响应配置模块
"""

FREQRESP_CONFIG = {
    # 频率网格（rad/s，对数均匀）
    "wmin": 1.0e-2,
    "wmax": 1.0e3,
    "points": 400,
    # 相位展开时相邻点跳变上限（度）
    "unwrap_jump_deg": 170.0,
    # 网格点与特征值距离下限
    "pole_proximity": 1.0e-12,
    # 穿越频率求根精度（rad/s）
    "crossover_xtol": 1.0e-6,
    # 闭环特征值实部上限
    "stability_tol": 1.0e-9,
    # 相位展开有歧义时网格加密次数（每次点数加倍）
    "max_refinements": 3,
    # 有限零点判据
    "zero_beta_tol": 1.0e-10,
    "zero_max_abs": 1.0e12,
    # 流水线默认通道：第一台同步机转速对同步角速度输入
    "default_input": "omega_s",
    "default_output_state": "omega",
    # 输出文件
    "files": {
        "bode": "bode.csv",
        "nyquist": "nyquist.csv",
        "nichols": "nichols.csv",
        "poles_zeros": "poles_zeros.csv",
        "margins": "margins.csv",
        "bode_plot": "bode.svg",
        "nyquist_plot": "nyquist.svg",
        "nichols_plot": "nichols.svg",
        "pole_zero_plot": "poles_zeros.svg",
    },
}


def get_config():
    """获取频率响应配置"""
    return FREQRESP_CONFIG.copy()


def default_grid(wmin=None, wmax=None, points=None):
    """对数均匀频率网格"""
    import numpy as np

    wmin = FREQRESP_CONFIG["wmin"] if wmin is None else wmin
    wmax = FREQRESP_CONFIG["wmax"] if wmax is None else wmax
    points = FREQRESP_CONFIG["points"] if points is None else points
    if not 0 < wmin < wmax or int(points) < 2:
        raise ValueError(f"无效频率网格: wmin={wmin}, wmax={wmax}, points={points}")
    return np.logspace(np.log10(wmin), np.log10(wmax), int(points))
