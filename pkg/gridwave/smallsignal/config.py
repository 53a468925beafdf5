#!/usr/bin/env python3
"""
小信号分析配置模块
"""

SMALLSIGNAL_CONFIG = {
    # 线性化前的平衡点判据
    "equilibrium_tol": 1.0e-5,
    # 中心差分步长 h_j = max(abs_step, rel_step·|x_j|)
    "abs_step": 1.0e-6,
    "rel_step": 1.0e-6,
    # 右特征向量矩阵条件数上限
    "condition_limit": 1.0e12,
    # 弱阻尼判据（%）
    "zeta_threshold": 10.0,
    # 视为零特征值的模
    "zero_eigenvalue": 1.0e-6,
    # 区间振荡频率上限（Hz）
    "interarea_max_hz": 1.0,
    # 两区均值相量夹角超过该值视为反向摆动（度）
    "opposition_deg": 90.0,
    # 主导状态的归一化参与因子下限
    "dominant_threshold": 0.5,
    # 默认振型筛选
    "shape_filter": "*.omega",
    # 输出文件
    "files": {
        "modes": "modes.csv",
        "lightly_damped": "lightly_damped.csv",
        "participation": "participation.csv",
        "participation_normalized": "participation_normalized.csv",
        "participation_electromech": "participation_electromech.csv",
        "dominant_states": "dominant_states.csv",
        "mode_shapes": "mode_shapes.csv",
        "residues": "residues.csv",
        "site_ranking": "site_ranking.csv",
        "participation_plot": "participation.svg",
        "compass_plot": "mode_{mode}_shape.svg",
        "residue_plot": "mode_{mode}_residues.svg",
    },
}


def get_config():
    """获取小信号分析配置"""
    return SMALLSIGNAL_CONFIG.copy()
