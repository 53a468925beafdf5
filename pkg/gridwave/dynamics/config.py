#!/usr/bin/env python3
"""
动态元件模型配置模块
"""

DYNAMICS_CONFIG = {
    # 同步机状态名（含励磁与原动机），顺序即状态向量顺序
    "machine_states": [
        "delta", "omega", "e_q_p", "e_d_p", "psi_1d", "psi_2q",
        "e_fd", "r_f", "v_r",
        "t_m", "p_sv",
    ],
    # 新能源电站状态名
    "res_states": ["i_p", "i_q", "q_pi"],
    # 同步机设定值
    "machine_setpoints": ["v_ref", "p_c"],
    # 新能源设定值
    "res_setpoints": ["q_ref", "p_ref"],
    # 初始化时判定分母为零的阈值
    "denominator_eps": 1.0e-12,
}


def get_config():
    """获取动态元件配置"""
    return DYNAMICS_CONFIG.copy()
