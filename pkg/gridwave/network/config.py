"""
网络建模配置
"""

NETWORK_CONFIG = {
    # 默认三相短路接地导纳（纯电导，pu）
    "fault_admittance": 1.0e7,
    # 消去子阵条件数上限，超过视为奇异
    "singular_cond": 1.0e14,
    # 吸收负荷时允许的最小母线电压幅值
    "zero_voltage": 1.0e-6,
    # 同步机内节点标签后缀
    "internal_suffix": ".internal",
}


def get_config():
    """获取网络建模配置"""
    return NETWORK_CONFIG.copy()
