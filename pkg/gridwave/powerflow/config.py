#!/usr/bin/env python3
"""
潮流计算配置模块
"""

POWERFLOW_CONFIG = {
    # 收敛判据（最大功率不平衡量，pu）
    "tol": 1.0e-8,
    # 最大迭代次数
    "max_iter": 20,
    # 雅可比矩阵条件数上限
    "jacobian_cond": 1.0e14,
    # 结果文件
    "solution_file": "solution.csv",
}


def get_config():
    """获取潮流计算配置"""
    return POWERFLOW_CONFIG.copy()


def validate_settings(tol: float, max_iter: int) -> bool:
    """
    验证潮流参数

    Args:
        tol: 收敛判据
        max_iter: 最大迭代次数

    Returns:
        参数是否有效
    """
    return tol > 0 and int(max_iter) >= 1
