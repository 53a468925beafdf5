"""
测试共用的小模型和算例写入工具
"""

from pathlib import Path

import numpy as np

from gridwave.smallsignal import LinearModel

TWO_BUS_FILES = {
    "buses.csv": (
        "id,kind,v_set,theta_deg,p_load,q_load,g_shunt,b_shunt\n"
        "1,slack,1.0,0,0,0,0,0\n"
        "2,pq,1.0,0,0.5,0,0,0\n"
    ),
    "branches.csv": "from,to,r,x,b,tap,shift_deg,status\n1,2,0,0.1,0,1,0,in\n",
    "scenario.cfg": "base_mva = 100\nfreq_hz = 60\nt_end = 1.0\ndt = 0.01\nfault_bus = none\n",
}


def write_case(case_dir, files=None, **overrides):
    """
    写出一个算例目录

    Args:
        case_dir: 目标目录
        files: 文件名 -> 内容，缺省为两母线算例
        overrides: 额外覆盖的文件（文件名中的点写成双下划线，例如 buses__csv）

    Returns:
        目录路径
    """
    case_dir = Path(case_dir)
    case_dir.mkdir(parents=True, exist_ok=True)
    contents = dict(TWO_BUS_FILES if files is None else files)
    for key, text in overrides.items():
        contents[key.replace("__", ".")] = text
    for name, text in contents.items():
        if text is None:
            continue
        (case_dir / name).write_text(text, encoding="utf-8")
    return case_dir


def third_order_model():
    """G(s) = 1/(s(s+1)(s+2))，可控标准型"""
    a = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, -2.0, -3.0]])
    b = np.array([[0.0], [0.0], [1.0]])
    c = np.array([[1.0, 0.0, 0.0]])
    d = np.zeros((1, 1))
    return LinearModel(a, b, c, d, ("x1", "x2", "x3"), ("u",), ("y",))


def pendulum_rhs(stiffness=4.0, damping=0.2):
    """带阻尼单摆 x = (theta, omega)，输入为外加力矩"""

    def rhs(x, u):
        theta, omega = x
        return np.array([omega, -stiffness * np.sin(theta) - damping * omega + u[0]])

    return rhs
