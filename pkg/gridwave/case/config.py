#!/usr/bin/env python3
"""
算例文件格式配置模块
"""

from pathlib import Path

# 内置算例目录
BASE_DIR = Path(__file__).parent

CASE_CONFIG = {
    # 必需文件
    "required_files": ["buses.csv", "branches.csv", "scenario.cfg"],

    # 表格列定义：required 为固定顺序的必需列，optional 为可选尾列
    "tables": {
        "buses.csv": {
            "required": ["id", "kind", "v_set", "theta_deg", "p_load", "q_load", "g_shunt", "b_shunt"],
            "optional": ["p_gen"],
        },
        "branches.csv": {
            "required": ["from", "to", "r", "x", "b", "tap", "shift_deg", "status"],
            "optional": [],
        },
        "machines.csv": {
            "required": [
                "bus", "r_s", "x_ls", "x_d", "x_d_p", "x_d_pp", "x_q", "x_q_p", "x_q_pp",
                "t_do_p", "t_do_pp", "t_qo_p", "t_qo_pp", "h",
            ],
            "optional": ["t_fw", "area"],
        },
        "exciters.csv": {
            "required": ["machine", "k_a", "t_a", "k_e", "t_e", "k_f", "t_f"],
            "optional": ["sat_a", "sat_b", "vr_max", "vr_min"],
        },
        "turbines.csv": {
            "required": ["machine", "t_ch", "t_sv", "r_d"],
            "optional": [],
        },
        "res_plants.csv": {
            "required": ["bus", "t_g", "k_p", "k_i"],
            "optional": ["ip_max", "iq_max", "iq_min", "v_freeze", "technology"],
        },
    },

    # 注释符号
    "comment_char": "#",

    # 支路状态取值
    "status_values": {"in": True, "1": True, "out": False, "0": False},

    # 新能源技术类型
    "res_technologies": ["pv", "wind", "bess"],

    # 内置算例（名称 -> 目录），别名指向同一目录
    "bundled": {
        "ieee68": BASE_DIR / "data" / "ieee68",
        "68bus": BASE_DIR / "data" / "ieee68",
        "smib": BASE_DIR / "data" / "smib",
        "two_bus": BASE_DIR / "data" / "two_bus",
    },

    # 写出算例时的浮点格式（保证读回后数值不变）
    "float_format": "%.17g",
}


def get_config():
    """获取算例格式配置"""
    return CASE_CONFIG.copy()


def bundled_case_path(name: str):
    """
    解析内置算例名称

    Args:
        name: 算例名称或别名

    Returns:
        算例目录，未知名称返回 None
    """
    return CASE_CONFIG["bundled"].get(name)


def list_bundled_cases():
    """列出内置算例名称（不含别名）"""
    seen = {}
    for name, path in CASE_CONFIG["bundled"].items():
        seen.setdefault(path, name)
    return sorted(seen.values())


if __name__ == "__main__":
    for case_name in list_bundled_cases():
        print(f"{case_name}: {bundled_case_path(case_name)}")
