#!/usr/bin/env python3
"""
命令行配置模块
"""

CLI_CONFIG = {
    "prog": "gridwave",
    # 退出码
    "exit_ok": 0,
    "exit_domain_error": 1,
    "exit_usage_error": 2,
    # 运行清单
    "manifest_file": "manifest.json",
    "checksum_chunk": 1 << 16,
    # 调试导出的导纳矩阵
    "ybus_file": "ybus.csv",
    "yred_file": "yred_{topology}.csv",
    # 流水线各阶段输出子目录（按执行顺序）
    "stages": (
        ("load", None),
        ("powerflow", "powerflow"),
        ("flat_run", "flat_run"),
        ("simulate", "simulate"),
        ("linearize", "linearize"),
        ("modes", "modes"),
        ("residues", "residues"),
        ("freqresp", "freqresp"),
    ),
}


def get_config():
    """获取命令行配置"""
    return CLI_CONFIG.copy()


def stage_dirs():
    """阶段名 -> 输出子目录（无输出的阶段不在其中）"""
    return {stage: sub for stage, sub in CLI_CONFIG["stages"] if sub is not None}
