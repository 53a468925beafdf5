#!/usr/bin/env python3
"""
时域仿真配置模块
"""

SIMULATE_CONFIG = {
    # 积分步长与仿真时长（s）
    "dt": 1.0e-3,
    "t_end": 10.0,
    # 默认故障投入、切除时刻
    "t_f1": 1.0,
    "t_f2": 1.1,
    # 输出抽样间隔（步）
    "decimation": 1,
    # 初始化残差上限
    "init_residual": 1.0e-6,
    # 状态量发散判据
    "blowup_limit": 1.0e6,
    # 流水线中无扰动平启动校验时长（s）与允许偏差
    "flat_run_t_end": 2.0,
    "flat_run_tolerance": 1.0e-4,
    # 判定母线有注入的阈值
    "injection_eps": 1.0e-9,
    # 输出文件
    "files": {
        "states": "states.csv",
        "bus_voltages": "bus_voltages.csv",
        "frequencies": "frequencies.csv",
        "events": "events.csv",
        "voltage_plot": "bus_voltages.svg",
        "frequency_plot": "frequencies.svg",
    },
}


def get_config():
    """获取仿真配置"""
    return SIMULATE_CONFIG.copy()
