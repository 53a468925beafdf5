"""
Pytest 配置和固件
"""

import pytest
import sys
import os

# 添加项目根目录到 Python 路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))


@pytest.fixture
def two_bus_dir():
    """内置两母线算例目录"""
    from gridwave.case.config import bundled_case_path

    return bundled_case_path("two_bus")


@pytest.fixture
def smib_dir():
    """内置单机无穷大算例目录"""
    from gridwave.case.config import bundled_case_path

    return bundled_case_path("smib")


@pytest.fixture
def ieee68_dir():
    """内置 68 母线算例目录"""
    from gridwave.case.config import bundled_case_path

    return bundled_case_path("ieee68")


@pytest.fixture
def case_writer(tmp_path):
    """在临时目录写出算例，返回 write(name, **文件覆盖) 函数"""
    from tests.helpers import write_case

    def write(name="case", files=None, **overrides):
        return write_case(tmp_path / name, files, **overrides)

    return write


@pytest.fixture
def third_order_model():
    """G(s) = 1/(s(s+1)(s+2)) 的状态空间模型"""
    from tests.helpers import third_order_model as build

    return build()


@pytest.fixture
def smib_system():
    """已初始化的单机无穷大动态系统"""
    from gridwave.case import load_case
    from gridwave.case.config import bundled_case_path
    from gridwave.simulate import build_system

    case = load_case(bundled_case_path("smib"))
    return case, build_system(case)
