"""
gridwave 运行环境配置

GRIDWAVE_ENV 选择环境，未设置或名称未知时使用 development。
"""

import os

from .base import Config
from .development import DevelopmentConfig
from .production import ProductionConfig
from .testing import TestingConfig

ENV_VAR = "GRIDWAVE_ENV"

config = {
    "development": DevelopmentConfig,
    "production": ProductionConfig,
    "testing": TestingConfig,
    "default": DevelopmentConfig,
}

# 常用简写
ALIASES = {"dev": "development", "prod": "production", "test": "testing"}


def get_config(config_name=None) -> Config:
    """
    按环境名构造配置对象

    Args:
        config_name: development/production/testing 或简写 dev/prod/test，缺省读 GRIDWAVE_ENV

    Returns:
        配置类实例（每次调用都是新实例，可自由修改）
    """
    name = (config_name or os.environ.get(ENV_VAR) or "default").strip().lower()
    name = ALIASES.get(name, name)
    return config.get(name, config["default"])()


__all__ = [
    "Config",
    "DevelopmentConfig",
    "ProductionConfig",
    "TestingConfig",
    "get_config",
    "config",
]
