"""
开发环境配置
"""

import os

from .base import Config


class DevelopmentConfig(Config):
    """开发环境配置：日志输出到终端，缺省 DEBUG 级别（含每次牛顿迭代的不平衡量）"""

    DEBUG = True

    def __init__(self):
        super().__init__()
        self.LOG_LEVEL = os.environ.get("GRIDWAVE_LOG_LEVEL", "DEBUG")
