"""
Production Configuration
"""

from .base import Config
import os


class ProductionConfig(Config):
    """批量运行环境配置，日志写入文件"""

    DEBUG = False
    LOG_LEVEL = "INFO"
    TESTING = False

    def __init__(self):
        """初始化批量运行配置"""
        super().__init__()
        self.LOG_DIR = os.environ.get("GRIDWAVE_LOG_DIR")
        if not self.LOG_DIR:
            raise ValueError("生产环境必须设置 GRIDWAVE_LOG_DIR 环境变量")
