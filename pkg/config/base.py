"""
gridwave 运行配置
"""

import os


class Config:
    """基础配置类"""

    # 应用程序配置
    APP_NAME = "gridwave"
    APP_VERSION = "1.0.0"

    # 运行环境
    DEBUG = os.environ.get("GRIDWAVE_DEBUG", "True").lower() == "true"
    TESTING = False

    # 日志配置
    LOG_LEVEL = os.environ.get("GRIDWAVE_LOG_LEVEL", "INFO")
    LOG_DIR = os.environ.get("GRIDWAVE_LOG_DIR", "logs")
    LOG_FILE = "gridwave.log"
    LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    # 输出配置
    OUTPUT_DIR = os.environ.get("GRIDWAVE_OUTPUT_DIR", "results")
    OUTPUT_FLOAT_FORMAT = "%.10g"
    SVG_ENABLED = os.environ.get("GRIDWAVE_SVG", "False").lower() == "true"

    def to_dict(self):
        """
        导出全部大写配置项

        Returns:
            配置字典
        """
        return {
            key: getattr(self, key)
            for key in dir(self)
            if key.isupper() and not key.startswith("_")
        }

    def __repr__(self):
        return f"<{self.__class__.__name__} log_level={self.LOG_LEVEL} debug={self.DEBUG}>"

    def __str__(self):
        return f"{self.APP_NAME} {self.APP_VERSION} ({self.__class__.__name__})"
