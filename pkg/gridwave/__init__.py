"""
gridwave - 电力系统动态仿真与小信号分析工具包
"""

import logging
import os

__version__ = "1.0.0"

_HANDLER_FLAG = "_gridwave_handler"


def setup_logging(config=None):
    """
    设置 gridwave 包日志

    调试模式下输出到控制台，否则写入 LOG_DIR/gridwave.log。重复调用不会重复添加处理器。

    Args:
        config: 配置对象（config 包中的 Config 实例），为空时按环境变量获取

    Returns:
        gridwave 顶层 logger
    """
    if config is None:
        from config import get_config

        config = get_config()

    logger = logging.getLogger("gridwave")
    level = getattr(logging, str(config.LOG_LEVEL).upper(), logging.INFO)

    for handler in list(logger.handlers):
        if getattr(handler, _HANDLER_FLAG, False):
            logger.removeHandler(handler)
            handler.close()

    if not config.DEBUG:
        # 批量运行：文件日志
        os.makedirs(config.LOG_DIR, exist_ok=True)
        handler = logging.FileHandler(os.path.join(config.LOG_DIR, config.LOG_FILE))
    else:
        # 开发环境：控制台日志
        handler = logging.StreamHandler()

    handler.setFormatter(logging.Formatter(config.LOG_FORMAT))
    handler.setLevel(level)
    setattr(handler, _HANDLER_FLAG, True)

    logger.addHandler(handler)
    logger.setLevel(level)
    return logger


__all__ = ["__version__", "setup_logging"]
