#!/usr/bin/env python3
#

import logging

from cantorsums.config import settings

# 日志格式
logging_datefmt = "%m/%d/%Y %H:%M:%S"
logging_format = "[%(asctime)s][%(levelname)s]<%(funcName)s>: %(message)s"


logFormatter = logging.Formatter(fmt=logging_format, datefmt=logging_datefmt)

logger = logging.getLogger("cantorsums")
logger.setLevel(getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO))
while logger.handlers:  # avoid duplicated lines when the module is reloaded
    logger.handlers.pop()

consoleHandler = logging.StreamHandler()
consoleHandler.setFormatter(logFormatter)
logger.addHandler(consoleHandler)
logger.propagate = False


def set_level(level: str):
    """CLI 覆盖日志级别"""
    logger.setLevel(getattr(logging, level.upper(), logging.INFO))
