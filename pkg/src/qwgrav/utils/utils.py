# -*- coding: utf-8 -*-

import logging
import os
import time
from functools import wraps
from typing import Optional

DEFAULT_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def get_logger(name):
    logger = logging.getLogger(name)
    if logger.handlers:
        return logger
    logger.setLevel(logging.INFO)

    console_handler = logging.StreamHandler()
    console_handler.setLevel(logging.INFO)

    formatter = logging.Formatter(DEFAULT_FORMAT)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)
    logger.propagate = False
    return logger


logger = get_logger('qwgrav')


def setup_logging(level: str = "INFO", format: Optional[str] = None, file: Optional[str] = None):
    """
    按配置文件 logging 段调整日志级别与输出

    Args:
        level: 日志级别名称
        format: 日志格式，None 时使用默认格式
        file: 额外写入的日志文件，None 时只输出到 stderr
    """
    level_value = logging.getLevelName(str(level).upper())
    if not isinstance(level_value, int):
        raise ValueError(f"Unknown logging level: {level}")

    formatter = logging.Formatter(format or DEFAULT_FORMAT)
    logger.setLevel(level_value)
    for handler in logger.handlers:
        handler.setLevel(level_value)
        handler.setFormatter(formatter)

    if file:
        os.makedirs(os.path.dirname(os.path.abspath(file)), exist_ok=True)
        already = any(
            isinstance(h, logging.FileHandler) and h.baseFilename == os.path.abspath(file)
            for h in logger.handlers
        )
        if not already:
            file_handler = logging.FileHandler(file, encoding='utf-8')
            file_handler.setLevel(level_value)
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)


class stage_timer:
    """ Wall-clock timer for simulation stages.

        Supports both context manager and decorator usage. Only active when
        QWGRAV_DEBUG=1.

        Example as context manager:
        ```python
        with stage_timer('walk evolution'):
            run()
        ```

        Example as decorator:
        ```python
        @stage_timer('black-hole panel')
        def run_panel(config):
            pass
        ```
    """

    def __init__(self, name=None):
        self.name = name
        self.time = None

    def __enter__(self):
        if os.environ.get('QWGRAV_DEBUG', '0') == '1':
            self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_value, exc_tb):
        if os.environ.get('QWGRAV_DEBUG', '0') == '1':
            self.time = (time.perf_counter() - self.start) * 1000.0
            if self.name is not None:
                logger.info(f'{self.name} takes {self.time:.1f} ms')

    def __call__(self, func):

        @wraps(func)
        def wrapper(*args, **kwargs):
            with stage_timer(self.name):
                result = func(*args, **kwargs)
            return result

        return wrapper
