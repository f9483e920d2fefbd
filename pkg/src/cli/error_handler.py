# -*- coding: utf-8 -*-
"""
错误处理：异常 -> 退出码
"""

import sys
from typing import Callable, Optional

from src.qwgrav.errors import (
    ConfigurationError,
    DomainError,
    GuardTrippedError,
    InvalidInputError,
    QWGravError,
)
from src.qwgrav.utils import logger
from src.service.types import ExitCode


def exit_code_for(exc: BaseException) -> Optional[ExitCode]:
    """
    映射异常到退出码，运行期保护优先（CFLViolationError 同时是配置错误，按保护处理）

    Returns:
        ExitCode，未知异常返回 None
    """
    if isinstance(exc, GuardTrippedError):
        return ExitCode.GUARD_TRIPPED
    if isinstance(exc, (ConfigurationError, InvalidInputError, DomainError)):
        return ExitCode.CONFIGURATION_ERROR
    return None


def run_with_error_handling(func: Callable[[], None]) -> int:
    """
    执行 func 并返回退出码；模拟器异常写入日志与 stderr，其他异常照常抛出
    """
    try:
        func()
    except QWGravError as exc:
        code = exit_code_for(exc)
        if code is None:
            raise
        label = "Guard tripped" if code is ExitCode.GUARD_TRIPPED else "Configuration error"
        logger.error(f"{label}: {exc}")
        print(f"{label}: {exc}", file=sys.stderr)
        return int(code)
    return int(ExitCode.SUCCESS)
