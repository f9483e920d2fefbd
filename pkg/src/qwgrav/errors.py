# -*- coding: utf-8 -*-
"""
异常类型定义

CLI 根据异常类型映射退出码（见 src/cli/error_handler.py）。
"""

from typing import List, Optional


class QWGravError(Exception):
    """所有模拟器异常的基类"""


class InvalidInputError(QWGravError, ValueError):
    """参数本身非法（非有限角度、n=0、h<=0 等）"""


class DomainError(QWGravError, ValueError):
    """查询点超出定义域"""


class ConfigurationError(QWGravError, ValueError):
    """运行配置非法"""

    def __init__(self, message: str, errors: Optional[List[str]] = None):
        """
        Args:
            message: 总体描述
            errors: 字段级错误信息列表，格式 "<field>: <reason>"
        """
        self.errors = list(errors or [])
        if self.errors:
            message = message + "\n" + "\n".join(f"  - {e}" for e in self.errors)
        super().__init__(message)


class GuardTrippedError(QWGravError, RuntimeError):
    """运行期保护条件触发"""


class BoundaryGuardError(GuardTrippedError):
    """边界缓冲区概率超过容差，有限格点不再等价于无限格点"""


class CFLViolationError(GuardTrippedError, ConfigurationError):
    """连续极限 PDE 求解器的 CFL 条件不满足"""

    def __init__(self, message: str):
        ConfigurationError.__init__(self, message)
