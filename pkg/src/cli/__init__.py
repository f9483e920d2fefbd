# -*- coding: utf-8 -*-
"""
命令行模块
"""

from .error_handler import exit_code_for, run_with_error_handling

__all__ = [
    'exit_code_for',
    'run_with_error_handling',
]
