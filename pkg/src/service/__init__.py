# -*- coding: utf-8 -*-
"""
服务层模块
配置解析、角度场构造与各子命令的运行编排
"""

from .simulation_service import SimulationService
from .types import (
    Command,
    Panel,
    ExitCode,
    PanelPreset,
    RunArtifacts
)
from .config import RunConfig, ResolvedConfig, resolve_config, validate_run_config
from .field_factory import build_field, build_grid, build_params
from .pipeline_orchestrator import SimulationOrchestrator

__all__ = [
    'SimulationService',
    'Command',
    'Panel',
    'ExitCode',
    'PanelPreset',
    'RunArtifacts',
    'RunConfig',
    'ResolvedConfig',
    'resolve_config',
    'validate_run_config',
    'build_field',
    'build_grid',
    'build_params',
    'SimulationOrchestrator',
]
