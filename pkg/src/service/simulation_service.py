# -*- coding: utf-8 -*-
"""
模拟服务 - 统一对外接口
"""

import concurrent.futures as cf
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from src.qwgrav.utils import logger

from .config import ResolvedConfig, RunConfig, validate_run_config
from .pipeline_orchestrator import SimulationOrchestrator
from .types import Command, Panel, RunArtifacts


def _panel_job(config_data: Dict[str, Any], panel_value: str, output_dir: str) -> RunArtifacts:
    """worker 进程入口：每个面板只写自己的目录"""
    config = validate_run_config(config_data)
    return SimulationOrchestrator().run_panel(config, Panel(panel_value), Path(output_dir))


class SimulationService:
    """模拟服务 - 统一对外接口"""

    def __init__(self, resolved: ResolvedConfig):
        """
        初始化服务

        Args:
            resolved: 合并后的配置
        """
        self.resolved = resolved
        self.orchestrator = SimulationOrchestrator()

    @property
    def config(self) -> RunConfig:
        return self.resolved.run

    @property
    def output_dir(self) -> Path:
        return Path(self.config.output_dir)

    def run(self, command: Command, panels: Optional[Sequence[Panel]] = None) -> List[RunArtifacts]:
        """
        执行子命令

        Args:
            command: 子命令
            panels: figure1 的面板列表

        Returns:
            每个独立运行一个 RunArtifacts
        """
        if command is Command.WALK:
            return [self.orchestrator.run_walk(self.config, self.output_dir)]
        if command is Command.FIGURE1:
            return self.figure1(panels or list(Panel))
        if command is Command.CONVERGE:
            return [self.orchestrator.run_convergence(self.config, self.output_dir)]
        if command is Command.GEODESIC:
            return [self.orchestrator.run_geodesics(self.config, self.output_dir)]
        return [self.orchestrator.run_strobe(self.config, self.output_dir)]

    def figure1(self, panels: Sequence[Panel]) -> List[RunArtifacts]:
        """
        生成黑洞面板，workers > 1 时分发到进程池，结果按输入顺序返回

        Args:
            panels: 面板列表

        Returns:
            每个面板一个 RunArtifacts
        """
        jobs = [
            (self.resolved.panel_config(panel).model_dump(), panel.value,
             str(self.output_dir / f"figure1_{panel.value}"))
            for panel in panels
        ]
        workers = min(self.config.workers, len(jobs))
        if workers > 1:
            logger.info(f"Running {len(jobs)} panels on {workers} workers")
            with cf.ProcessPoolExecutor(max_workers=workers) as ex:
                return list(ex.map(_panel_job, *zip(*jobs)))
        return [_panel_job(*job) for job in jobs]
