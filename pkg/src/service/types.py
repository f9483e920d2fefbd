# -*- coding: utf-8 -*-
"""
服务层类型定义
"""

from dataclasses import dataclass, field, asdict
from enum import Enum, IntEnum
from pathlib import Path
from typing import Any, Dict, List, Optional


class Command(Enum):
    """CLI 子命令"""
    WALK = "walk"
    FIGURE1 = "figure1"
    CONVERGE = "converge"
    GEODESIC = "geodesic"
    STROBE_DEMO = "strobe-demo"


class Panel(Enum):
    """黑洞图的四个面板"""
    A = "a"
    B = "b"
    C = "c"
    D = "d"


class ExitCode(IntEnum):
    """进程退出码"""
    SUCCESS = 0
    CONFIGURATION_ERROR = 2
    GUARD_TRIPPED = 3


@dataclass(frozen=True)
class PanelPreset:
    """面板默认参数（重建值，非原始数据）"""
    lam: float
    x0: float
    steps: int
    snapshot_stride: int = 10

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class RunArtifacts:
    """一次运行的输出"""
    command: Command
    output_dir: Path
    files: List[Path] = field(default_factory=list)
    processing_time: float = 0.0
    summary: Dict[str, Any] = field(default_factory=dict)
    panel: Optional[Panel] = None

    def add(self, path: Path) -> Path:
        self.files.append(Path(path))
        return Path(path)
