# -*- coding: utf-8 -*-
"""
运行配置

优先级（后者覆盖前者）：RunConfig 默认值 < configs/default.yaml 的 run 段
< 环境变量 QWGRAV_OUTPUT_DIR < --profile YAML < --config key=value 文件 < 命令行参数
"""

import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

from omegaconf import DictConfig, OmegaConf
from omegaconf.errors import OmegaConfBaseException
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.qwgrav.errors import ConfigurationError
from src.qwgrav.utils import get_config_from_file, get_config_from_keyvalue_file, parse_dotlist_lines

from .types import Panel, PanelPreset

PROJECT_ROOT = Path(__file__).resolve().parents[2]
DEFAULT_CONFIG_PATH = PROJECT_ROOT / "configs" / "default.yaml"
OUTPUT_DIR_ENV = "QWGRAV_OUTPUT_DIR"


def parse_complex(text: Union[str, int, float, complex]) -> complex:
    """解析 "1"、"1j"、"0.5-0.5j"，也接受 i 作为虚数单位"""
    if isinstance(text, (int, float, complex)):
        return complex(text)
    cleaned = str(text).strip().replace(" ", "").replace("i", "j")
    if cleaned in ("j", "+j"):
        cleaned = "1j"
    elif cleaned == "-j":
        cleaned = "-1j"
    return complex(cleaned)


class RunConfig(BaseModel):
    """模拟运行配置，字段名即命令行参数名"""

    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    # 角度场
    field_kind: Literal["constant", "smooth-test", "schwarzschild", "user-tabulated"] = Field(
        "schwarzschild", description="硬币角度场类型"
    )
    theta0: float = Field(0.5, description="常数/光滑测试场的基准角度")
    amplitude: float = Field(0.2, description="光滑测试场振幅 a")
    wavenumber: float = Field(0.1, description="光滑测试场波数 k")
    omega: float = Field(0.1, description="光滑测试场角频率 ω")
    r_g: float = Field(150.0, gt=0, description="Schwarzschild 半径（格点单位）")
    lam: float = Field(1.0, gt=0, description="坐标缩放 λ")
    table_path: Optional[str] = Field(None, description="表格角度场 TSV 路径")

    # 网格与演化
    epsilon: float = Field(0.5, gt=0, description="ε = Δt/𝒯 = Δx/ℒ")
    x_min: Optional[float] = Field(None, description="网格左端，None 时自动")
    x_max: Optional[float] = Field(None, description="网格右端，None 时自动")
    steps: int = Field(400, ge=0, description="行走步数")
    snapshot_stride: int = Field(2, ge=1, description="快照间隔")
    tail_tolerance: float = Field(1e-12, gt=0, description="边界保护容差")
    heatmap: bool = Field(True, description="是否输出 PGM 热图")

    # 初态
    x0: float = Field(50.5, description="高斯中心 X₀")
    dx0: float = Field(2.5, gt=0, description="高斯标准差 ΔX₀")
    spin_mix: List[str] = Field(["1", "1j"], description="自旋方向 (L, R)")

    # 测地线
    geodesic_starts: List[Tuple[float, float]] = Field([(0.0, 50.5)], description="测地线起点 [T, X]")
    geodesic_signs: List[int] = Field([1, -1], description="测地线方向")
    geodesic_dt: float = Field(0.05, gt=0, description="RK4 步长")
    t_max: float = Field(200.0, ge=0, description="测地线终止时间")

    # 收敛研究
    epsilons: List[float] = Field([0.1, 0.05, 0.025], description="逐次减半的 ε 列表")
    t_final: float = Field(10.0, gt=0, description="比较时刻")

    # 标量频闪演示
    strobe_omega: float = Field(0.3, description="ω")
    strobe_tscale: float = Field(1.0, gt=0, description="𝒯")
    strobe_sigma: int = Field(-1, description="σ = ±1")
    strobe_steps: int = Field(64, ge=4, description="序列长度")

    # 运行
    output_dir: str = Field("outputs", description="输出目录")
    seed: int = Field(0, description="随机种子")
    workers: int = Field(1, ge=1, description="并行 worker 数")
    show_progress: bool = Field(False, description="是否显示进度条")

    @field_validator("spin_mix", mode="before")
    @classmethod
    def _stringify(cls, value: Any) -> Any:
        if isinstance(value, (list, tuple)):
            return [str(v) for v in value]
        return value

    @field_validator("spin_mix")
    @classmethod
    def _check_spin(cls, value: List[str]) -> List[str]:
        if len(value) != 2:
            raise ValueError("needs exactly two components (L, R)")
        try:
            parts = [parse_complex(v) for v in value]
        except ValueError as e:
            raise ValueError(f"components must be complex numbers ({e})")
        if not all(math.isfinite(p.real) and math.isfinite(p.imag) for p in parts):
            raise ValueError("components must be finite")
        if all(p == 0 for p in parts):
            raise ValueError("must be nonzero")
        return value

    @field_validator("geodesic_signs")
    @classmethod
    def _check_signs(cls, value: List[int]) -> List[int]:
        if not value or any(s not in (-1, 1) for s in value):
            raise ValueError("each sign must be +1 or -1")
        return value

    @field_validator("epsilons")
    @classmethod
    def _check_epsilons(cls, value: List[float]) -> List[float]:
        if not value or any(not (e > 0) for e in value):
            raise ValueError("all epsilon values must be positive")
        return value

    @field_validator("strobe_sigma")
    @classmethod
    def _check_sigma(cls, value: int) -> int:
        if value not in (-1, 1):
            raise ValueError("must be +1 or -1")
        return value

    @model_validator(mode="after")
    def _check_consistency(self) -> 'RunConfig':
        if (self.x_min is None) != (self.x_max is None):
            raise ValueError("x_min and x_max must be given together")
        if self.x_min is not None and not (self.x_min < self.x_max):
            raise ValueError(f"x_min={self.x_min} must be smaller than x_max={self.x_max}")
        if self.field_kind == "user-tabulated" and not self.table_path:
            raise ValueError("field_kind=user-tabulated requires table_path")
        return self

    def spin_vector(self) -> Tuple[complex, complex]:
        return tuple(parse_complex(v) for v in self.spin_mix)

    def starts(self) -> List[Tuple[float, float]]:
        return [(float(T), float(X)) for T, X in self.geodesic_starts]

    def header_items(self) -> Dict[str, Any]:
        return dict(sorted(self.model_dump().items()))


def _format_location(loc: Sequence[Any]) -> str:
    return ".".join(str(p) for p in loc) or "config"


def validate_run_config(data: Dict[str, Any]) -> RunConfig:
    """
    校验运行配置

    Raises:
        ConfigurationError: 每个非法字段一条 "<field>: <reason>"
    """
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        messages = [f"{_format_location(err['loc'])}: {err['msg']}" for err in e.errors()]
        raise ConfigurationError("Invalid run configuration", messages) from None


@dataclass
class ResolvedConfig:
    """合并后的配置树、校验后的 RunConfig，以及用户显式指定的覆盖项"""
    run: RunConfig
    tree: DictConfig
    explicit: DictConfig

    def panel_preset(self, panel: Panel) -> PanelPreset:
        panels = self.tree.get("figure1", {}).get("panels", {})
        if panel.value not in panels:
            raise ConfigurationError(f"No preset for figure1 panel {panel.value!r}")
        return PanelPreset(**OmegaConf.to_container(panels[panel.value], resolve=True))

    def panel_config(self, panel: Panel) -> RunConfig:
        """面板预设覆盖 run 段，用户显式参数再覆盖面板预设"""
        preset = self.panel_preset(panel)
        data = OmegaConf.create(self.run.model_dump())
        data = OmegaConf.merge(data, {
            "field_kind": "schwarzschild",
            "lam": preset.lam,
            "x0": preset.x0,
            "steps": preset.steps,
            "snapshot_stride": preset.snapshot_stride,
            "geodesic_starts": [[0.0, preset.x0]],
            "geodesic_signs": [1, -1],
        }, self.explicit)
        config = validate_run_config(OmegaConf.to_container(data, resolve=True))
        if "t_max" not in self.explicit:
            config = config.model_copy(update={"t_max": config.steps * config.epsilon})
        return config

    def logging_section(self) -> Dict[str, Any]:
        section = self.tree.get("logging", None)
        if section is None:
            return {}
        return OmegaConf.to_container(section, resolve=True)


def resolve_config(
    profile: Optional[str] = None,
    keyvalue_file: Optional[str] = None,
    cli_overrides: Optional[Sequence[str]] = None,
    base_config: Optional[Union[str, Path]] = DEFAULT_CONFIG_PATH
) -> ResolvedConfig:
    """
    按优先级合并各配置来源

    Args:
        profile: YAML 配置（可通过 base_config 继承）
        keyvalue_file: 扁平 key=value 文件
        cli_overrides: 命令行 "key=value" 列表
        base_config: 默认 YAML，None 时只用内置默认值

    Returns:
        ResolvedConfig

    Raises:
        ConfigurationError: 文件不可读或字段非法
    """
    try:
        tree = OmegaConf.create({"run": RunConfig().model_dump()})
        if base_config is not None and Path(base_config).exists():
            tree = OmegaConf.merge(tree, get_config_from_file(str(base_config)))

        env_output = os.environ.get(OUTPUT_DIR_ENV)
        if env_output:
            tree = OmegaConf.merge(tree, {"run": {"output_dir": env_output}})

        if profile:
            tree = OmegaConf.merge(tree, get_config_from_file(profile))

        explicit = OmegaConf.create({})
        if keyvalue_file:
            explicit = OmegaConf.merge(explicit, get_config_from_keyvalue_file(keyvalue_file))
        if cli_overrides:
            explicit = OmegaConf.merge(explicit, parse_dotlist_lines(cli_overrides))
        tree = OmegaConf.merge(tree, {"run": explicit})
        run_data = OmegaConf.to_container(tree.run, resolve=True)
    except (OSError, ValueError, OmegaConfBaseException) as e:
        raise ConfigurationError(f"Cannot read configuration: {e}") from None

    return ResolvedConfig(run=validate_run_config(run_data), tree=tree, explicit=explicit)
