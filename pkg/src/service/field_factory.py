# -*- coding: utf-8 -*-
"""
根据 RunConfig 构造角度场与网格
"""

from typing import Tuple

from src.qwgrav import (
    CoinAngleField,
    ConstantField,
    LatticeGrid,
    SchwarzschildParams,
    SmoothTestField,
    TabulatedField,
    auto_extent,
    make_bh_field,
)
from src.qwgrav.coin import FieldKind

from .config import RunConfig


def build_field(config: RunConfig) -> CoinAngleField:
    """
    构造角度场

    Args:
        config: 运行配置

    Returns:
        CoinAngleField
    """
    kind = FieldKind(config.field_kind)
    if kind is FieldKind.CONSTANT:
        return ConstantField(config.theta0)
    if kind is FieldKind.SMOOTH_TEST:
        return SmoothTestField(config.theta0, config.amplitude, config.wavenumber, config.omega)
    if kind is FieldKind.SCHWARZSCHILD:
        return make_bh_field(build_params(config))
    return TabulatedField.from_tsv(config.table_path)


def build_params(config: RunConfig) -> SchwarzschildParams:
    return SchwarzschildParams(r_g=config.r_g, lam=config.lam)


def grid_window(config: RunConfig) -> Tuple[float, float]:
    """显式窗口优先，否则按初态支撑与光锥自动计算"""
    if config.x_min is not None and config.x_max is not None:
        return config.x_min, config.x_max
    return auto_extent(config.x0, config.dx0, config.steps, config.epsilon)


def build_grid(config: RunConfig) -> LatticeGrid:
    x_min, x_max = grid_window(config)
    return LatticeGrid.covering(x_min, x_max, config.epsilon)
