# -*- coding: utf-8 -*-
"""
Lemaître 坐标下的二维 Schwarzschild 黑洞角度场与零测地线

T = τ，X = λρ，r = [ (3/2)(X/λ − T) ]^{2/3} r_g^{1/3}。
在 𝒟（−g_XX ≥ 1）内 cosθ = λ√(r/r_g)；𝒟 外截断为 θ = 0，奇点左侧截断为 θ = π/2。
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np

from .coin import ArrayLike, CoinAngleField, FieldKind
from .errors import DomainError, InvalidInputError
from .utils import logger

# X = λT 处的舍入容差（相对于 max(1, |T|)）
SINGULARITY_SLACK = 1e-12


class DomainLocation(Enum):
    """𝒟 右边界相对视界的位置"""
    INSIDE_HORIZON = "inside-horizon"
    HORIZON = "horizon"
    EXTENDS_OUTSIDE = "extends-outside"


class TerminationReason(Enum):
    REACHED_SINGULARITY = "reached-singularity"
    LEFT_GRID = "left-grid"
    MAX_TIME = "max-time"


@dataclass(frozen=True)
class SchwarzschildParams:
    r_g: float
    lam: float

    def __post_init__(self):
        if not (math.isfinite(self.r_g) and self.r_g > 0):
            raise InvalidInputError(f"r_g must be positive and finite, got {self.r_g}")
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise InvalidInputError(f"lambda must be positive and finite, got {self.lam}")


def _proper_coordinate(params: SchwarzschildParams, T: ArrayLike, X: ArrayLike) -> np.ndarray:
    """X/λ − T = ρ − τ"""
    T = np.asarray(T, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    return X / params.lam - T


def radius(params: SchwarzschildParams, T: ArrayLike, X: ArrayLike) -> ArrayLike:
    """
    Schwarzschild 半径 r(T, X)

    Raises:
        DomainError: X < λT
    """
    s = _proper_coordinate(params, T, X)
    slack = SINGULARITY_SLACK * np.maximum(1.0, np.abs(np.asarray(T, dtype=np.float64)))
    if np.any(s < -slack):
        raise DomainError("radius is undefined for X < lambda*T (beyond the singularity)")
    s = np.maximum(s, 0.0)
    r = np.cbrt(1.5 * s) ** 2 * np.cbrt(params.r_g)
    if np.ndim(r) == 0:
        return float(r)
    return r


def _raw_cos(params: SchwarzschildParams, T: ArrayLike, X: ArrayLike) -> np.ndarray:
    """λ·(1.5 s / r_g)^{1/3}，s < 0 时为负"""
    s = _proper_coordinate(params, T, X)
    return params.lam * np.cbrt(1.5 * s / params.r_g)


def clamped_cos(params: SchwarzschildParams, T: ArrayLike, X: ArrayLike) -> np.ndarray:
    """截断后的 cosθ ∈ [0, 1]"""
    return np.clip(_raw_cos(params, T, X), 0.0, 1.0)


def coin_angle_bh(params: SchwarzschildParams, T: ArrayLike, X: ArrayLike) -> ArrayLike:
    """
    黑洞角度场 θ(T, X)

    𝒟 内 θ = arccos(λ√(r/r_g))；𝒟 外 θ = 0；X < λT 时 θ = π/2。
    """
    raw = _raw_cos(params, T, X)
    theta = np.where(raw < 0.0, 0.5 * math.pi, np.arccos(np.clip(raw, 0.0, 1.0)))
    if np.ndim(theta) == 0:
        return float(theta)
    return theta


def in_domain_D(params: SchwarzschildParams, T: ArrayLike, X: ArrayLike) -> ArrayLike:
    """λT ≤ X ≤ λT + 2r_g/(3λ²)"""
    T = np.asarray(T, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    inside = (X >= params.lam * T) & (X <= domain_boundary_position(params, T))
    if np.ndim(inside) == 0:
        return bool(inside)
    return inside


def singularity_position(params: SchwarzschildParams, T: ArrayLike) -> ArrayLike:
    return params.lam * np.asarray(T, dtype=np.float64)


def horizon_position(params: SchwarzschildParams, T: ArrayLike) -> ArrayLike:
    """r = r_g 处：X = λ(T + 2r_g/3)"""
    return params.lam * (np.asarray(T, dtype=np.float64) + 2.0 * params.r_g / 3.0)


def domain_boundary_position(params: SchwarzschildParams, T: ArrayLike) -> ArrayLike:
    return params.lam * np.asarray(T, dtype=np.float64) + 2.0 * params.r_g / (3.0 * params.lam ** 2)


def domain_location(params: SchwarzschildParams) -> DomainLocation:
    if math.isclose(params.lam, 1.0, rel_tol=1e-12, abs_tol=0.0):
        return DomainLocation.HORIZON
    if params.lam > 1.0:
        return DomainLocation.INSIDE_HORIZON
    return DomainLocation.EXTENDS_OUTSIDE


def lemaitre_metric(params: SchwarzschildParams, T: ArrayLike, X: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """
    (g_TT, g_XX) = (1, −r_g/(λ² r))

    Raises:
        DomainError: r = 0 或 X < λT
    """
    r = np.asarray(radius(params, T, X))
    if np.any(r <= 0):
        raise DomainError("Lemaitre metric is singular at r = 0")
    g_xx = -params.r_g / (params.lam ** 2 * r)
    if np.ndim(g_xx) == 0:
        return 1.0, float(g_xx)
    return np.ones_like(g_xx), g_xx


def metric_identification_residual(params: SchwarzschildParams, T: ArrayLike, X: ArrayLike) -> ArrayLike:
    """
    𝒟 内 |−g_XX − 1/cos²θ|

    Raises:
        DomainError: 点不在 𝒟 内部
    """
    if not np.all(in_domain_D(params, T, X)):
        raise DomainError("Metric identification only holds inside the domain D")
    _, g_xx = lemaitre_metric(params, T, X)
    cos_theta = _raw_cos(params, T, X)
    residual = np.abs(-np.asarray(g_xx) - 1.0 / cos_theta ** 2)
    if np.ndim(residual) == 0:
        return float(residual)
    return residual


@dataclass(frozen=True)
class SchwarzschildField(CoinAngleField):
    """
    黑洞角度场

    θ 在 𝒟 边界与奇点线上只有 C⁰ 连续，因此 is_smooth 为 False。
    导数在截断区与接缝上取 0。
    """
    params: SchwarzschildParams
    kind: FieldKind = field(default=FieldKind.SCHWARZSCHILD, init=False)

    def angle(self, T, X):
        return np.asarray(coin_angle_bh(self.params, T, X))

    def _interior_derivative_factor(self, T, X):
        s = _proper_coordinate(self.params, T, X)
        raw = _raw_cos(self.params, T, X)
        interior = (s > 0) & (raw < 1.0)
        safe_s = np.where(interior, s, 1.0)
        safe_raw = np.where(interior, raw, 0.5)
        u = 1.5 * safe_s / self.params.r_g
        sin_theta = np.sqrt(1.0 - safe_raw ** 2)
        # d(cosθ)/dX · (−1/sinθ)
        factor = -(1.0 / (2.0 * self.params.r_g)) * np.cbrt(u) ** -2 / sin_theta
        return interior, factor

    def angle_x(self, T, X):
        interior, factor = self._interior_derivative_factor(T, X)
        return np.where(interior, factor, 0.0)

    def angle_t(self, T, X):
        # d(cosθ)/dT = −λ·d(cosθ)/dX
        interior, factor = self._interior_derivative_factor(T, X)
        return np.where(interior, -self.params.lam * factor, 0.0)

    @property
    def is_smooth(self) -> bool:
        return False

    def describe(self) -> Dict[str, Any]:
        return {"field_kind": self.kind.value, "r_g": self.params.r_g, "lam": self.params.lam}


def make_bh_field(params: SchwarzschildParams) -> SchwarzschildField:
    return SchwarzschildField(params)


@dataclass(frozen=True, eq=False)
class GeodesicTrack:
    """零测地线采样 (T_k, X_k)"""
    sign: int
    T: np.ndarray
    X: np.ndarray
    termination: TerminationReason

    def __post_init__(self):
        for name in ("T", "X"):
            arr = np.array(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return len(self.T)

    def position_at(self, T: ArrayLike) -> ArrayLike:
        """线性插值 X(T)"""
        return np.interp(T, self.T, self.X)


def integrate_null_geodesic(
    params: SchwarzschildParams,
    start: Tuple[float, float],
    sign: int,
    dT: float,
    T_max: float,
    x_window: Optional[Tuple[float, float]] = None
) -> GeodesicTrack:
    """
    RK4 积分 dX/dT = s·cosθ(T, X)（截断后的 cosθ）

    Args:
        params: 黑洞参数
        start: 起点 (T0, X0)
        sign: +1 向外，−1 向内
        dT: 步长
        T_max: 终止时间
        x_window: 可选的 X 窗口，离开时终止

    Returns:
        GeodesicTrack

    Raises:
        InvalidInputError: dT <= 0、sign 非 ±1 或 T_max < T0
        DomainError: 起点位于 X < λT
    """
    if not (dT > 0):
        raise InvalidInputError(f"Geodesic step dT must be positive, got {dT}")
    if sign not in (-1, 1):
        raise InvalidInputError(f"Geodesic sign must be +1 or -1, got {sign}")
    T0, X0 = float(start[0]), float(start[1])
    if T_max < T0:
        raise InvalidInputError(f"T_max={T_max} precedes the start time T0={T0}")
    slack = SINGULARITY_SLACK * max(1.0, abs(T0))
    if X0 / params.lam - T0 < -slack:
        raise DomainError(
            f"Geodesic start (T0={T0}, X0={X0}) violates X0 >= lambda*T0 = {params.lam * T0}"
        )

    def velocity(T: float, X: float) -> float:
        return sign * float(clamped_cos(params, T, X))

    def left_window(X: float) -> bool:
        return x_window is not None and not (x_window[0] <= X <= x_window[1])

    def near_singularity(T: float, X: float) -> bool:
        return X - params.lam * T < dT * params.lam

    times = [T0]
    positions = [X0]
    termination = TerminationReason.MAX_TIME
    T, X = T0, X0
    if near_singularity(T, X) and T_max > T0:
        termination = TerminationReason.REACHED_SINGULARITY
    else:
        while T_max - T > 1e-12 * max(1.0, abs(T_max)):
            h = min(dT, T_max - T)
            k1 = velocity(T, X)
            k2 = velocity(T + 0.5 * h, X + 0.5 * h * k1)
            k3 = velocity(T + 0.5 * h, X + 0.5 * h * k2)
            k4 = velocity(T + h, X + h * k3)
            X = X + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
            T = T0 + (len(times) * dT if h == dT else T_max - T0)
            times.append(T)
            positions.append(X)
            if near_singularity(T, X):
                termination = TerminationReason.REACHED_SINGULARITY
                break
            if left_window(X):
                termination = TerminationReason.LEFT_GRID
                break

    logger.debug(f"Geodesic s={sign:+d} from ({T0}, {X0}): {len(times)} samples, {termination.value}")
    return GeodesicTrack(sign=sign, T=np.array(times), X=np.array(positions), termination=termination)
