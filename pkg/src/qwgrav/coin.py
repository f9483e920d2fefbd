# -*- coding: utf-8 -*-
"""
量子硬币 B(θ) 与硬币角度场

角度场是定义一个行走的唯一输入：给定无量纲时空点 (T, X) 返回角度 θ（弧度）。
所有场对象构造后不可变，可在并行 worker 间直接共享。
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np
import pandas as pd
from scipy.interpolate import RegularGridInterpolator

from .errors import DomainError, InvalidInputError

ArrayLike = Union[float, np.ndarray]

MACHINE_EPS = np.finfo(np.float64).eps


class FieldKind(Enum):
    """硬币角度场类型"""
    CONSTANT = "constant"
    SMOOTH_TEST = "smooth-test"
    SCHWARZSCHILD = "schwarzschild"
    USER_TABULATED = "user-tabulated"


@dataclass(frozen=True)
class CoinMatrix:
    """自旋基 (b_L, b_R) 上的 2x2 复矩阵，按行存储"""
    a: complex
    b: complex
    c: complex
    d: complex

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=np.complex128)

    def adjoint(self) -> 'CoinMatrix':
        return CoinMatrix(
            self.a.conjugate(), self.c.conjugate(),
            self.b.conjugate(), self.d.conjugate()
        )

    def determinant(self) -> complex:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: 'CoinMatrix') -> 'CoinMatrix':
        return CoinMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def max_deviation_from_identity(self) -> float:
        return float(np.max(np.abs(self.as_array() - np.eye(2))))

    def is_unitary(self, tol: float = 4 * MACHINE_EPS) -> bool:
        return (self.adjoint() @ self).max_deviation_from_identity() <= tol


def build_coin(theta: float) -> CoinMatrix:
    """
    构造硬币矩阵 B(θ) = [[-cosθ, i sinθ], [-i sinθ, cosθ]]

    Args:
        theta: 角度（弧度）

    Returns:
        CoinMatrix

    Raises:
        InvalidInputError: theta 非有限
    """
    theta = float(theta)
    if not math.isfinite(theta):
        raise InvalidInputError(f"Coin angle must be finite, got {theta}")
    c = math.cos(theta)
    s = math.sin(theta)
    return CoinMatrix(complex(-c, 0.0), complex(0.0, s), complex(0.0, -s), complex(c, 0.0))


def coin_identity_defect(theta: float) -> float:
    """‖B(θ) − I‖_max：单步行走 S¹ 不存在连续极限的见证量（对任何 θ 都不为零）"""
    return build_coin(theta).max_deviation_from_identity()


class CoinAngleField(ABC):
    """硬币角度场基类"""

    kind: FieldKind

    @abstractmethod
    def angle(self, T: ArrayLike, X: ArrayLike) -> np.ndarray:
        """θ(T, X)，支持 numpy 广播"""
        pass

    @abstractmethod
    def angle_x(self, T: ArrayLike, X: ArrayLike) -> np.ndarray:
        """∂θ/∂X"""
        pass

    @abstractmethod
    def angle_t(self, T: ArrayLike, X: ArrayLike) -> np.ndarray:
        """∂θ/∂T"""
        pass

    def contains(self, T: ArrayLike, X: ArrayLike) -> np.ndarray:
        """(T, X) 是否在声明的定义域内"""
        return np.ones(np.broadcast(np.asarray(T), np.asarray(X)).shape, dtype=bool)

    @property
    def is_smooth(self) -> bool:
        """在整个定义域上是否二阶可微（决定能否用于连续极限比较）"""
        return True

    @property
    def is_static(self) -> bool:
        """θ 是否与 T 无关"""
        return False

    def describe(self) -> Dict[str, Any]:
        """输出文件头使用的参数字典"""
        return {"field_kind": self.kind.value}

    def __call__(self, T: ArrayLike, X: ArrayLike) -> ArrayLike:
        return eval_angle(self, T, X)


@dataclass(frozen=True)
class ConstantField(CoinAngleField):
    """常数角度 θ ≡ θ₀"""
    theta0: float
    kind: FieldKind = field(default=FieldKind.CONSTANT, init=False)

    def __post_init__(self):
        if not math.isfinite(self.theta0):
            raise InvalidInputError(f"theta0 must be finite, got {self.theta0}")

    def angle(self, T, X):
        shape = np.broadcast(np.asarray(T), np.asarray(X)).shape
        return np.full(shape, float(self.theta0))

    def angle_x(self, T, X):
        return np.zeros(np.broadcast(np.asarray(T), np.asarray(X)).shape)

    def angle_t(self, T, X):
        return np.zeros(np.broadcast(np.asarray(T), np.asarray(X)).shape)

    @property
    def is_static(self) -> bool:
        return True

    def describe(self) -> Dict[str, Any]:
        return {"field_kind": self.kind.value, "theta0": self.theta0}


@dataclass(frozen=True)
class SmoothTestField(CoinAngleField):
    """光滑测试场 θ(T, X) = θ₀ + a·sin(kX)·cos(ωT)"""
    theta0: float
    amplitude: float
    wavenumber: float
    omega: float
    kind: FieldKind = field(default=FieldKind.SMOOTH_TEST, init=False)

    def __post_init__(self):
        for name in ("theta0", "amplitude", "wavenumber", "omega"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidInputError(f"{name} must be finite, got {getattr(self, name)}")

    def angle(self, T, X):
        T = np.asarray(T, dtype=np.float64)
        X = np.asarray(X, dtype=np.float64)
        return self.theta0 + self.amplitude * np.sin(self.wavenumber * X) * np.cos(self.omega * T)

    def angle_x(self, T, X):
        T = np.asarray(T, dtype=np.float64)
        X = np.asarray(X, dtype=np.float64)
        return self.amplitude * self.wavenumber * np.cos(self.wavenumber * X) * np.cos(self.omega * T)

    def angle_t(self, T, X):
        T = np.asarray(T, dtype=np.float64)
        X = np.asarray(X, dtype=np.float64)
        return -self.amplitude * self.omega * np.sin(self.wavenumber * X) * np.sin(self.omega * T)

    @property
    def is_static(self) -> bool:
        return self.omega == 0.0 or self.amplitude == 0.0

    def describe(self) -> Dict[str, Any]:
        return {
            "field_kind": self.kind.value,
            "theta0": self.theta0,
            "amplitude": self.amplitude,
            "wavenumber": self.wavenumber,
            "omega": self.omega,
        }


@dataclass(frozen=True, eq=False)
class TabulatedField(CoinAngleField):
    """
    用户表格角度场，在规则 (T, X) 网格上双线性插值

    只有 C⁰ 连续，不适合收敛性研究。导数用步长 fd_step 的中心差分。
    """
    t_grid: np.ndarray
    x_grid: np.ndarray
    values: np.ndarray
    fd_step: float = 1e-3
    source: str = ""
    kind: FieldKind = field(default=FieldKind.USER_TABULATED, init=False)

    def __post_init__(self):
        t_grid = np.array(self.t_grid, dtype=np.float64)
        x_grid = np.array(self.x_grid, dtype=np.float64)
        values = np.array(self.values, dtype=np.float64)
        if t_grid.ndim != 1 or x_grid.ndim != 1 or len(t_grid) < 2 or len(x_grid) < 2:
            raise InvalidInputError("Tabulated field needs at least 2 samples along T and along X")
        if values.shape != (len(t_grid), len(x_grid)):
            raise InvalidInputError(
                f"Tabulated values have shape {values.shape}, expected {(len(t_grid), len(x_grid))}"
            )
        if np.any(np.diff(t_grid) <= 0) or np.any(np.diff(x_grid) <= 0):
            raise InvalidInputError("Tabulated grid axes must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise InvalidInputError("Tabulated angles must be finite")
        if not (self.fd_step > 0):
            raise InvalidInputError(f"fd_step must be positive, got {self.fd_step}")
        for arr in (t_grid, x_grid, values):
            arr.setflags(write=False)
        object.__setattr__(self, "t_grid", t_grid)
        object.__setattr__(self, "x_grid", x_grid)
        object.__setattr__(self, "values", values)
        object.__setattr__(
            self,
            "_interpolator",
            RegularGridInterpolator((t_grid, x_grid), values, method="linear", bounds_error=False, fill_value=None),
        )

    @classmethod
    def from_tsv(cls, path: Union[str, Path], fd_step: float = 1e-3) -> 'TabulatedField':
        """
        从 TSV 文件加载（列 T, X, theta；# 开头为注释）

        Args:
            path: 文件路径
            fd_step: 中心差分步长

        Returns:
            TabulatedField
        """
        frame = pd.read_csv(path, sep="\t", comment="#")
        missing = {"T", "X", "theta"} - set(frame.columns)
        if missing:
            raise InvalidInputError(f"{path}: missing columns {sorted(missing)}")
        table = frame.pivot_table(index="T", columns="X", values="theta", aggfunc="first")
        if table.isnull().values.any():
            raise InvalidInputError(f"{path}: samples do not form a complete regular (T, X) grid")
        return cls(
            t_grid=table.index.to_numpy(dtype=np.float64),
            x_grid=table.columns.to_numpy(dtype=np.float64),
            values=table.to_numpy(dtype=np.float64),
            fd_step=fd_step,
            source=str(path),
        )

    def _lookup(self, T, X) -> np.ndarray:
        T, X = np.broadcast_arrays(np.asarray(T, dtype=np.float64), np.asarray(X, dtype=np.float64))
        points = np.stack([T.ravel(), X.ravel()], axis=-1)
        return self._interpolator(points).reshape(T.shape)

    def contains(self, T, X):
        T = np.asarray(T, dtype=np.float64)
        X = np.asarray(X, dtype=np.float64)
        return (
            (T >= self.t_grid[0]) & (T <= self.t_grid[-1])
            & (X >= self.x_grid[0]) & (X <= self.x_grid[-1])
        )

    def angle(self, T, X):
        return self._lookup(T, X)

    def angle_x(self, T, X):
        T = np.asarray(T, dtype=np.float64)
        X = np.asarray(X, dtype=np.float64)
        x_hi = np.minimum(X + self.fd_step, self.x_grid[-1])
        x_lo = np.maximum(X - self.fd_step, self.x_grid[0])
        return (self._lookup(T, x_hi) - self._lookup(T, x_lo)) / (x_hi - x_lo)

    def angle_t(self, T, X):
        T = np.asarray(T, dtype=np.float64)
        X = np.asarray(X, dtype=np.float64)
        t_hi = np.minimum(T + self.fd_step, self.t_grid[-1])
        t_lo = np.maximum(T - self.fd_step, self.t_grid[0])
        return (self._lookup(t_hi, X) - self._lookup(t_lo, X)) / (t_hi - t_lo)

    @property
    def is_smooth(self) -> bool:
        return False

    def describe(self) -> Dict[str, Any]:
        return {"field_kind": self.kind.value, "table_path": self.source, "fd_step": self.fd_step}


def eval_angle(field: CoinAngleField, T: ArrayLike, X: ArrayLike) -> ArrayLike:
    """
    在 (T, X) 处求角度 θ

    Args:
        field: 角度场
        T: 无量纲时间（标量或数组）
        X: 无量纲位置（标量或数组）

    Returns:
        θ，标量输入返回 float

    Raises:
        DomainError: 有点落在场的定义域之外
    """
    inside = field.contains(T, X)
    if not np.all(inside):
        outside = int(np.size(inside) - np.count_nonzero(inside))
        raise DomainError(
            f"{outside} point(s) outside the domain of the {field.kind.value} field"
        )
    theta = field.angle(T, X)
    if np.ndim(theta) == 0:
        return float(theta)
    return theta
