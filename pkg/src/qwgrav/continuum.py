# -*- coding: utf-8 -*-
"""
连续极限参照：本征基变换、解耦输运方程、度规与二维标架

在本征基 (b₋, b₊) 中，两步行走的连续极限为

    ψ⁻_T − cosθ ψ⁻_X + (θ_X/2) sinθ ψ⁻ = 0
    ψ⁺_T + cosθ ψ⁺_X − (θ_X/2) sinθ ψ⁺ = 0

本模块全程假设 cosθ > 0（黑洞场在定义域外做了截断）。
"""

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Tuple

import numpy as np
from scipy.integrate import quad, trapezoid
from tqdm import tqdm

from .coin import MACHINE_EPS, ArrayLike, CoinAngleField, eval_angle
from .errors import CFLViolationError, DomainError, InvalidInputError
from .utils import logger

GAMMA0 = np.array([[0, 1], [1, 0]], dtype=np.complex128)
GAMMA1 = np.array([[0, 1], [-1, 0]], dtype=np.complex128)
MINKOWSKI = np.diag([1.0, -1.0])

SpinorFunction = Callable[[float, float], np.ndarray]


@dataclass(frozen=True)
class SpinBasisRotation:
    """列向量为 b₋, b₊ 在 (b_L, b_R) 上的分量"""
    theta: float

    def matrix(self) -> np.ndarray:
        half = 0.5 * self.theta
        c, s = math.cos(half), math.sin(half)
        return np.array([[1j * c, 1j * s], [-s, c]], dtype=np.complex128)

    @property
    def b_minus(self) -> np.ndarray:
        return self.matrix()[:, 0]

    @property
    def b_plus(self) -> np.ndarray:
        return self.matrix()[:, 1]

    def is_unitary(self, tol: float = 4 * MACHINE_EPS) -> bool:
        u = self.matrix()
        return float(np.max(np.abs(u.conj().T @ u - np.eye(2)))) <= tol


def _rotation_entries(theta: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    half = 0.5 * np.asarray(theta, dtype=np.float64)
    return np.cos(half), np.sin(half)


def to_eigenbasis(psi: np.ndarray, theta: ArrayLike) -> np.ndarray:
    """
    (ψ^L, ψ^R) -> (ψ⁻, ψ⁺)，即作用 U†

    Args:
        psi: 形状 (..., 2) 的复数组
        theta: 角度，可与 psi[..., 0] 广播

    Returns:
        形状 (..., 2) 的复数组
    """
    psi = np.asarray(psi, dtype=np.complex128)
    c, s = _rotation_entries(theta)
    L, R = psi[..., 0], psi[..., 1]
    out = np.empty(np.broadcast(L, c).shape + (2,), dtype=np.complex128)
    out[..., 0] = -1j * c * L - s * R
    out[..., 1] = -1j * s * L + c * R
    return out


def from_eigenbasis(phi: np.ndarray, theta: ArrayLike) -> np.ndarray:
    """(ψ⁻, ψ⁺) -> (ψ^L, ψ^R)，即作用 U"""
    phi = np.asarray(phi, dtype=np.complex128)
    c, s = _rotation_entries(theta)
    minus, plus = phi[..., 0], phi[..., 1]
    out = np.empty(np.broadcast(minus, c).shape + (2,), dtype=np.complex128)
    out[..., 0] = 1j * c * minus + 1j * s * plus
    out[..., 1] = -s * minus + c * plus
    return out


def p_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[-c, 1j * s], [-1j * s, c]], dtype=np.complex128)


def q_matrix(theta: float, theta_T: float, theta_X: float) -> np.ndarray:
    s2, c2 = math.sin(2 * theta), math.cos(2 * theta)
    return np.array([
        [-0.5 * theta_X * s2, 0.5j * (theta_T - theta_X * c2)],
        [0.5j * (theta_T + theta_X * c2), 0.5 * theta_X * s2],
    ], dtype=np.complex128)


def _central_difference(f: SpinorFunction, T: float, X: float, h: float) -> Tuple[np.ndarray, np.ndarray]:
    d_T = (np.asarray(f(T + h, X)) - np.asarray(f(T - h, X))) / (2 * h)
    d_X = (np.asarray(f(T, X + h)) - np.asarray(f(T, X - h))) / (2 * h)
    return d_T, d_X


def pde_residual_LR(
    psi: SpinorFunction,
    field: CoinAngleField,
    point: Tuple[float, float],
    h: float
) -> np.ndarray:
    """
    Ψ_T + cosθ·P·Ψ_X − Q·Ψ，导数用步长 h 的中心差分

    Args:
        psi: (T, X) -> (ψ^L, ψ^R)
        field: 角度场
        point: (T, X)
        h: 差分步长

    Returns:
        两分量复残差
    """
    if not (h > 0):
        raise InvalidInputError(f"Finite-difference step must be positive, got {h}")
    T, X = point
    theta = eval_angle(field, T, X)
    theta_T = float(field.angle_t(T, X))
    theta_X = float(field.angle_x(T, X))
    d_T, d_X = _central_difference(psi, T, X, h)
    value = np.asarray(psi(T, X), dtype=np.complex128)
    return d_T + math.cos(theta) * (p_matrix(theta) @ d_X) - q_matrix(theta, theta_T, theta_X) @ value


@dataclass(frozen=True)
class Metric2D:
    """G = diag(1, −1/cos²θ)"""
    field: CoinAngleField

    def _cos(self, T, X) -> np.ndarray:
        c = np.cos(np.asarray(eval_angle(self.field, T, X)))
        if np.any(c <= 0):
            raise DomainError("Metric requires cos(theta) > 0")
        return c

    def components(self, T: ArrayLike, X: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
        c = self._cos(T, X)
        return np.ones_like(c), -1.0 / c ** 2

    def determinant(self, T: ArrayLike, X: ArrayLike) -> np.ndarray:
        g_tt, g_xx = self.components(T, X)
        return g_tt * g_xx

    def volume_weight(self, T: ArrayLike, X: ArrayLike) -> np.ndarray:
        """√(−G) = 1/cosθ"""
        return 1.0 / self._cos(T, X)

    def is_lorentzian(self, T: ArrayLike, X: ArrayLike) -> bool:
        g_tt, g_xx = self.components(T, X)
        return bool(np.all(g_tt * g_xx < 0))


@dataclass(frozen=True)
class Diad:
    """标架 e₀ = e_T, e₁ = cosθ·e_X"""
    field: CoinAngleField

    def components(self, T: float, X: float) -> np.ndarray:
        """e[a, μ]，μ 依次为 T, X"""
        c = math.cos(eval_angle(self.field, T, X))
        return np.array([[1.0, 0.0], [0.0, c]])


def diad_orthonormality_check(field: CoinAngleField, points: Iterable[Tuple[float, float]]) -> float:
    """
    max |G(e_a, e_b) − η_ab|

    Raises:
        DomainError: 某采样点 cosθ <= 0
    """
    metric = Metric2D(field)
    diad = Diad(field)
    worst = 0.0
    for T, X in points:
        g_tt, g_xx = metric.components(T, X)
        G = np.diag([float(g_tt), float(g_xx)])
        e = diad.components(T, X)
        worst = max(worst, float(np.max(np.abs(e @ G @ e.T - MINKOWSKI))))
    return worst


def dirac_residual(
    phi: SpinorFunction,
    field: CoinAngleField,
    point: Tuple[float, float],
    h: float
) -> np.ndarray:
    """
    弯曲时空无质量 Dirac 方程（标架形式）的残差

    γ^a [ e_a^μ ∂_μ Φ + ½ (1/√−G) ∂_μ(√−G e_a^μ) Φ ]，Φ 在 (b₋, b₊) 基中。
    """
    if not (h > 0):
        raise InvalidInputError(f"Finite-difference step must be positive, got {h}")
    T, X = point
    metric = Metric2D(field)
    c = math.cos(eval_angle(field, T, X))
    if c <= 0:
        raise DomainError(f"cos(theta) must be positive at {point}")
    d_T, d_X = _central_difference(phi, T, X, h)
    value = np.asarray(phi(T, X), dtype=np.complex128)

    # √−G e₀^T = 1/cosθ；√−G e₁^X = 1 为常数
    weight_T = (float(metric.volume_weight(T + h, X)) - float(metric.volume_weight(T - h, X))) / (2 * h)
    spin_connection = 0.5 * c * weight_T
    return GAMMA0 @ (d_T + spin_connection * value) + GAMMA1 @ (c * d_X)


def characteristic_solution(
    field: CoinAngleField,
    profile_minus: Callable[[np.ndarray], np.ndarray],
    profile_plus: Callable[[np.ndarray], np.ndarray],
    x_ref: float = 0.0,
    basis: str = "lr"
) -> SpinorFunction:
    """
    静态场下解耦方程的精确解

    ψ⁺ = F₊(τ(X) − T)/√cosθ，ψ⁻ = F₋(τ(X) + T)/√cosθ，τ(X) = ∫_{x_ref}^X dX'/cosθ

    Args:
        field: 与 T 无关的角度场
        profile_minus: F₋
        profile_plus: F₊
        x_ref: τ 的零点
        basis: "lr" 返回 (ψ^L, ψ^R)，"eigen" 返回 (ψ⁻, ψ⁺)，"phi" 返回 Φ = Ψ√cosθ

    Returns:
        (T, X) -> 两分量复数组
    """
    if not field.is_static:
        raise InvalidInputError("characteristic_solution requires a time-independent field")
    if basis not in ("lr", "eigen", "phi"):
        raise InvalidInputError(f"Unknown basis {basis!r}")

    def cos_at(x: float) -> float:
        c = math.cos(eval_angle(field, 0.0, x))
        if c <= 0:
            raise DomainError(f"cos(theta) must be positive, got {c} at X={x}")
        return c

    def tau(x: float) -> float:
        value, _ = quad(lambda y: 1.0 / cos_at(y), x_ref, x, epsabs=1e-14, epsrel=1e-13, limit=200)
        return value

    def solution(T: float, X: float) -> np.ndarray:
        c = cos_at(X)
        t = tau(X)
        eigen = np.array([profile_minus(t + T), profile_plus(t - T)], dtype=np.complex128) / math.sqrt(c)
        if basis == "eigen":
            return eigen
        if basis == "phi":
            return eigen * math.sqrt(c)
        return from_eigenbasis(eigen, eval_angle(field, T, X))

    return solution


@dataclass(frozen=True, eq=False)
class ContinuumState:
    """均匀网格上 (b₋, b₊) 基中的连续波函数"""
    x: np.ndarray
    T: float
    psi_minus: np.ndarray
    psi_plus: np.ndarray

    def __post_init__(self):
        x = np.array(self.x, dtype=np.float64)
        if x.ndim != 1 or len(x) < 2:
            raise InvalidInputError("Continuum grid needs at least two points")
        spacing = np.diff(x)
        if np.any(spacing <= 0) or np.max(np.abs(spacing - spacing[0])) > 1e-9 * abs(spacing[0]):
            raise InvalidInputError("Continuum grid must be uniform and increasing")
        arrays = []
        for name in ("psi_minus", "psi_plus"):
            arr = np.array(getattr(self, name), dtype=np.complex128)
            if arr.shape != x.shape:
                raise InvalidInputError(f"{name} has shape {arr.shape}, expected {x.shape}")
            arr.setflags(write=False)
            arrays.append(arr)
        x.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "psi_minus", arrays[0])
        object.__setattr__(self, "psi_plus", arrays[1])

    @property
    def h(self) -> float:
        return float(self.x[1] - self.x[0])

    @classmethod
    def gaussian(
        cls,
        x: np.ndarray,
        T: float,
        X0: float,
        dX0: float,
        spin_mix: Sequence[complex],
        field: CoinAngleField
    ) -> 'ContinuumState':
        """归一化高斯初态，自旋方向在 (b_L, b_R) 中给出"""
        if not (dX0 > 0):
            raise InvalidInputError(f"dX0 must be positive, got {dX0}")
        x = np.asarray(x, dtype=np.float64)
        spin = np.asarray(spin_mix, dtype=np.complex128)
        spin = spin / np.linalg.norm(spin)
        n0 = np.exp(-0.5 * ((x - X0) / dX0) ** 2) / (dX0 * math.sqrt(2 * math.pi))
        lr = np.sqrt(n0)[:, None] * spin[None, :]
        eigen = to_eigenbasis(lr, eval_angle(field, T, x))
        return cls(x=x, T=T, psi_minus=eigen[:, 0], psi_plus=eigen[:, 1])

    def density(self) -> np.ndarray:
        return np.abs(self.psi_minus) ** 2 + np.abs(self.psi_plus) ** 2

    def probability(self) -> float:
        """π(T) = ∫dX (|ψ⁻|² + |ψ⁺|²)，梯形公式"""
        return float(trapezoid(self.density(), self.x))

    def to_lr(self, field: CoinAngleField) -> np.ndarray:
        eigen = np.stack([self.psi_minus, self.psi_plus], axis=-1)
        return from_eigenbasis(eigen, eval_angle(field, self.T, self.x))

    def phi(self, field: CoinAngleField) -> np.ndarray:
        """Φ = Ψ √cosθ（本征基）"""
        c = np.cos(np.asarray(eval_angle(field, self.T, self.x)))
        if np.any(c <= 0):
            raise DomainError("Phi requires cos(theta) > 0 on the grid")
        root = np.sqrt(c)
        return np.stack([self.psi_minus * root, self.psi_plus * root], axis=-1)


def dirac_norm(state: ContinuumState, field: CoinAngleField) -> float:
    """
    ∫ 𝒟_G X |Φ|²，其中 𝒟_G X = dX/cosθ

    Raises:
        DomainError: 网格上有 cosθ <= 0
    """
    c = np.cos(np.asarray(eval_angle(field, state.T, state.x)))
    if np.any(c <= 0):
        raise DomainError("dirac_norm requires cos(theta) > 0 on the grid")
    phi = state.phi(field)
    integrand = (np.abs(phi[:, 0]) ** 2 + np.abs(phi[:, 1]) ** 2) / c
    return float(trapezoid(integrand, state.x))


def evolve_pde(
    state: ContinuumState,
    field: CoinAngleField,
    dT: float,
    steps: int,
    show_progress: bool = False
) -> ContinuumState:
    """
    一阶迎风格式推进解耦输运方程

    ψ⁺ 向右传播用后向差分，ψ⁻ 向左传播用前向差分；输运系数冻结在 T_n，
    源项取 T_n + dT/2 处系数，对输运预测值与旧值取平均。入流边界为零。

    Args:
        state: 初始状态
        field: 角度场
        dT: 时间步长
        steps: 步数

    Returns:
        T + steps·dT 时刻的状态

    Raises:
        InvalidInputError: dT <= 0 或 steps < 0
        CFLViolationError: dT·max(cosθ) > h
        DomainError: 网格上出现 cosθ < 0
    """
    if not (dT > 0):
        raise InvalidInputError(f"dT must be positive, got {dT}")
    if steps < 0:
        raise InvalidInputError(f"steps must be nonnegative, got {steps}")

    x = state.x
    h = state.h
    minus = np.array(state.psi_minus)
    plus = np.array(state.psi_plus)
    T = state.T

    for n in tqdm(range(steps), disable=not show_progress, desc="PDE", leave=False):
        c = np.cos(np.asarray(eval_angle(field, T, x)))
        if np.any(c < 0):
            raise DomainError(f"cos(theta) < 0 on the grid at T={T}")
        courant = dT * float(np.max(c)) / h
        if courant > 1.0 + 1e-12:
            raise CFLViolationError(
                f"CFL condition violated: dT*max(cos theta)/h = {courant:.6g} > 1 (dT={dT}, h={h})"
            )
        mu = dT * c / h

        upstream_plus = np.empty_like(plus)
        upstream_plus[0] = 0.0
        upstream_plus[1:] = plus[:-1]
        upstream_minus = np.empty_like(minus)
        upstream_minus[-1] = 0.0
        upstream_minus[:-1] = minus[1:]

        plus_star = plus - mu * (plus - upstream_plus)
        minus_star = minus - mu * (minus - upstream_minus)

        T_mid = T + 0.5 * dT
        theta_mid = np.asarray(eval_angle(field, T_mid, x))
        source = 0.5 * np.asarray(field.angle_x(T_mid, x)) * np.sin(theta_mid)
        plus = plus_star + dT * source * 0.5 * (plus + plus_star)
        minus = minus_star - dT * source * 0.5 * (minus + minus_star)
        T = state.T + (n + 1) * dT

    logger.debug(f"PDE evolved {steps} steps with dT={dT}, h={h}")
    return ContinuumState(x=x, T=T, psi_minus=minus, psi_plus=plus)
