# -*- coding: utf-8 -*-
"""
离散时间量子行走的精确演化

ψ^L_{j+1,m} = -c ψ^L_{j,m+1} + i s ψ^R_{j,m-1}
ψ^R_{j+1,m} = -i s ψ^L_{j,m+1} + c ψ^R_{j,m-1}

其中 c, s 为 cos θ_{j,m}, sin θ_{j,m}。格点两端为零流入边界，
网格尺寸保证速度为 1 的信号在运行期间到达不了边界缓冲区。
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from .coin import CoinAngleField, eval_angle
from .errors import BoundaryGuardError, ConfigurationError, InvalidInputError
from .utils import logger

# 每端的边界缓冲格点数
BOUNDARY_WIDTH = 2

DEFAULT_TAIL_TOLERANCE = 1e-12

DEFAULT_SPIN_MIX = (1.0 + 0.0j, 1.0j)

# 初始高斯支撑半宽（以标准差计）
SUPPORT_SIGMAS = 8.0


@dataclass(frozen=True)
class LatticeGrid:
    """
    有限格点网格

    数组下标 k 对应格点编号 m = k - origin_offset，位置 X_m = m·ε。
    时间尺度与长度尺度固定为 1，因此 Δt = Δx = ε，T 与 t、X 与 x 数值相同。
    """
    site_count: int
    epsilon: float
    origin_offset: int = 0
    time_scale: float = field(default=1.0, init=False)
    length_scale: float = field(default=1.0, init=False)

    def __post_init__(self):
        if int(self.site_count) != self.site_count or self.site_count <= 0:
            raise InvalidInputError(f"site_count must be a positive integer, got {self.site_count}")
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise InvalidInputError(f"epsilon must be positive and finite, got {self.epsilon}")

    @classmethod
    def covering(cls, x_min: float, x_max: float, epsilon: float) -> 'LatticeGrid':
        """覆盖 [x_min, x_max] 的最小网格"""
        if not (x_max > x_min):
            raise InvalidInputError(f"Grid window is empty: [{x_min}, {x_max}]")
        m_lo = math.floor(x_min / epsilon)
        m_hi = math.ceil(x_max / epsilon)
        return cls(site_count=m_hi - m_lo + 1, epsilon=epsilon, origin_offset=-m_lo)

    @property
    def dt(self) -> float:
        return self.epsilon * self.time_scale

    @property
    def dx(self) -> float:
        return self.epsilon * self.length_scale

    @property
    def lattice_indices(self) -> np.ndarray:
        return np.arange(self.site_count, dtype=np.int64) - self.origin_offset

    @property
    def positions(self) -> np.ndarray:
        return self.lattice_indices * self.dx

    def time(self, time_index: int) -> float:
        return time_index * self.dt

    def describe(self) -> dict:
        return {
            "site_count": self.site_count,
            "epsilon": self.epsilon,
            "origin_offset": self.origin_offset,
        }


def auto_extent(
    X0: float,
    dX0: float,
    steps: int,
    epsilon: float,
    margin_sites: int = 4
) -> Tuple[float, float]:
    """
    自动计算网格窗口，使初始 8σ 支撑的光锥在 steps 步内到达不了边界缓冲区

    Returns:
        (x_min, x_max)
    """
    reach = SUPPORT_SIGMAS * dX0 + steps * epsilon + (BOUNDARY_WIDTH + margin_sites) * epsilon
    return X0 - reach, X0 + reach


@dataclass(frozen=True, eq=False)
class WalkState:
    """某一时刻 j 的行走状态，amplitudes 形状 (M, 2)，按 (L, R) 交错存储"""
    grid: LatticeGrid
    time_index: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.time_index < 0:
            raise InvalidInputError(f"time_index must be nonnegative, got {self.time_index}")
        amplitudes = np.array(self.amplitudes, dtype=np.complex128, order="C")
        if amplitudes.shape != (self.grid.site_count, 2):
            raise InvalidInputError(
                f"amplitudes must have shape {(self.grid.site_count, 2)}, got {amplitudes.shape}"
            )
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def psi_L(self) -> np.ndarray:
        return self.amplitudes[:, 0]

    @property
    def psi_R(self) -> np.ndarray:
        return self.amplitudes[:, 1]

    @property
    def T(self) -> float:
        return self.grid.time(self.time_index)

    @property
    def positions(self) -> np.ndarray:
        return self.grid.positions

    def site_probabilities(self) -> np.ndarray:
        """每个格点上的 |ψ^L|² + |ψ^R|²"""
        a = self.amplitudes
        return (a.real ** 2 + a.imag ** 2).sum(axis=1)


@dataclass
class WalkRun:
    """一次演化的输出"""
    snapshots: List[WalkState]
    probabilities: np.ndarray
    boundary_high_water: float

    @property
    def final(self) -> WalkState:
        return self.snapshots[-1]


def init_gaussian(
    grid: LatticeGrid,
    X0: float,
    dX0: float,
    spin_mix: Sequence[complex] = DEFAULT_SPIN_MIX
) -> WalkState:
    """
    高斯初始态 Ψ(0, X) ∝ √n₀(X)·spin_mix，归一化到 π₀ = 1

    Args:
        grid: 网格
        X0: 高斯中心
        dX0: 高斯标准差
        spin_mix: 自旋方向 (L, R)，会先归一化

    Returns:
        j = 0 的 WalkState

    Raises:
        InvalidInputError: dX0 <= 0 或 spin_mix 为零
        ConfigurationError: 8σ 支撑超出网格（不含边界缓冲区）
    """
    if not (math.isfinite(dX0) and dX0 > 0):
        raise InvalidInputError(f"dX0 must be positive, got {dX0}")
    spin = np.asarray(spin_mix, dtype=np.complex128)
    if spin.shape != (2,):
        raise InvalidInputError(f"spin_mix must have two components, got shape {spin.shape}")
    spin_norm = math.sqrt(float(np.sum(spin.real ** 2 + spin.imag ** 2)))
    if spin_norm == 0.0:
        raise InvalidInputError("spin_mix must be nonzero")
    spin = spin / spin_norm

    X = grid.positions
    inner_lo = X[BOUNDARY_WIDTH] if grid.site_count > 2 * BOUNDARY_WIDTH else math.inf
    inner_hi = X[-1 - BOUNDARY_WIDTH] if grid.site_count > 2 * BOUNDARY_WIDTH else -math.inf
    lo = X0 - SUPPORT_SIGMAS * dX0
    hi = X0 + SUPPORT_SIGMAS * dX0
    if lo < inner_lo or hi > inner_hi:
        raise ConfigurationError(
            "Initial Gaussian does not fit inside the grid",
            [f"x0/dx0: support [{lo:.6g}, {hi:.6g}] exceeds usable window [{inner_lo:.6g}, {inner_hi:.6g}]"],
        )

    n0 = np.exp(-0.5 * ((X - X0) / dX0) ** 2)
    amplitudes = np.sqrt(n0)[:, None] * spin[None, :]
    norm = math.fsum((amplitudes.real ** 2 + amplitudes.imag ** 2).ravel())
    amplitudes = amplitudes / math.sqrt(norm)
    return WalkState(grid=grid, time_index=0, amplitudes=amplitudes)


def _coin_entries(state: WalkState, field: CoinAngleField, time_index: int) -> Tuple[np.ndarray, np.ndarray]:
    theta = np.asarray(eval_angle(field, state.grid.time(time_index), state.grid.positions))
    return np.cos(theta), np.sin(theta)


def step(state: WalkState, field: CoinAngleField) -> WalkState:
    """
    按定义方程推进一步 j -> j+1

    Args:
        state: 当前状态
        field: 角度场，在 (t_j, x_m) 处取样

    Returns:
        新状态（原状态不变）
    """
    c, s = _coin_entries(state, field, state.time_index)
    psi = state.amplitudes
    M = state.grid.site_count

    from_right = np.zeros(M, dtype=np.complex128)
    from_right[:-1] = psi[1:, 0]
    from_left = np.zeros(M, dtype=np.complex128)
    from_left[1:] = psi[:-1, 1]

    out = np.empty((M, 2), dtype=np.complex128)
    out[:, 0] = -c * from_right + 1j * s * from_left
    out[:, 1] = -1j * s * from_right + c * from_left
    return WalkState(grid=state.grid, time_index=state.time_index + 1, amplitudes=out)


def _shift_down(values: np.ndarray, k: int) -> np.ndarray:
    """out[m] = values[m + k]，越界补零"""
    out = np.zeros_like(values)
    out[:len(values) - k] = values[k:]
    return out


def _shift_up(values: np.ndarray, k: int) -> np.ndarray:
    """out[m] = values[m - k]，越界补零"""
    out = np.zeros_like(values)
    out[k:] = values[:len(values) - k]
    return out


def step_s2(state: WalkState, field: CoinAngleField) -> WalkState:
    """
    用两步复合方程直接推进 j -> j+2

    中间格点 m±1 不存在时对应项为零，与两次 step 的零流入边界一致。
    """
    c0, s0 = _coin_entries(state, field, state.time_index)
    c1, s1 = _coin_entries(state, field, state.time_index + 1)

    c0_next, s0_next = _shift_down(c0, 1), _shift_down(s0, 1)
    c0_prev, s0_prev = _shift_up(c0, 1), _shift_up(s0, 1)

    L = state.amplitudes[:, 0]
    R = state.amplitudes[:, 1]
    L_plus2 = _shift_down(L, 2)
    R_minus2 = _shift_up(R, 2)

    out = np.empty_like(state.amplitudes)
    out[:, 0] = (
        c1 * (c0_next * L_plus2 - 1j * s0_next * R)
        + s1 * (s0_prev * L + 1j * c0_prev * R_minus2)
    )
    out[:, 1] = (
        s1 * (1j * c0_next * L_plus2 + s0_next * R)
        - c1 * (1j * s0_prev * L - c0_prev * R_minus2)
    )
    return WalkState(grid=state.grid, time_index=state.time_index + 2, amplitudes=out)


def step_back(state: WalkState, field: CoinAngleField) -> WalkState:
    """
    显式逆更新 j -> j-1（B 是自身的逆）

    Raises:
        InvalidInputError: time_index 为 0
    """
    if state.time_index < 1:
        raise InvalidInputError("Cannot step back from time index 0")
    c, s = _coin_entries(state, field, state.time_index - 1)
    L = state.amplitudes[:, 0]
    R = state.amplitudes[:, 1]

    # B_m Ψ_{j,m} = (ψ^L_{j-1,m+1}, ψ^R_{j-1,m-1})
    left_rows = -c * L + 1j * s * R
    right_rows = -1j * s * L + c * R

    out = np.empty_like(state.amplitudes)
    out[:, 0] = _shift_up(left_rows, 1)
    out[:, 1] = _shift_down(right_rows, 1)
    return WalkState(grid=state.grid, time_index=state.time_index - 1, amplitudes=out)


def stroboscope(history: Sequence[WalkState], n: int) -> List[WalkState]:
    """
    周期为 n 的频闪观察：保留 time_index ≡ 0 (mod n) 的状态

    Raises:
        InvalidInputError: n 不是正整数，或历史不连续
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidInputError(f"Stroboscope period must be a positive integer, got {n}")
    n = int(n)
    for prev, cur in zip(history, history[1:]):
        if cur.time_index != prev.time_index + 1:
            raise InvalidInputError(
                f"History must have consecutive time indices ({prev.time_index} -> {cur.time_index})"
            )
    return [s for s in history if s.time_index % n == 0]


def total_probability(state: WalkState) -> float:
    """π_j = Σ_m (|ψ^L|² + |ψ^R|²)，补偿求和"""
    a = state.amplitudes
    return math.fsum((a.real ** 2 + a.imag ** 2).ravel())


def boundary_probability(state: WalkState, width: int = BOUNDARY_WIDTH) -> float:
    p = state.site_probabilities()
    return math.fsum(p[:width]) + math.fsum(p[-width:])


def check_boundary(
    state: WalkState,
    tolerance: float = DEFAULT_TAIL_TOLERANCE,
    width: int = BOUNDARY_WIDTH
) -> float:
    """
    边界保护

    Returns:
        边界缓冲区概率

    Raises:
        BoundaryGuardError: 超过容差
    """
    value = boundary_probability(state, width)
    if value > tolerance:
        raise BoundaryGuardError(
            f"Boundary-adjacent probability {value:.3e} exceeds {tolerance:.1e} "
            f"at time index {state.time_index}; enlarge the grid"
        )
    return value


def evolve(
    state: WalkState,
    field: CoinAngleField,
    steps: int,
    stride: int = 1,
    tolerance: Optional[float] = DEFAULT_TAIL_TOLERANCE,
    show_progress: bool = False
) -> WalkRun:
    """
    演化 steps 步，记录快照与 π_j 序列

    Args:
        state: 初始状态
        field: 角度场
        steps: 步数
        stride: 快照间隔（最后一步总会记录）
        tolerance: 边界保护容差，None 时不检查
        show_progress: 是否显示进度条

    Returns:
        WalkRun

    Raises:
        BoundaryGuardError: 边界概率超限
    """
    if steps < 0:
        raise InvalidInputError(f"steps must be nonnegative, got {steps}")
    if stride < 1:
        raise InvalidInputError(f"stride must be >= 1, got {stride}")

    snapshots = [state]
    probabilities = np.empty(steps + 1)
    probabilities[0] = total_probability(state)
    high_water = boundary_probability(state)
    warned = False

    current = state
    for k in tqdm(range(steps), disable=not show_progress, desc="Walk", leave=False):
        current = step(current, field)
        probabilities[k + 1] = total_probability(current)
        if tolerance is not None:
            edge = check_boundary(current, tolerance)
            high_water = max(high_water, edge)
            if not warned and edge > 1e-3 * tolerance:
                logger.warning(
                    f"Boundary probability {edge:.3e} at j={current.time_index} is approaching the guard"
                )
                warned = True
        if current.time_index % stride == 0 or k == steps - 1:
            snapshots.append(current)

    logger.debug(f"Walk evolved {steps} steps, {len(snapshots)} snapshots")
    return WalkRun(snapshots=snapshots, probabilities=probabilities, boundary_high_water=high_water)
