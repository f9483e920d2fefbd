# -*- coding: utf-8 -*-
"""
行走密度后处理、峰追踪、与测地线/连续方程的比较、ε 收敛研究与标量频闪演示
"""

import concurrent.futures as cf
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .coin import CoinAngleField, eval_angle
from .continuum import ContinuumState, evolve_pde
from .errors import ConfigurationError, InvalidInputError
from .schwarzschild import GeodesicTrack, SchwarzschildParams, domain_boundary_position
from .utils import logger, stage_timer
from .walk import (
    DEFAULT_SPIN_MIX,
    SUPPORT_SIGMAS,
    BOUNDARY_WIDTH,
    LatticeGrid,
    WalkState,
    evolve,
    init_gaussian,
)

# 分支质量低于总质量的该比例时不再定义峰
MASS_FLOOR = 1e-6
# 两峰之间的谷值不超过较低峰的该比例才视为两支已分开
SEPARATION_DIP = 0.25


class Branch(Enum):
    LEFT = "left"
    RIGHT = "right"


def smooth_pairs(n: np.ndarray) -> np.ndarray:
    """
    相邻格点对平均，消除棋盘振荡

    M 个格点 -> M+1 个半整数点，两端补零：n_s[k] = (n[k−1] + n[k]) / 2。
    总质量严格不变。
    """
    n = np.asarray(n, dtype=np.float64)
    pad = [(0, 0)] * (n.ndim - 1) + [(1, 1)]
    padded = np.pad(n, pad)
    return 0.5 * (padded[..., :-1] + padded[..., 1:])


@dataclass(frozen=True, eq=False)
class DensityField:
    """
    行走密度 n(T_j, X)

    raw 为每格点概率 (nt, M)，smoothed 为半整数点上的对平均 (nt, M+1)。
    """
    grid: LatticeGrid
    time_indices: np.ndarray
    raw: np.ndarray
    smoothed: np.ndarray
    totals: np.ndarray

    @property
    def times(self) -> np.ndarray:
        return self.time_indices * self.grid.dt

    @property
    def positions(self) -> np.ndarray:
        return self.grid.positions

    @property
    def midpoints(self) -> np.ndarray:
        return np.concatenate([self.grid.positions - 0.5 * self.grid.dx,
                               [self.grid.positions[-1] + 0.5 * self.grid.dx]])

    def density_per_length(self) -> np.ndarray:
        """平滑密度除以 Δx，可直接与连续密度比较"""
        return self.smoothed / self.grid.dx

    def __len__(self) -> int:
        return len(self.time_indices)


def density_field(history: Sequence[WalkState]) -> DensityField:
    """
    从行走快照构造密度场

    Raises:
        InvalidInputError: 历史为空或网格不一致
    """
    if len(history) == 0:
        raise InvalidInputError("density_field needs at least one snapshot")
    grid = history[0].grid
    if any(s.grid != grid for s in history):
        raise InvalidInputError("All snapshots must share one grid")
    raw = np.stack([s.site_probabilities() for s in history])
    totals = np.array([math.fsum(row) for row in raw])
    return DensityField(
        grid=grid,
        time_indices=np.array([s.time_index for s in history], dtype=np.int64),
        raw=raw,
        smoothed=smooth_pairs(raw),
        totals=totals,
    )


@dataclass(frozen=True, eq=False)
class PeakTrajectory:
    branch: Branch
    T: np.ndarray
    X: np.ndarray

    def __len__(self) -> int:
        return len(self.T)


def _refine_peak(values: np.ndarray, k: int) -> float:
    """三点二次插值的亚格点偏移，限制在 ±0.5"""
    if k <= 0 or k >= len(values) - 1:
        return 0.0
    left, centre, right = values[k - 1], values[k], values[k + 1]
    denom = left - 2.0 * centre + right
    if denom >= 0.0:
        return 0.0
    return float(np.clip(0.5 * (left - right) / denom, -0.5, 0.5))


def track_peaks(
    density: DensityField,
    split_point: float,
    mass_floor: float = MASS_FLOOR
) -> Tuple[PeakTrajectory, PeakTrajectory]:
    """
    追踪左右两支的密度峰

    两支分开（之间出现足够深的谷）之前的快照不产生样本：此时只有一个峰，
    无法归属到任一支。

    Args:
        density: 密度场
        split_point: 初始分界 X
        mass_floor: 分支质量下限（相对总质量）

    Returns:
        (left, right)
    """
    if len(density) == 0:
        raise InvalidInputError("Density field is empty")
    x = density.midpoints
    dx = density.grid.dx
    samples = {Branch.LEFT: ([], []), Branch.RIGHT: ([], []), }
    split = float(split_point)
    separated = False

    for T, n in zip(density.times, density.smoothed):
        total = float(n.sum())
        if total <= 0.0:
            continue
        split_index = int(np.searchsorted(x, split, side="left"))
        peaks = {}
        for branch, region in ((Branch.LEFT, slice(0, split_index)),
                               (Branch.RIGHT, slice(split_index, len(x)))):
            values = n[region]
            if values.size == 0 or values.sum() < mass_floor * total:
                continue
            peaks[branch] = int(np.argmax(values)) + region.start

        if Branch.LEFT in peaks and Branch.RIGHT in peaks:
            k_left, k_right = peaks[Branch.LEFT], peaks[Branch.RIGHT]
            if k_right - k_left >= 2:
                k_min = k_left + int(np.argmin(n[k_left:k_right + 1]))
                split = float(x[k_min])
                if n[k_min] <= SEPARATION_DIP * min(n[k_left], n[k_right]):
                    separated = True
        if not separated:
            continue

        for branch, k in peaks.items():
            samples[branch][0].append(float(T))
            samples[branch][1].append(float(x[k] + _refine_peak(n, k) * dx))

    left = PeakTrajectory(Branch.LEFT, np.array(samples[Branch.LEFT][0]), np.array(samples[Branch.LEFT][1]))
    right = PeakTrajectory(Branch.RIGHT, np.array(samples[Branch.RIGHT][0]), np.array(samples[Branch.RIGHT][1]))
    return left, right


@dataclass(frozen=True, eq=False)
class DeviationReport:
    T: np.ndarray
    X_peak: np.ndarray
    X_geo: np.ndarray
    deviation: np.ndarray

    @property
    def max(self) -> float:
        return float(np.max(self.deviation))

    @property
    def mean(self) -> float:
        return float(np.mean(self.deviation))


def geodesic_deviation(
    peaks: PeakTrajectory,
    track: GeodesicTrack,
    t_range: Optional[Tuple[float, float]] = None
) -> DeviationReport:
    """
    |X_peak(T) − X_geo(T)|，测地线线性插值

    Raises:
        InvalidInputError: 时间范围不重叠
    """
    mask = (peaks.T >= track.T[0]) & (peaks.T <= track.T[-1])
    if t_range is not None:
        mask &= (peaks.T >= t_range[0]) & (peaks.T <= t_range[1])
    if not np.any(mask):
        raise InvalidInputError(
            f"Peak times and geodesic times [{track.T[0]}, {track.T[-1]}] do not overlap"
        )
    T = peaks.T[mask]
    X_peak = peaks.X[mask]
    X_geo = np.asarray(track.position_at(T))
    return DeviationReport(T=T, X_peak=X_peak, X_geo=X_geo, deviation=np.abs(X_peak - X_geo))


def deviation_by_singularity_distance(
    report: DeviationReport,
    params: SchwarzschildParams,
    margin: float
) -> Tuple[Optional[float], Optional[float]]:
    """
    按峰到奇点线 X = λT 的距离拆分偏差

    Returns:
        (far_max, near_max)：距离大于 margin 与不大于 margin 的最大偏差，无样本时为 None
    """
    near = report.X_peak - params.lam * report.T <= margin
    far_max = float(report.deviation[~near].max()) if np.any(~near) else None
    near_max = float(report.deviation[near].max()) if np.any(near) else None
    return far_max, near_max


def exits_domain(peaks: PeakTrajectory, params: SchwarzschildParams) -> Optional[float]:
    """峰首次越过 𝒟 右边界的时间，未越过返回 None"""
    hits = np.nonzero(peaks.X > domain_boundary_position(params, peaks.T))[0]
    if hits.size == 0:
        return None
    return float(peaks.T[hits[0]])


def terminates_on_line(
    peaks: PeakTrajectory,
    params: SchwarzschildParams,
    tolerance: float
) -> Optional[float]:
    """分支首次到达 X ≤ λT + tolerance 的时间，未到达返回 None"""
    hits = np.nonzero(peaks.X <= params.lam * peaks.T + tolerance)[0]
    if hits.size == 0:
        return None
    return float(peaks.T[hits[0]])


def branch_slope(peaks: PeakTrajectory, t_from: float, t_to: float) -> float:
    """[t_from, t_to] 内峰轨迹的最小二乘斜率"""
    mask = (peaks.T >= t_from) & (peaks.T <= t_to)
    if np.count_nonzero(mask) < 2:
        raise InvalidInputError(f"Need at least two peak samples in [{t_from}, {t_to}]")
    slope, _ = np.polyfit(peaks.T[mask], peaks.X[mask], 1)
    return float(slope)


def _pde_density(
    field: CoinAngleField,
    x_lo: float,
    x_hi: float,
    h: float,
    T_final: float,
    X0: float,
    dX0: float,
    spin_mix: Sequence[complex]
) -> Tuple[np.ndarray, np.ndarray]:
    count = int(math.ceil((x_hi - x_lo) / h)) + 1
    x = x_lo + h * np.arange(count)
    state = ContinuumState.gaussian(x, 0.0, X0, dX0, spin_mix, field)

    # 均匀场取 dT = h/cosθ，特征线恰好落在网格点上
    samples = np.cos(np.asarray(eval_angle(field, np.linspace(0.0, T_final, 17)[:, None], x[None, ::16])))
    c_hi, c_lo = float(np.max(samples)), float(np.min(samples))
    dT_max = h / c_hi if c_hi - c_lo < 1e-14 and c_hi > 0 else h
    steps = max(1, int(math.ceil(T_final / dT_max - 1e-9)))
    final = evolve_pde(state, field, T_final / steps, steps)
    return x, final.density()


def pde_reference_density(
    field: CoinAngleField,
    x_lo: float,
    x_hi: float,
    h: float,
    T_final: float,
    X0: float,
    dX0: float,
    spin_mix: Sequence[complex] = DEFAULT_SPIN_MIX,
    points: Optional[np.ndarray] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Richardson 外推的迎风参照密度 2·n_{h/2} − n_h

    Args:
        points: 取值位置，None 时用步长 h/2 的网格

    Returns:
        (points, density)
    """
    x_coarse, n_coarse = _pde_density(field, x_lo, x_hi, h, T_final, X0, dX0, spin_mix)
    x_fine, n_fine = _pde_density(field, x_lo, x_hi, 0.5 * h, T_final, X0, dX0, spin_mix)
    if points is None:
        points = x_fine
    points = np.asarray(points, dtype=np.float64)
    reference = 2.0 * np.interp(points, x_fine, n_fine) - np.interp(points, x_coarse, n_coarse)
    return points, reference


@dataclass(frozen=True)
class ConvergenceRow:
    epsilon: float
    l2_error: float
    observed_order: float


def _walk_density_at(
    field: CoinAngleField,
    epsilon: float,
    x_lo: float,
    x_hi: float,
    T_final: float,
    X0: float,
    dX0: float,
    spin_mix: Sequence[complex]
) -> Tuple[np.ndarray, np.ndarray]:
    steps = int(round(T_final / epsilon))
    if steps % 2 != 0 or not math.isclose(steps * epsilon, T_final, rel_tol=1e-9):
        raise InvalidInputError(
            f"T_final={T_final} must be an even multiple of epsilon={epsilon}"
        )
    grid = LatticeGrid.covering(x_lo, x_hi, epsilon)
    state = init_gaussian(grid, X0, dX0, spin_mix)
    run = evolve(state, field, steps, stride=max(steps, 1))
    density = density_field([run.final])
    return density.midpoints, density.density_per_length()[0]


def convergence_study(
    field: CoinAngleField,
    epsilons: Sequence[float],
    T_final: float,
    X0: float = 0.0,
    dX0: float = 2.5,
    spin_mix: Sequence[complex] = DEFAULT_SPIN_MIX,
    workers: int = 1
) -> List[ConvergenceRow]:
    """
    ε → 0 收敛研究

    每个 ε 运行行走至 T_final（偶数步，即两步频闪），平滑密度与 h = min(ε)/4 的
    Richardson 参照比较，给出 L² 误差与相邻 ε 的观测阶数 log₂(e_i/e_{i+1})。

    Raises:
        ConfigurationError: 角度场不光滑
        InvalidInputError: ε 列表不是逐次减半
    """
    if not field.is_smooth:
        raise ConfigurationError(
            "Convergence study requires a smooth field",
            [f"field_kind: {field.kind.value} is not twice differentiable"],
        )
    epsilons = [float(e) for e in epsilons]
    if len(epsilons) < 2:
        raise InvalidInputError("Convergence study needs at least two epsilon values")
    for coarse, fine in zip(epsilons, epsilons[1:]):
        if not math.isclose(coarse, 2.0 * fine, rel_tol=1e-9):
            raise InvalidInputError(f"epsilon values must halve: {coarse} -> {fine}")
    if not (T_final > 0):
        raise InvalidInputError(f"T_final must be positive, got {T_final}")

    reach = SUPPORT_SIGMAS * dX0 + T_final + (BOUNDARY_WIDTH + 4) * epsilons[0]
    x_lo, x_hi = X0 - reach, X0 + reach

    jobs = [(field, eps, x_lo, x_hi, T_final, X0, dX0, tuple(spin_mix)) for eps in epsilons]
    with stage_timer("convergence walks"):
        if workers > 1:
            with cf.ProcessPoolExecutor(max_workers=workers) as ex:
                walk_results = list(ex.map(_walk_density_at, *zip(*jobs)))
        else:
            walk_results = [_walk_density_at(*job) for job in jobs]

    h = min(epsilons) / 4.0
    with stage_timer("convergence reference"):
        x_ref, n_ref = pde_reference_density(field, x_lo, x_hi, h, T_final, X0, dX0, spin_mix)

    errors = []
    for eps, (x_mid, n_walk) in zip(epsilons, walk_results):
        reference = np.interp(x_mid, x_ref, n_ref, left=0.0, right=0.0)
        errors.append(math.sqrt(eps * float(np.sum((n_walk - reference) ** 2))))

    rows = []
    for i, (eps, err) in enumerate(zip(epsilons, errors)):
        order = math.nan if i == 0 else math.log2(errors[i - 1] / err)
        rows.append(ConvergenceRow(epsilon=eps, l2_error=err, observed_order=order))
        logger.info(f"epsilon={eps:g}: L2 error {err:.3e}, observed order {order:.3f}")
    return rows


@dataclass(frozen=True, eq=False)
class StroboscopeReport:
    """标量序列 u_{j+1} = σ·exp(iω𝒯)·u_j 的频闪分析"""
    t: np.ndarray
    u: np.ndarray
    phase_step: np.ndarray
    modulus_deviation: float
    recurrence_error: float
    strobe_error: float
    fitted_generator: complex
    has_pi_jump: bool

    def summary(self) -> Dict[str, Any]:
        return {
            "modulus_deviation": self.modulus_deviation,
            "recurrence_error": self.recurrence_error,
            "strobe_error": self.strobe_error,
            "fitted_generator_re": self.fitted_generator.real,
            "fitted_generator_im": self.fitted_generator.imag,
            "has_pi_jump": self.has_pi_jump,
        }


def scalar_stroboscope_demo(omega: float, Tscale: float, sigma: int, steps: int) -> StroboscopeReport:
    """
    单步序列含 σ = −1 的 π 相位跳变而没有连续极限，两步频闪序列 v_k = u_{2k}
    满足 v_{k+1} = exp(2iω𝒯) v_k，生成元为 2iω。
    """
    if steps < 4:
        raise InvalidInputError(f"steps must be >= 4, got {steps}")
    if sigma not in (-1, 1):
        raise InvalidInputError(f"sigma must be +1 or -1, got {sigma}")
    if not (Tscale > 0 and math.isfinite(omega)):
        raise InvalidInputError("Tscale must be positive and omega finite")
    # 频闪周期相位 2ω𝒯 需落在 (−π, π) 内才能展开
    if abs(omega * Tscale) >= math.pi / 2:
        raise InvalidInputError(f"|omega * Tscale| must be < pi/2, got {abs(omega * Tscale)}")

    j = np.arange(steps + 1)
    t = j * Tscale
    factor = sigma * np.exp(1j * omega * Tscale)
    u = np.empty(steps + 1, dtype=np.complex128)
    u[0] = 1.0
    for k in range(steps):
        u[k + 1] = factor * u[k]

    closed_form = np.where(j % 2 == 0, 1.0, float(sigma)) * np.exp(1j * omega * t)
    # 频闪序列的时间 t_k = k𝒯
    v = u[::2]
    t_v = np.arange(len(v)) * Tscale
    strobe_error = float(np.max(np.abs(v - np.exp(2j * omega * t_v))))
    decay, _ = np.polyfit(t_v, np.log(np.abs(v)), 1)
    slope, _ = np.polyfit(t_v, np.unwrap(np.angle(v)), 1)

    phase_step = np.angle(u[1:] / u[:-1])
    offset = np.angle(np.exp(1j * (phase_step - omega * Tscale)))
    has_pi_jump = bool(np.any(np.abs(np.abs(offset) - math.pi) < 1e-9))

    return StroboscopeReport(
        t=t,
        u=u,
        phase_step=phase_step,
        modulus_deviation=float(np.max(np.abs(np.abs(u) - 1.0))),
        recurrence_error=float(np.max(np.abs(u - closed_form))),
        strobe_error=strobe_error,
        fitted_generator=complex(float(decay), float(slope)),
        has_pi_jump=has_pi_jump,
    )
