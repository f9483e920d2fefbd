# -*- coding: utf-8 -*-
"""
模拟流程编排器
行走、黑洞面板、收敛研究、测地线与标量频闪演示
"""

import time
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from src import __version__
from src.qwgrav import (
    InvalidInputError,
    LatticeGrid,
    branch_slope,
    convergence_study,
    density_field,
    deviation_by_singularity_distance,
    domain_boundary_position,
    domain_location,
    evolve,
    exits_domain,
    geodesic_deviation,
    horizon_position,
    init_gaussian,
    integrate_null_geodesic,
    make_bh_field,
    scalar_stroboscope_demo,
    singularity_position,
    terminates_on_line,
    track_peaks,
)
from src.qwgrav.utils import logger, stage_timer

from .config import RunConfig
from .field_factory import build_field, build_grid, build_params, grid_window
from .types import Command, Panel, RunArtifacts

# 面板数据中忽略低于此值的密度
DENSITY_FLOOR = 1e-10
# 峰到奇点线的距离不超过该格点数时视为奇点附近
NEAR_SINGULARITY_SITES = 10


def _sign_name(sign: int) -> str:
    return "plus" if sign > 0 else "minus"


class SimulationOrchestrator:
    """模拟流程编排器"""

    def __init__(self):
        self._tsv_writer = None
        self._density_writer = None
        self._graymap_writer = None
        self._plot_script_writer = None

    @property
    def tsv_writer(self):
        """延迟加载 TSV 写入器"""
        if self._tsv_writer is None:
            from src.output import TSVWriter
            self._tsv_writer = TSVWriter()
        return self._tsv_writer

    @property
    def density_writer(self):
        """延迟加载密度快照写入器"""
        if self._density_writer is None:
            from src.output import DensityWriter
            self._density_writer = DensityWriter(self.tsv_writer)
        return self._density_writer

    @property
    def graymap_writer(self):
        """延迟加载热图写入器"""
        if self._graymap_writer is None:
            from src.output import GraymapWriter
            self._graymap_writer = GraymapWriter()
        return self._graymap_writer

    @property
    def plot_script_writer(self):
        """延迟加载 gnuplot 脚本写入器"""
        if self._plot_script_writer is None:
            from src.output import PlotScriptWriter
            self._plot_script_writer = PlotScriptWriter()
        return self._plot_script_writer

    @staticmethod
    def _header(config: RunConfig, command: Command, **metadata: Any) -> Dict[str, Any]:
        header = config.header_items()
        header.update({"command": command.value, "version": __version__})
        header.update(metadata)
        return header

    @staticmethod
    def _grid_metadata(grid: LatticeGrid) -> Dict[str, Any]:
        return {"grid_sites": grid.site_count, "grid_origin_offset": grid.origin_offset}

    def run_walk(self, config: RunConfig, output_dir: Path) -> RunArtifacts:
        """
        行走：π_j 序列、密度快照与清单、可选热图

        Args:
            config: 运行配置
            output_dir: 输出目录

        Returns:
            RunArtifacts
        """
        start_time = time.time()
        artifacts = RunArtifacts(command=Command.WALK, output_dir=Path(output_dir))

        # 1. 构造场、网格与初态
        field = build_field(config)
        grid = build_grid(config)
        state = init_gaussian(grid, config.x0, config.dx0, config.spin_vector())
        logger.info(
            f"Walk: field={config.field_kind}, epsilon={config.epsilon}, steps={config.steps}, "
            f"sites={grid.site_count}"
        )

        # 2. 演化
        with stage_timer("walk evolution"):
            run = evolve(
                state, field, config.steps,
                stride=config.snapshot_stride,
                tolerance=config.tail_tolerance,
                show_progress=config.show_progress,
            )
        density = density_field(run.snapshots)
        header = self._header(config, Command.WALK, **self._grid_metadata(grid))

        # 3. 写出
        j = np.arange(config.steps + 1)
        probability = pd.DataFrame({"j": j, "T": j * grid.dt, "pi": run.probabilities})
        artifacts.add(self.tsv_writer.write(probability, artifacts.output_dir / "probability.tsv", header))
        self.density_writer.write(density, artifacts.output_dir, header)
        artifacts.files.extend(self.density_writer.written)
        if config.heatmap:
            artifacts.add(self.graymap_writer.write(density.smoothed[:, 1:], artifacts.output_dir / "density.pgm"))

        drift = float(np.max(np.abs(run.probabilities - run.probabilities[0])))
        artifacts.summary = {
            "probability_drift": drift,
            "boundary_high_water": run.boundary_high_water,
            "snapshots": len(run.snapshots),
        }
        artifacts.processing_time = time.time() - start_time
        logger.info(f"Walk finished: probability drift {drift:.3e}, {len(artifacts.files)} files")
        return artifacts

    def run_panel(self, config: RunConfig, panel: Panel, output_dir: Path) -> RunArtifacts:
        """
        黑洞面板：行走密度、两条零测地线、视界、奇点与 𝒟 边界，峰偏差与 gnuplot 脚本

        Args:
            config: 已叠加面板预设的运行配置
            panel: 面板
            output_dir: 面板目录

        Returns:
            RunArtifacts
        """
        start_time = time.time()
        artifacts = RunArtifacts(command=Command.FIGURE1, output_dir=Path(output_dir), panel=panel)

        params = build_params(config)
        field = make_bh_field(params)
        grid = build_grid(config)
        state = init_gaussian(grid, config.x0, config.dx0, config.spin_vector())
        logger.info(
            f"Panel {panel.value}: lambda={params.lam}, X0={config.x0}, steps={config.steps}, "
            f"domain {domain_location(params).value}"
        )

        # 1. 行走与密度
        with stage_timer(f"panel {panel.value} walk"):
            run = evolve(
                state, field, config.steps,
                stride=config.snapshot_stride,
                tolerance=config.tail_tolerance,
                show_progress=config.show_progress,
            )
        density = density_field(run.snapshots)
        left, right = track_peaks(density, config.x0)

        # 2. 测地线
        window = grid_window(config)
        tracks = {
            sign: integrate_null_geodesic(params, (0.0, config.x0), sign, config.geodesic_dt, config.t_max, window)
            for sign in (1, -1)
        }

        # 3. 面板数据（长表）
        times = density.times
        site_density = density.smoothed[:, 1:]
        frames = []
        keep = site_density >= DENSITY_FLOOR
        t_index, x_index = np.nonzero(keep)
        frames.append(pd.DataFrame({
            "series": "density",
            "T": times[t_index],
            "X": grid.positions[x_index],
            "value": site_density[t_index, x_index],
        }))
        for sign, track in tracks.items():
            frames.append(pd.DataFrame({
                "series": f"geodesic_{_sign_name(sign)}", "T": track.T, "X": track.X, "value": np.nan,
            }))
        for name, line in (("horizon", horizon_position),
                           ("singularity", singularity_position),
                           ("domain_boundary", domain_boundary_position)):
            frames.append(pd.DataFrame({"series": name, "T": times, "X": line(params, times), "value": np.nan}))
        for peaks in (left, right):
            frames.append(pd.DataFrame({
                "series": f"peak_{peaks.branch.value}", "T": peaks.T, "X": peaks.X, "value": np.nan,
            }))
        panel_frame = pd.concat(frames, ignore_index=True)

        # 4. 峰与测地线偏差
        deviations = []
        summary: Dict[str, Any] = {"domain_location": domain_location(params).value}
        for peaks, sign in ((left, -1), (right, 1)):
            branch = peaks.branch.value
            try:
                report = geodesic_deviation(peaks, tracks[sign])
            except InvalidInputError as e:
                logger.warning(f"Panel {panel.value}: no {branch} deviation ({e})")
                continue
            deviations.append(pd.DataFrame({
                "branch": branch, "T": report.T, "X_peak": report.X_peak,
                "X_geo": report.X_geo, "deviation": report.deviation,
            }))
            summary[f"{branch}_deviation_max"] = report.max
            summary[f"{branch}_deviation_mean"] = report.mean
            summary[f"{branch}_singularity_time"] = terminates_on_line(peaks, params, 2.0 * grid.dx)
            far, near = deviation_by_singularity_distance(report, params, NEAR_SINGULARITY_SITES * grid.dx)
            summary[f"{branch}_far_deviation_max"] = far
            summary[f"{branch}_near_deviation_max"] = near
        summary["right_domain_exit_time"] = exits_domain(right, params)
        if len(right) >= 4:
            t_half = right.T[len(right) // 2]
            summary["right_late_slope"] = branch_slope(right, t_half, right.T[-1])
        deviation_frame = (
            pd.concat(deviations, ignore_index=True) if deviations
            else pd.DataFrame(columns=["branch", "T", "X_peak", "X_geo", "deviation"])
        )

        header = self._header(
            config, Command.FIGURE1,
            panel=panel.value,
            domain_location=summary["domain_location"],
            geodesic_plus_termination=tracks[1].termination.value,
            geodesic_minus_termination=tracks[-1].termination.value,
            **self._grid_metadata(grid),
        )
        out = artifacts.output_dir
        artifacts.add(self.tsv_writer.write(panel_frame, out / "panel.tsv", header))
        artifacts.add(self.tsv_writer.write(deviation_frame, out / "deviation.tsv", header))
        if config.heatmap:
            artifacts.add(self.graymap_writer.write(site_density, out / "density.pgm"))
        artifacts.add(self.plot_script_writer.write("panel.tsv", out / "plot.gp", {"panel": panel.value}))

        artifacts.summary = summary
        artifacts.processing_time = time.time() - start_time
        logger.info(f"Panel {panel.value} finished: {summary}")
        return artifacts

    def run_convergence(self, config: RunConfig, output_dir: Path) -> RunArtifacts:
        """ε 收敛表 convergence.tsv"""
        start_time = time.time()
        artifacts = RunArtifacts(command=Command.CONVERGE, output_dir=Path(output_dir))
        field = build_field(config)
        rows = convergence_study(
            field, config.epsilons, config.t_final,
            X0=config.x0, dX0=config.dx0, spin_mix=config.spin_vector(), workers=config.workers,
        )
        table = pd.DataFrame({
            "epsilon": [r.epsilon for r in rows],
            "l2_error": [r.l2_error for r in rows],
            "observed_order": [r.observed_order for r in rows],
        })
        header = self._header(config, Command.CONVERGE)
        artifacts.add(self.tsv_writer.write(table, artifacts.output_dir / "convergence.tsv", header))
        artifacts.summary = {"errors": table["l2_error"].tolist()}
        artifacts.processing_time = time.time() - start_time
        return artifacts

    def run_geodesics(self, config: RunConfig, output_dir: Path) -> RunArtifacts:
        """每个 (起点, 方向) 一个 geodesic_<i>_<plus|minus>.tsv"""
        start_time = time.time()
        artifacts = RunArtifacts(command=Command.GEODESIC, output_dir=Path(output_dir))
        params = build_params(config)
        window: Optional[tuple] = None
        if config.x_min is not None and config.x_max is not None:
            window = (config.x_min, config.x_max)

        terminations: List[str] = []
        for i, start in enumerate(config.starts()):
            for sign in config.geodesic_signs:
                track = integrate_null_geodesic(params, start, sign, config.geodesic_dt, config.t_max, window)
                horizon = horizon_position(params, track.T)
                frame = pd.DataFrame({
                    "T": track.T, "X": track.X, "X_horizon": horizon, "horizon_deviation": track.X - horizon,
                })
                header = self._header(
                    config, Command.GEODESIC,
                    start=f"{start[0]!r}:{start[1]!r}", sign=sign, termination=track.termination.value,
                )
                name = f"geodesic_{i}_{_sign_name(sign)}.tsv"
                artifacts.add(self.tsv_writer.write(frame, artifacts.output_dir / name, header))
                terminations.append(track.termination.value)

        artifacts.summary = {"terminations": terminations}
        artifacts.processing_time = time.time() - start_time
        return artifacts

    def run_strobe(self, config: RunConfig, output_dir: Path) -> RunArtifacts:
        """标量频闪演示 strobe.tsv"""
        start_time = time.time()
        artifacts = RunArtifacts(command=Command.STROBE_DEMO, output_dir=Path(output_dir))
        report = scalar_stroboscope_demo(
            config.strobe_omega, config.strobe_tscale, config.strobe_sigma, config.strobe_steps
        )
        j = np.arange(len(report.u))
        frame = pd.DataFrame({
            "j": j,
            "t": report.t,
            "re_u": report.u.real,
            "im_u": report.u.imag,
            "abs_u": np.abs(report.u),
            "phase_step": np.concatenate([[np.nan], report.phase_step]),
        })
        header = self._header(config, Command.STROBE_DEMO, **report.summary())
        artifacts.add(self.tsv_writer.write(frame, artifacts.output_dir / "strobe.tsv", header))
        artifacts.summary = report.summary()
        artifacts.processing_time = time.time() - start_time
        return artifacts
