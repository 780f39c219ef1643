"""Convergence sweeps over (dt, epsilon, n_modes) with threshold and Trotter error tables."""

import asyncio
import time
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from open_system_pt.application.services.simulation_service import SimulationService
from open_system_pt.config import settings
from open_system_pt.domain.results import SweepRow, TrotterRow
from open_system_pt.domain.simulation import SimulationConfig, SweepConfig
from open_system_pt.exceptions import ConfigError
from open_system_pt.infrastructure.csv_store import write_model_table
from open_system_pt.utils.json_util import write_json_atomic
from open_system_pt.utils.logger_util import setup_logging

logger = setup_logging()


class SweepPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    dt: float
    epsilon: float
    n_modes: int | None = None

    @property
    def tag(self) -> str:
        """File-name tag of the point."""
        tag = f"dt{self.dt:g}_eps{self.epsilon:g}"
        return tag + (f"_n{self.n_modes}" if self.n_modes is not None else "")


class PointResult(BaseModel):
    point: SweepPoint
    values: list[complex] = Field(description="Observable at t_l, l = 0..n")
    d_max: int
    wall_time: float


class SweepReport(BaseModel):
    threshold_rows: list[SweepRow] = Field(default_factory=list)
    trotter_rows: list[TrotterRow] = Field(default_factory=list)
    trotter_slope: float | None = Field(default=None, description="Fitted log-log slope of error vs dt")


def trotter_slope(rows: list[TrotterRow]) -> float | None:
    """Least-squares slope of log(error) against log(dt), over rows with non-zero error."""
    usable = [(r.dt, r.error) for r in rows if r.error > 0.0]
    if len(usable) < 2:
        return None
    dts, errors = zip(*usable, strict=True)
    slope, _ = np.polyfit(np.log(dts), np.log(errors), 1)
    return float(slope)


def max_deviation(values: list[complex], reference: list[complex]) -> float:
    """max_l |O(t_l) - O_ref(t_l)| on a common grid."""
    if len(values) != len(reference):
        raise ValueError(f"grids differ: {len(values)} vs {len(reference)} points")
    return float(np.max(np.abs(np.asarray(values) - np.asarray(reference))))


class ConvergenceService:
    """
    Runs sweep points concurrently in worker threads, at most settings.sweep.max_workers at a time.
    Each point owns its model and process tensor and writes its own CSV.
    """

    def __init__(self, config: SimulationConfig) -> None:
        if config.sweep is None:
            raise ConfigError("convergence sweep needs a [sweep] table")
        self.config = config
        self.sweep: SweepConfig = config.sweep
        self.final_time = self.sweep.final_time or config.final_time
        self.reference_epsilon = (
            self.sweep.reference_epsilon if self.sweep.reference_epsilon is not None else config.epsilon
        )
        if self.sweep.n_modes and "n_modes" not in type(config.model).model_fields:
            raise ConfigError(f"model '{config.model.kind}' has no n_modes to sweep")

    def point_config(self, point: SweepPoint) -> SimulationConfig:
        """The run configuration of one sweep point."""
        n_max = int(round(self.final_time / point.dt))
        if n_max < 1 or not np.isclose(n_max * point.dt, self.final_time, rtol=1e-9):
            raise ConfigError(f"final time {self.final_time} is not a multiple of dt={point.dt}")
        model = self.config.model
        if point.n_modes is not None:
            model = model.model_copy(update={"n_modes": point.n_modes})
        out = Path(self.config.output_path)
        return self.config.model_copy(
            update={
                "model": model,
                "dt": point.dt,
                "n_max": n_max,
                "epsilon": point.epsilon,
                "output_path": out.with_name(f"{out.stem}_{point.tag}{out.suffix or '.csv'}"),
                "pt_cache_path": None,
                "sweep": None,
            }
        )

    def run_point(self, point: SweepPoint) -> PointResult:
        """Blocking run of a single point."""
        config = self.point_config(point)
        start = time.perf_counter()
        result = SimulationService(config).run(write=True)
        wall = time.perf_counter() - start
        name = self.sweep.observable or next(iter(result.observables))
        values = [complex(v) for v in result.expectation(name)]
        logger.info(f"Sweep point {point.tag} finished in {wall:.2f}s, d_max={result.summary.d_max}")
        return PointResult(point=point, values=values, d_max=result.summary.d_max, wall_time=wall)

    async def _run_points(self, points: list[SweepPoint]) -> dict[SweepPoint, PointResult]:
        semaphore = asyncio.Semaphore(settings.sweep.max_workers)

        async def guarded(point: SweepPoint) -> PointResult:
            async with semaphore:
                return await asyncio.to_thread(self.run_point, point)

        results = await asyncio.gather(*(guarded(point) for point in points))
        return {result.point: result for result in results}

    def _points(self) -> tuple[list[SweepPoint], list[SweepPoint]]:
        dts = self.sweep.dt or [self.config.dt]
        epsilons = self.sweep.epsilon or [self.config.epsilon]
        n_modes: list[int | None] = list(self.sweep.n_modes) or [None]
        threshold_points = []
        for dt in dts:
            for n in n_modes:
                for eps in [*epsilons, self.reference_epsilon]:
                    point = SweepPoint(dt=dt, epsilon=eps, n_modes=n)
                    if point not in threshold_points:
                        threshold_points.append(point)
        trotter_points = []
        if self.sweep.trotter_reference_dt is not None:
            trotter_points = [
                SweepPoint(dt=dt, epsilon=self.reference_epsilon, n_modes=n_modes[0]) for dt in dts
            ]
        return threshold_points, trotter_points

    def _trotter_reference(self) -> SweepPoint | None:
        if self.sweep.trotter_reference_dt is None:
            return None
        n_modes = self.sweep.n_modes[0] if self.sweep.n_modes else None
        return SweepPoint(
            dt=self.sweep.trotter_reference_dt, epsilon=self.reference_epsilon, n_modes=n_modes
        )

    async def run(self) -> SweepReport:
        """
        Run every point once and assemble both error tables.
        Returns:
            SweepReport: Threshold errors against epsilon_min per (dt, n_modes), and
            final-time Trotter errors against the dt_min reference with the fitted slope.
        """
        threshold_points, trotter_points = self._points()
        trotter_reference = self._trotter_reference()
        extra = [trotter_reference] if trotter_reference is not None else []
        unique = list(dict.fromkeys([*threshold_points, *trotter_points, *extra]))
        logger.info(f"Convergence sweep over {len(unique)} points, {settings.sweep.max_workers} workers")
        results = await self._run_points(unique)

        report = SweepReport()
        for point in threshold_points:
            reference = results[point.model_copy(update={"epsilon": self.reference_epsilon})]
            result = results[point]
            report.threshold_rows.append(
                SweepRow(
                    dt=point.dt,
                    epsilon=point.epsilon,
                    n_modes=point.n_modes,
                    error=max_deviation(result.values, reference.values),
                    d_max=result.d_max,
                    wall_time=result.wall_time,
                )
            )

        if trotter_reference is not None:
            reference = results[trotter_reference]
            for point in trotter_points:
                result = results[point]
                report.trotter_rows.append(
                    TrotterRow(
                        dt=point.dt,
                        error=float(abs(result.values[-1] - reference.values[-1])),
                        d_max=result.d_max,
                        wall_time=result.wall_time,
                    )
                )
            report.trotter_slope = trotter_slope(report.trotter_rows)
            logger.info(f"Trotter log-log slope: {report.trotter_slope}")

        self.write(report)
        return report

    def write(self, report: SweepReport) -> None:
        """Error tables as CSV and a JSON summary next to the configured output path."""
        out = Path(self.config.output_path)
        if report.threshold_rows:
            write_model_table(out.with_name(f"{out.stem}_threshold_errors.csv"), report.threshold_rows)
        if report.trotter_rows:
            write_model_table(out.with_name(f"{out.stem}_trotter_errors.csv"), report.trotter_rows)
        write_json_atomic(out.with_name(f"{out.stem}_sweep.json"), report.model_dump(mode="json"))
