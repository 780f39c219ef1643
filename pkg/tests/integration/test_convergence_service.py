"""Integration tests for convergence sweeps."""

from pathlib import Path

import pytest

from open_system_pt.application.services.convergence_service import (
    ConvergenceService,
    SweepPoint,
    max_deviation,
    trotter_slope,
)
from open_system_pt.domain.results import TrotterRow
from open_system_pt.domain.simulation import SimulationConfig
from open_system_pt.exceptions import ConfigError
from open_system_pt.utils.json_util import load_json


def sweep_config(tmp_path: Path, model: dict, sweep: dict, **kwargs: float) -> SimulationConfig:
    """Sweep configuration with output under tmp_path."""
    values = {
        "model": model,
        "dt": 0.1,
        "n_max": 10,
        "epsilon": 1e-10,
        "output_path": tmp_path / "sweep.csv",
        "sweep": sweep,
    }
    return SimulationConfig(**(values | kwargs))


def test_trotter_slope_of_synthetic_rows() -> None:
    """Test the log-log fit on exact power laws."""
    rows = [TrotterRow(dt=dt, error=3.0 * dt**2, d_max=1, wall_time=0.0) for dt in (0.1, 0.05, 0.025)]
    assert trotter_slope(rows) == pytest.approx(2.0)
    assert trotter_slope(rows[:1]) is None
    zero = [TrotterRow(dt=dt, error=0.0, d_max=1, wall_time=0.0) for dt in (0.1, 0.05)]
    assert trotter_slope(zero) is None


def test_max_deviation() -> None:
    """Test the maximum deviation and the grid check."""
    assert max_deviation([1.0, 2.0j], [1.0, 0.0]) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        max_deviation([1.0], [1.0, 2.0])


def test_sweep_point_tag() -> None:
    """Test file-name tags of sweep points."""
    assert SweepPoint(dt=0.05, epsilon=1e-8).tag == "dt0.05_eps1e-08"
    assert SweepPoint(dt=0.1, epsilon=1e-6, n_modes=4).tag == "dt0.1_eps1e-06_n4"


def test_point_config_rescales_steps(tmp_path: Path) -> None:
    """Test that each point covers the common final time with its own file."""
    service = ConvergenceService(
        sweep_config(tmp_path, {"kind": "resonant_level", "n_modes": 2}, {"dt": [0.05], "n_modes": [3]})
    )
    config = service.point_config(SweepPoint(dt=0.05, epsilon=1e-6, n_modes=3))
    assert config.n_max == 20
    assert config.model.n_modes == 3
    assert config.output_path.name == "sweep_dt0.05_eps1e-06_n3.csv"
    assert config.sweep is None
    with pytest.raises(ConfigError):
        service.point_config(SweepPoint(dt=0.3, epsilon=1e-6))


def test_sweep_rejects_unsupported_tables(tmp_path: Path) -> None:
    """Test missing sweep tables and mode counts on models without modes."""
    with pytest.raises(ConfigError):
        ConvergenceService(
            SimulationConfig(model={"kind": "free"}, dt=0.1, n_max=1, output_path=tmp_path / "a.csv")
        )
    with pytest.raises(ConfigError):
        ConvergenceService(sweep_config(tmp_path, {"kind": "free"}, {"n_modes": [2]}))


@pytest.mark.asyncio
async def test_sweep_against_itself_has_zero_error(tmp_path: Path) -> None:
    """Test that a point compared with itself has zero error and all tables are written."""
    config = sweep_config(
        tmp_path,
        {"kind": "resonant_level", "n_modes": 2, "bandwidth": 1.0, "coupling": 0.5},
        {
            "dt": [0.1],
            "epsilon": [1e-10],
            "reference_epsilon": 1e-10,
            "trotter_reference_dt": 0.05,
            "final_time": 1.0,
        },
    )
    report = await ConvergenceService(config).run()
    assert len(report.threshold_rows) == 1
    assert report.threshold_rows[0].error == 0.0
    assert len(report.trotter_rows) == 1
    assert report.trotter_rows[0].error > 0.0
    assert report.trotter_slope is None
    assert (tmp_path / "sweep_threshold_errors.csv").exists()
    assert (tmp_path / "sweep_trotter_errors.csv").exists()
    assert (tmp_path / "sweep_dt0.1_eps1e-10.csv").exists()
    assert load_json(tmp_path / "sweep_sweep.json")["trotter_slope"] is None


@pytest.mark.asyncio
async def test_threshold_errors_shrink_with_epsilon(tmp_path: Path) -> None:
    """Test that tighter thresholds approach the reference."""
    config = sweep_config(
        tmp_path,
        {"kind": "resonant_level", "n_modes": 4, "bandwidth": 2.0, "coupling": 0.4},
        {"dt": [0.1], "epsilon": [1e-2, 1e-8], "reference_epsilon": 1e-12, "final_time": 2.0},
    )
    report = await ConvergenceService(config).run()
    errors = {row.epsilon: row.error for row in report.threshold_rows}
    assert errors[1e-12] == 0.0
    assert errors[1e-8] < 1e-6
    assert errors[1e-8] <= errors[1e-2]
    d_max = {row.epsilon: row.d_max for row in report.threshold_rows}
    assert d_max[1e-2] <= d_max[1e-12]


@pytest.mark.slow
@pytest.mark.asyncio
async def test_resonant_level_trotter_error_is_second_order(tmp_path: Path) -> None:
    """Test a log-log slope of 2 for the final-time error against dt."""
    config = sweep_config(
        tmp_path,
        {
            "kind": "resonant_level",
            "n_modes": 10,
            "density_of_states": 1.0,
            "coupling": 0.3989422804014327,
        },
        {
            "dt": [0.1, 0.05, 0.025, 0.0125],
            "epsilon": [1e-10],
            "reference_epsilon": 1e-10,
            "trotter_reference_dt": 0.003125,
            "final_time": 2.5,
            "observable": "n_S",
        },
    )
    report = await ConvergenceService(config).run()
    assert len(report.trotter_rows) == 4
    assert report.trotter_slope == pytest.approx(2.0, abs=0.3)
