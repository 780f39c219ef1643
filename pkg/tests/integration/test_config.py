"""Integration tests for settings and run configuration loading."""

import os
from pathlib import Path
from unittest.mock import patch

import pytest

from open_system_pt.config import NumericsSettings, OutputSettings, Settings
from open_system_pt.domain.simulation import CentralSpinConfig, FreeModelConfig
from open_system_pt.exceptions import ConfigError
from open_system_pt.infrastructure.config_loader import load_config, parse_config
from tests.helpers import PRESETS_DIR


def test_settings_creation_with_defaults() -> None:
    """Test that the settings groups have their documented defaults."""
    numerics = NumericsSettings()
    assert numerics.bond_cap == 4096
    assert numerics.max_mode_liouville_dim == 4096
    assert numerics.max_dense_liouville_dim == 2**20
    assert numerics.svd_driver == "gesdd"
    assert numerics.hermiticity_tol == 1e-12
    assert numerics.trace_tol == 1e-10
    assert numerics.trace_drift_warning == 5e-7
    assert numerics.hermiticity_drift_warning == 1e-7

    output = OutputSettings()
    assert output.csv_significant_digits == 17
    assert output.pt_cache_precision == "complex128"


def test_settings_with_environment_variables() -> None:
    """Test that nested settings are read from environment variables."""
    with patch.dict(
        os.environ,
        {
            "NUMERICS__BOND_CAP": "2048",
            "OUTPUT__PT_CACHE_PRECISION": "complex64",
            "SWEEP__MAX_WORKERS": "2",
        },
    ):
        settings = Settings()

        assert settings.numerics.bond_cap == 2048
        assert settings.output.pt_cache_precision == "complex64"
        assert settings.sweep.max_workers == 2


def test_load_config_reads_toml(tmp_path: Path) -> None:
    """Test a minimal run file."""
    path = tmp_path / "run.toml"
    path.write_text('dt = 0.1\nn_max = 5\n\n[model]\nkind = "central_spin"\nn_modes = 3\n')
    config = load_config(path)
    assert isinstance(config.model, CentralSpinConfig)
    assert config.model.n_modes == 3
    assert config.final_time == pytest.approx(0.5)


def test_load_config_applies_overrides(tmp_path: Path) -> None:
    """Test dotted overrides, with None meaning 'not given'."""
    path = tmp_path / "run.toml"
    path.write_text('dt = 0.1\nn_max = 5\n\n[model]\nkind = "central_spin"\n')
    config = load_config(path, {"dt": 0.05, "model.n_modes": 7, "epsilon": None})
    assert config.dt == 0.05
    assert config.model.n_modes == 7
    assert config.epsilon == 1e-8


def test_load_config_reports_syntax_errors(tmp_path: Path) -> None:
    """Test that TOML errors carry the line number."""
    path = tmp_path / "broken.toml"
    path.write_text("dt = 0.1\nn_max = = 5\n")
    with pytest.raises(ConfigError, match="line 2"):
        load_config(path)


def test_load_config_reports_field_paths(tmp_path: Path) -> None:
    """Test that validation errors name the offending field."""
    path = tmp_path / "bad.toml"
    path.write_text('dt = 0.1\nn_max = 5\n\n[model]\nkind = "free"\ndecay = -1.0\n')
    with pytest.raises(ConfigError, match="model.free.decay"):
        load_config(path)
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "missing.toml")


def test_parse_config_rejects_bad_override_target() -> None:
    """Test that overriding below a scalar fails."""
    with pytest.raises(ConfigError):
        parse_config({"dt": 0.1, "n_max": 1, "model": {"kind": "free"}}, {"dt.value": 1.0})
    config = parse_config({"dt": 0.1, "n_max": 1, "model": {"kind": "free"}})
    assert isinstance(config.model, FreeModelConfig)


@pytest.mark.parametrize("preset", sorted(PRESETS_DIR.glob("*.toml")), ids=lambda p: p.stem)
def test_presets_are_valid(preset: Path) -> None:
    """Test that every shipped preset validates."""
    config = load_config(preset)
    assert config.n_max >= 1
    assert config.dt > 0.0
