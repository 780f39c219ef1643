"""Unit tests for brute-force joint propagation."""

import numpy as np
import pytest

from open_system_pt.config import NumericsSettings, Settings
from open_system_pt.domain.mode import ModeSpec
from open_system_pt.domain.system import SystemSpec, constant_hamiltonian
from open_system_pt.exceptions import ArgumentError, ResourceError
from open_system_pt.numerics import dense_reference
from open_system_pt.numerics.dense_reference import joint_expectation, mode_expectation, propagate_dense
from open_system_pt.numerics.operators import basis_state, embed, number
from open_system_pt.numerics.propagators import free_propagators
from tests.helpers import jaynes_cummings_mode


def test_without_modes_matches_free_propagation(
    rabi_system: SystemSpec, ground_state: np.ndarray
) -> None:
    """Test the dense run of an isolated system against the free propagators."""
    n, dt = 20, 0.1
    trajectory = propagate_dense(rabi_system, [], n, dt, ground_state)
    rho = ground_state
    for l, step in enumerate(free_propagators(rabi_system, n, dt), start=1):
        rho = step.apply(rho)
        assert np.allclose(trajectory.states[l], rho, atol=1e-13)


def test_excitation_number_is_conserved() -> None:
    """Test that |e><e| + sum a^+ a stays constant for exchange couplings."""
    system = SystemSpec(dim=2, hamiltonian=constant_hamiltonian(0.3 * basis_state(1, 2)))
    modes = [
        jaynes_cummings_mode(coupling=0.4, omega=0.2, dim=3, temperature=0.0),
        jaynes_cummings_mode(coupling=0.7, omega=0.1, dim=3, temperature=0.0),
    ]
    trajectory = propagate_dense(system, modes, 30, 0.1, basis_state(1, 2), keep_joint=True)
    dims = [2, 3, 3]
    excitations = (
        embed(basis_state(1, 2), 0, dims) + embed(number(3), 1, dims) + embed(number(3), 2, dims)
    )
    values = joint_expectation(trajectory, excitations)
    assert np.allclose(values, 1.0, atol=1e-12)

    photons = [mode_expectation(trajectory, k, number(3)).real for k in range(2)]
    excited = np.array([rho[1, 1].real for rho in trajectory.states])
    assert np.allclose(excited + photons[0] + photons[1], 1.0, atol=1e-12)
    assert photons[1][-1] > 0.0


def test_mode_expectation_requires_joint_states(rabi_system: SystemSpec, jc_mode: ModeSpec) -> None:
    """Test errors when joint states were not kept or the mode index is invalid."""
    trajectory = propagate_dense(rabi_system, [jc_mode], 3, 0.1, basis_state(0, 2))
    assert trajectory.joint_states is None
    with pytest.raises(ArgumentError):
        mode_expectation(trajectory, 0, number(3))
    with pytest.raises(ArgumentError):
        joint_expectation(trajectory, np.eye(6))
    kept = propagate_dense(rabi_system, [jc_mode], 3, 0.1, basis_state(0, 2), keep_joint=True)
    with pytest.raises(ArgumentError):
        mode_expectation(kept, 1, number(3))


def test_initial_state_shape_is_checked(rabi_system: SystemSpec) -> None:
    """Test the initial state dimension check."""
    with pytest.raises(ArgumentError):
        propagate_dense(rabi_system, [], 3, 0.1, basis_state(0, 3))


def test_dense_size_guard(
    monkeypatch: pytest.MonkeyPatch, rabi_system: SystemSpec, jc_mode: ModeSpec
) -> None:
    """Test that an oversized joint space raises ResourceError."""
    capped = Settings(numerics=NumericsSettings(max_dense_liouville_dim=100))
    monkeypatch.setattr(dense_reference, "settings", capped)
    with pytest.raises(ResourceError):
        propagate_dense(rabi_system, [jc_mode, jc_mode], 3, 0.1, basis_state(0, 2))
