"""Unit tests for the model builders."""

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.integrate import quad

from open_system_pt.application.services.simulation_service import build_bundle
from open_system_pt.domain.bundle import ModelBundle
from open_system_pt.domain.mode import ModeSpec
from open_system_pt.domain.simulation import (
    AnharmonicConfig,
    DispersiveConfig,
    ResonantLevelConfig,
    SimulationConfig,
)
from open_system_pt.domain.spectral import ContinuumDiscretization
from open_system_pt.domain.system import SystemSpec, constant_hamiltonian
from open_system_pt.environments.anharmonic import anharmonic_modes, vibrational_levels
from open_system_pt.environments.central_spin import central_spin_modes, heisenberg_coupling
from open_system_pt.environments.quantum_dot import gaussian_envelope
from open_system_pt.numerics.dense_reference import mode_expectation, propagate_dense
from open_system_pt.numerics.operators import (
    PAULI_X,
    SPIN_Z,
    basis_state,
    create,
    destroy,
    number,
)
from open_system_pt.numerics.process_tensor import absorb_modes, contract
from open_system_pt.numerics.propagators import free_propagators, thermal_state
from open_system_pt.numerics.tensor_core import kron

EXCITED = basis_state(1, 2)


def bundle_for(model: dict, dt: float = 0.1, n_max: int = 10, seed: int = 0) -> ModelBundle:
    """Build the bundle of a model table."""
    return build_bundle(SimulationConfig(model=model, dt=dt, n_max=n_max, seed=seed))


def test_free_model_has_no_modes() -> None:
    """Test the free two-level model."""
    bundle = bundle_for({"kind": "free", "rabi": 2.0, "initial": "excited"})
    assert bundle.modes == []
    assert np.allclose(bundle.system.hamiltonian(0.0), PAULI_X)
    assert np.allclose(bundle.initial_state, EXCITED)
    assert "n_e" in bundle.observables


def test_resonant_level_band() -> None:
    """Test site frequencies, couplings and occupations of the band."""
    bundle = bundle_for(
        {
            "kind": "resonant_level",
            "n_modes": 10,
            "density_of_states": 1.0,
            "coupling": 0.3989422804014327,
        }
    )
    assert len(bundle.modes) == 10
    omegas = [mode.joint_hamiltonian(0.0)[1, 1].real for mode in bundle.modes]
    assert np.allclose(omegas, np.arange(-4.5, 5.0, 1.0))
    hop = bundle.modes[0].joint_hamiltonian(0.0)[1, 2]
    assert hop.real == pytest.approx(0.3989422804014327)
    assert all(np.allclose(mode.initial_state, basis_state(1, 2)) for mode in bundle.modes)
    assert np.allclose(bundle.initial_state, basis_state(0, 2))


def test_resonant_level_rejects_bad_occupations() -> None:
    """Test occupation list validation."""
    with pytest.raises(ValidationError):
        ResonantLevelConfig(n_modes=2, occupations=[1])
    with pytest.raises(ValidationError):
        ResonantLevelConfig(n_modes=2, occupations=[1, 2])


def test_quantum_dot_mode_lists() -> None:
    """Test phonon and photon mode counts and the Lindblad variant."""
    microscopic = bundle_for(
        {"kind": "qd_phonon_photon", "phonon_modes": 5, "photons": "microscopic", "photon_modes": 3}
    )
    assert [mode.label for mode in microscopic.modes][:2] == ["phonon-0", "phonon-1"]
    assert len(microscopic.modes) == 8
    assert microscopic.system.dissipators == []
    assert microscopic.system.time_dependent
    # q = 0 phonon: zero frequency, zero coupling
    assert np.allclose(microscopic.modes[0].joint_hamiltonian(0.0), 0.0)

    lindblad = bundle_for({"kind": "qd_phonon_photon", "phonons": False, "drive": False})
    assert lindblad.modes == []
    assert len(lindblad.system.dissipators) == 1
    assert not lindblad.system.time_dependent


def test_gaussian_pulse_area() -> None:
    """Test that the envelope integrates to its pulse area."""
    envelope = gaussian_envelope(3.0 * np.pi, 7.0, 5.0)
    area, _ = quad(envelope, -50.0, 60.0)
    assert area == pytest.approx(3.0 * np.pi, rel=1e-6)
    sigma = 5.0 / (2.0 * np.sqrt(2.0 * np.log(2.0)))
    assert envelope(7.0 + 2.5) == pytest.approx(0.5 * envelope(7.0), rel=1e-12)
    assert sigma == pytest.approx(2.1233, rel=1e-4)


def test_central_spin_sampling_is_reproducible() -> None:
    """Test that the seed fixes the bath and polarization biases it upwards."""
    a = central_spin_modes(20, 1.0, 0.0, seed=7)
    b = central_spin_modes(20, 1.0, 0.0, seed=7)
    c = central_spin_modes(20, 1.0, 0.0, seed=8)
    assert all(np.allclose(x.initial_state, y.initial_state) for x, y in zip(a, b, strict=True))
    assert not all(np.allclose(x.initial_state, y.initial_state) for x, y in zip(a, c, strict=True))

    def mean_sz(modes: list[ModeSpec]) -> float:
        return float(np.mean([np.trace(SPIN_Z @ m.initial_state).real for m in modes]))

    polarized = central_spin_modes(400, 1.0, 10.0, seed=1)
    unpolarized = central_spin_modes(400, 1.0, 0.0, seed=1)
    assert mean_sz(polarized) > mean_sz(unpolarized) + 0.2
    up = central_spin_modes(3, 1.0, 0.0, 0, fully_polarized=True)
    assert all(np.allclose(m.initial_state, basis_state(0, 2)) for m in up)


def test_heisenberg_coupling_spectrum() -> None:
    """Test singlet -3J/4 and triplet J/4."""
    energies = np.linalg.eigvalsh(heisenberg_coupling(1.0))
    assert np.allclose(energies, [-0.75, 0.25, 0.25, 0.25])


def test_harmonic_potential_reproduces_boson_ladder() -> None:
    """Test that harmonic bound states give omega a^+ a and a + a^+."""
    config = AnharmonicConfig(potential="harmonic", levels=5, grid_dx=0.001, n_modes=3)
    energies, coupling_matrix = vibrational_levels(config)
    ladder = destroy(5) + create(5)
    assert np.allclose(energies, np.arange(5), atol=1e-5)
    assert np.allclose(coupling_matrix, ladder.real, atol=1e-5)


def test_harmonic_environment_matches_spin_boson_dynamics() -> None:
    """Test the anharmonic machinery with a harmonic well against explicit boson modes."""
    config = AnharmonicConfig(potential="harmonic", levels=4, grid_dx=0.001)
    energies, coupling_matrix = vibrational_levels(config)
    disc = ContinuumDiscretization(
        omegas=np.array([0.8, 1.0, 1.3]), couplings=np.array([0.2, 0.3, 0.15]), density_of_states=1.0
    )
    vibrational = anharmonic_modes(energies, coupling_matrix, disc, temperature=0.5)

    boson = []
    for omega, g in zip(disc.omegas, disc.couplings, strict=True):
        h = omega * kron(np.eye(2), number(4)) + g * kron(EXCITED, destroy(4) + create(4))
        boson.append(
            ModeSpec(
                sys_dim=2,
                mode_dim=4,
                joint_hamiltonian=constant_hamiltonian(h),
                initial_state=thermal_state(omega * number(4), 0.5),
            )
        )
    for a, b in zip(vibrational, boson, strict=True):
        assert np.allclose(a.joint_hamiltonian(0.0), b.joint_hamiltonian(0.0), atol=1e-5)

    system = SystemSpec(dim=2, hamiltonian=constant_hamiltonian(0.5 * PAULI_X))
    n, dt = 50, 0.1
    m_list = free_propagators(system, n, dt)
    rho0 = basis_state(0, 2)
    states_a = contract(absorb_modes(vibrational, 2, n, dt, 1e-10), m_list, rho0)
    states_b = contract(absorb_modes(boson, 2, n, dt, 1e-10), m_list, rho0)
    n_e_a = np.array([rho[1, 1].real for rho in states_a])
    n_e_b = np.array([rho[1, 1].real for rho in states_b])
    assert np.max(np.abs(n_e_a - n_e_b)) < 1e-4


def test_shift_subtraction_centres_coupling() -> None:
    """Test that the shifted coupling has zero mean in the initial mode state."""
    config = AnharmonicConfig(potential="morse", depth=5.0, levels=3)
    energies, coupling_matrix = vibrational_levels(config)
    disc = ContinuumDiscretization(
        omegas=np.array([1.0]), couplings=np.array([0.1]), density_of_states=1.0
    )
    mode = anharmonic_modes(energies, coupling_matrix, disc, 0.5, subtract_shift=True)[0]
    h = mode.joint_hamiltonian(0.0)
    coupling_block = (h[3:, 3:] - h[:3, :3]) / 0.1
    assert np.trace(coupling_block @ mode.initial_state).real == pytest.approx(0.0, abs=1e-12)


def test_anharmonic_rejects_missing_table() -> None:
    """Test the tabulated-potential validation."""
    with pytest.raises(ValidationError):
        AnharmonicConfig(potential="tabulated")


def test_superradiance_model() -> None:
    """Test emitter pair dimensions and golden-rule couplings."""
    bundle = bundle_for({"kind": "superradiance", "detuning": 10.0})
    assert bundle.system.dim == 4
    assert len(bundle.modes) == 12
    assert bundle.modes[0].sys_dim == 4
    assert np.allclose(bundle.initial_state, basis_state(3, 4))
    h_s = np.real(np.diag(bundle.system.hamiltonian(0.0)))
    assert np.allclose(h_s, [0.0, -5.0, 5.0, 0.0])
    assert set(bundle.observables) == {"n_1", "n_2", "n_tot"}


def test_dispersive_schedule_validation() -> None:
    """Test per-mode list lengths."""
    with pytest.raises(ValidationError):
        DispersiveConfig(n_modes=2, pulse_times=[1.0])


def test_dispersive_fock_photon_decays_exponentially() -> None:
    """Test <a^+ a> = exp(-kappa (t - tau)) after a Fock insertion under photon loss."""
    dt, kappa = 0.01, 0.1
    bundle = bundle_for(
        {
            "kind": "dispersive",
            "n_modes": 1,
            "drive": "fock",
            "pulse_times": [0.5],
            "kappa": kappa,
            "boson_cutoff": 2,
        },
        dt=dt,
    )
    mode = bundle.modes[0]
    assert list(mode.insertions) == [50]
    n = 300
    trajectory = propagate_dense(
        bundle.system, bundle.modes, n, dt, bundle.initial_state, keep_joint=True
    )
    photons = mode_expectation(trajectory, 0, number(3)).real
    steps = np.arange(n + 1)
    expected = np.where(steps >= 50, np.exp(-kappa * (steps - 50) * dt), 0.0)
    assert np.max(np.abs(photons - expected)) < 1e-10


def test_dispersive_pulses_are_time_dependent() -> None:
    """Test the pulsed drive produces time-dependent mode Hamiltonians."""
    bundle = bundle_for({"kind": "dispersive", "n_modes": 2})
    assert all(mode.time_dependent for mode in bundle.modes)
    mode = bundle.modes[0]
    assert not np.allclose(mode.joint_hamiltonian(10.0), mode.joint_hamiltonian(0.0))
    assert np.allclose(mode.joint_hamiltonian(10.0), mode.joint_hamiltonian(10.0).conj().T)
