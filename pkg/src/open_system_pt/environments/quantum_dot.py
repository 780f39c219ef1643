"""Quantum dot driven by a detuned Gaussian pulse, coupled to GaAs phonons and photons.

Units: time in ps, frequencies in 1/ps. Basis 0 = |G>, 1 = |X>, in the rotating
frame of the laser so the exciton sits at -delta.
"""

from collections.abc import Callable

import numpy as np

from open_system_pt.domain.mode import ModeSpec
from open_system_pt.domain.simulation import QuantumDotConfig
from open_system_pt.domain.spectral import GaasPhononDensity
from open_system_pt.domain.system import Dissipator, HamiltonianFn, SystemSpec, constant_hamiltonian
from open_system_pt.domain.tensors import ComplexMatrix
from open_system_pt.environments.base import BaseModelBuilder
from open_system_pt.environments.spectral import (
    discretize,
    golden_rule_band,
    kelvin_to_inverse_ps,
    mev_to_inverse_ps,
)
from open_system_pt.numerics.operators import PAULI_X, basis_state, create, destroy, number, projector
from open_system_pt.numerics.propagators import thermal_state
from open_system_pt.numerics.tensor_core import kron
from open_system_pt.utils.logger_util import setup_logging

logger = setup_logging()

GROUND, EXCITON = 0, 1
EXCITON_PROJECTOR = basis_state(EXCITON, 2)
DOT_LOWERING = projector(GROUND, EXCITON, 2)


def gaussian_envelope(area: float, center: float, fwhm: float) -> Callable[[float], float]:
    """Omega(t) = A / (sqrt(2 pi) sigma) exp(-(t - t0)^2 / (2 sigma^2)), sigma = fwhm / 2.3548."""
    sigma = fwhm / (2.0 * np.sqrt(2.0 * np.log(2.0)))

    def envelope(t: float) -> float:
        norm = area / (np.sqrt(2.0 * np.pi) * sigma)
        return norm * float(np.exp(-((t - center) ** 2) / (2.0 * sigma**2)))

    return envelope


def pulsed_dot_hamiltonian(delta: float, area: float, center: float, fwhm: float) -> HamiltonianFn:
    """H_S(t) = -delta |X><X| + Omega(t)/2 (|X><G| + |G><X|)."""
    envelope = gaussian_envelope(area, center, fwhm)
    static = -delta * EXCITON_PROJECTOR

    def hamiltonian(t: float) -> ComplexMatrix:
        return static + 0.5 * envelope(t) * PAULI_X

    return hamiltonian


def phonon_modes(
    n_e: int, omega_max: float, temperature: float, cutoff: int, density: GaasPhononDensity
) -> list[ModeSpec]:
    """
    Pure-dephasing phonon modes omega_q b^+ b + gamma_q (b + b^+) |X><X| with
    omega_q = q omega_max / n_e, q = 0..n_e-1, in thermal equilibrium at k_B T = ``temperature``.
    """
    disc = discretize(density, 0.0, omega_max, n_e, rule="endpoint")
    dim = cutoff + 1
    b, b_dag, n_op = destroy(dim), create(dim), number(dim)
    modes = []
    for q, (omega, gamma) in enumerate(zip(disc.omegas, disc.couplings, strict=True)):
        h = omega * kron(np.eye(2), n_op) + gamma * kron(EXCITON_PROJECTOR, b + b_dag)
        modes.append(
            ModeSpec(
                label=f"phonon-{q}",
                sys_dim=2,
                mode_dim=dim,
                joint_hamiltonian=constant_hamiltonian(h),
                initial_state=thermal_state(omega * n_op, temperature),
            )
        )
    return modes


def photon_modes(n_e: int, center: float, bandwidth: float, kappa: float, cutoff: int) -> list[ModeSpec]:
    """Jaynes-Cummings modes of a flat band whose golden-rule rate is kappa, all in vacuum."""
    band = golden_rule_band(kappa, center, bandwidth, n_e)
    dim = cutoff + 1
    a, a_dag, n_op = destroy(dim), create(dim), number(dim)
    modes = []
    for k, (omega, g) in enumerate(zip(band.omegas, band.couplings, strict=True)):
        h = omega * kron(np.eye(2), n_op) + g * (
            kron(DOT_LOWERING, a_dag) + kron(DOT_LOWERING.conj().T, a)
        )
        modes.append(
            ModeSpec(
                label=f"photon-{k + 1}",
                sys_dim=2,
                mode_dim=dim,
                joint_hamiltonian=constant_hamiltonian(h),
                initial_state=basis_state(0, dim),
            )
        )
    return modes


def qd_phonon_photon_model(
    config: QuantumDotConfig,
) -> tuple[SystemSpec, list[ModeSpec], list[ModeSpec]]:
    """
    System plus phonon and photon mode lists of the quantum-dot example.
    Returns:
        tuple: (system, phonon modes, photon modes); photon modes are empty unless
        ``photons == "microscopic"``, Lindblad decay is folded into the system.
    """
    delta = mev_to_inverse_ps(config.detuning_mev)
    if config.drive:
        hamiltonian = pulsed_dot_hamiltonian(
            delta, config.pulse_area, config.pulse_center, config.pulse_fwhm
        )
    else:
        hamiltonian = constant_hamiltonian(-delta * EXCITON_PROJECTOR)
    dissipators = (
        [Dissipator(operator=DOT_LOWERING, rate=config.kappa)] if config.photons == "lindblad" else []
    )
    system = SystemSpec(
        dim=2, hamiltonian=hamiltonian, dissipators=dissipators, time_dependent=config.drive
    )

    phonons: list[ModeSpec] = []
    if config.phonons:
        phonons = phonon_modes(
            config.phonon_modes,
            mev_to_inverse_ps(config.phonon_omega_max_mev),
            kelvin_to_inverse_ps(config.temperature_k),
            config.phonon_cutoff,
            GaasPhononDensity(),
        )
    photons: list[ModeSpec] = []
    if config.photons == "microscopic":
        photons = photon_modes(
            config.photon_modes, -delta, config.photon_bandwidth, config.kappa, config.photon_cutoff
        )
    logger.debug(
        f"QD model: delta={delta:.4f}/ps, {len(phonons)} phonon and {len(photons)} photon modes"
    )
    return system, phonons, photons


class QuantumDotBuilder(BaseModelBuilder):
    """Quantum dot with phonons absorbed before photons."""

    label = "qd_phonon_photon"
    config: QuantumDotConfig

    def __init__(self, config: QuantumDotConfig, dt: float, seed: int = 0) -> None:
        super().__init__(config, dt, seed)
        self._system, self.phonons, self.photons = qd_phonon_photon_model(config)

    def build_system(self) -> SystemSpec:
        """Pulsed dot with optional Lindblad decay."""
        return self._system

    def build_modes(self) -> list[ModeSpec]:
        """Phonon modes followed by photon modes."""
        return self.phonons + self.photons

    def initial_state(self) -> ComplexMatrix:
        """Ground state or occupied exciton."""
        return basis_state(EXCITON if self.config.initial == "exciton" else GROUND, 2)

    def observables(self) -> dict[str, ComplexMatrix]:
        """Exciton occupation."""
        return {"n_X": EXCITON_PROJECTOR}

    def mode_groups(self) -> list[int]:
        """Phonon and photon groups when merging is requested."""
        if self.config.merge_photon_pt and self.phonons and self.photons:
            return [len(self.phonons), len(self.photons)]
        return []
