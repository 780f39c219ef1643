"""Driven two-level system dispersively coupled to externally driven cavity modes.

H_S = (Omega/2) sigma_x, H_k = g a^+ a sigma_z + omega_k a^+ a
      + G_k(t)/2 (a^+ exp(-i omega_k t) + a exp(i omega_k t)),
with sigma_z = |e><e| - |g><g| and basis 0 = g, 1 = e.
"""

from collections.abc import Callable
from typing import Literal

import numpy as np

from open_system_pt.domain.mode import ModeSpec
from open_system_pt.domain.simulation import DispersiveConfig
from open_system_pt.domain.system import Dissipator, HamiltonianFn, SystemSpec, constant_hamiltonian
from open_system_pt.domain.tensors import ComplexMatrix
from open_system_pt.environments.base import BaseModelBuilder
from open_system_pt.environments.quantum_dot import gaussian_envelope
from open_system_pt.exceptions import ArgumentError
from open_system_pt.numerics.operators import PAULI_X, basis_state, create, destroy, number
from open_system_pt.numerics.propagators import fock_insertion
from open_system_pt.numerics.tensor_core import kron
from open_system_pt.utils.logger_util import setup_logging

logger = setup_logging()

EXCITED = basis_state(1, 2)
SIGMA_Z = basis_state(1, 2) - basis_state(0, 2)

DriveMode = Literal["pulses", "fock", "none"]


def driven_mode_hamiltonian(
    coupling: float, omega: float, dim: int, envelope: Callable[[float], float] | None
) -> HamiltonianFn:
    """Joint TLS (x) mode Hamiltonian, sampled at the requested time."""
    a, a_dag, n_op = destroy(dim), create(dim), number(dim)
    static = coupling * kron(SIGMA_Z, n_op) + omega * kron(np.eye(2), n_op)
    if envelope is None:
        return constant_hamiltonian(static)

    def hamiltonian(t: float) -> ComplexMatrix:
        phase = np.exp(-1j * omega * t)
        drive = 0.5 * envelope(t) * (a_dag * phase + a * np.conj(phase))
        return static + kron(np.eye(2), drive)

    return hamiltonian


def dispersive_model(
    omega_g: float,
    mode_freqs: list[float],
    pulse_times: list[float],
    amplitudes: list[float],
    losses: list[float],
    boson_cutoff: int,
    dt: float,
    coupling: float = 1.0,
    drive: DriveMode = "pulses",
    pulse_fwhm: float = 0.2,
) -> tuple[SystemSpec, list[ModeSpec]]:
    """
    TLS and cavity modes, all starting in vacuum.
    Args:
        omega_g: Omega / g.
        mode_freqs: omega_k.
        pulse_times: tau_k of pulse centres or Fock insertions.
        amplitudes: Pulse areas A_k.
        losses: Photon loss rate per mode.
        boson_cutoff: Maximum photons per mode.
        dt: Time step; Fock insertions act after step round(tau_k / dt).
        coupling: g.
        drive: ``pulses`` (Gaussian G_k(t)), ``fock`` (a^+ . a at tau_k) or ``none``.
        pulse_fwhm: FWHM of G_k.
    """
    n = len(mode_freqs)
    if not len(pulse_times) == len(amplitudes) == len(losses) == n:
        raise ArgumentError("mode_freqs, pulse_times, amplitudes and losses must have equal length")
    if boson_cutoff < 1:
        raise ArgumentError(f"boson cutoff must be >= 1, got {boson_cutoff}")
    system = SystemSpec(dim=2, hamiltonian=constant_hamiltonian(0.5 * omega_g * coupling * PAULI_X))
    dim = boson_cutoff + 1
    modes = []
    for k in range(n):
        envelope = None
        if drive == "pulses":
            envelope = gaussian_envelope(amplitudes[k], pulse_times[k], pulse_fwhm)
        losses_k = [Dissipator(operator=destroy(dim), rate=losses[k])] if losses[k] > 0 else []
        insertions = {}
        if drive == "fock":
            step = max(1, int(round(pulse_times[k] / dt)))
            insertions[step] = fock_insertion(dim)
        modes.append(
            ModeSpec(
                label=f"cavity-{k + 1}",
                sys_dim=2,
                mode_dim=dim,
                joint_hamiltonian=driven_mode_hamiltonian(coupling, mode_freqs[k], dim, envelope),
                mode_dissipators=losses_k,
                initial_state=basis_state(0, dim),
                insertions=insertions,
                time_dependent=envelope is not None,
            )
        )
    return system, modes


class DispersiveBuilder(BaseModelBuilder):
    """Multi-mode cavity read out through a continuously driven TLS."""

    label = "dispersive"
    config: DispersiveConfig

    def __init__(self, config: DispersiveConfig, dt: float, seed: int = 0) -> None:
        super().__init__(config, dt, seed)
        g = config.coupling
        n = config.n_modes
        times = config.pulse_times or [10.0 * (k + 1) for k in range(n)]
        self._system, self._modes = dispersive_model(
            omega_g=config.omega_over_g,
            mode_freqs=[g * (config.mode_offset + k + 1) for k in range(n)],
            pulse_times=[t / g for t in times],
            amplitudes=config.amplitudes or [2.0] * n,
            losses=[config.kappa] * n,
            boson_cutoff=config.boson_cutoff,
            dt=dt,
            coupling=g,
            drive=config.drive,
            pulse_fwhm=config.pulse_fwhm / g,
        )

    def build_system(self) -> SystemSpec:
        """Resonantly driven TLS."""
        return self._system

    def build_modes(self) -> list[ModeSpec]:
        """Cavity modes."""
        return self._modes

    def initial_state(self) -> ComplexMatrix:
        """Ground state."""
        return basis_state(0, 2)

    def observables(self) -> dict[str, ComplexMatrix]:
        """Excited-state population."""
        return {"n_e": EXCITED}
