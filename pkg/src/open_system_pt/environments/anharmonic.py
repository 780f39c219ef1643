"""Driven two-level system coupled to a continuum of (an)harmonic vibrational modes.

Mode k: omega_k sum_j E~_j |j><j| + g_k sqrt(2) x~ |e><e|, with E~ and x~ the scaled
bound-state energies and positions of a 1-D potential; E~_0 is set to zero.
"""

from pathlib import Path
from typing import Literal

import numpy as np

from open_system_pt.domain.bound_states import BoundStateSet, Grid1D
from open_system_pt.domain.mode import ModeSpec
from open_system_pt.domain.simulation import AnharmonicConfig
from open_system_pt.domain.spectral import ContinuumDiscretization
from open_system_pt.domain.system import SystemSpec, constant_hamiltonian
from open_system_pt.domain.tensors import ComplexMatrix
from open_system_pt.environments.base import BaseModelBuilder
from open_system_pt.environments.spectral import discretize
from open_system_pt.exceptions import ArgumentError
from open_system_pt.numerics.operators import PAULI_X, basis_state
from open_system_pt.numerics.propagators import thermal_state
from open_system_pt.numerics.solver1d import (
    MORSE_GRID,
    Potential,
    harmonic_potential,
    load_tabulated_potential,
    morse_potential,
    morse_scaled_elements,
    solve_bound_states,
)
from open_system_pt.numerics.tensor_core import kron
from open_system_pt.utils.logger_util import setup_logging

logger = setup_logging()

EXCITED = basis_state(1, 2)
SYMMETRIC_GRID = Grid1D.from_range(-10.0, 10.0, 0.01)
DEFAULT_LEVELS = 5


def morse_bound_count(lam: float) -> int:
    """Number of bound states floor(lam + 1/2) of the Morse potential."""
    return int(np.floor(lam + 0.5))


def _grid(config: AnharmonicConfig, default: Grid1D) -> Grid1D:
    x_min = config.grid_min if config.grid_min is not None else default.x0
    x_max = config.grid_max if config.grid_max is not None else default.points[-1]
    dx = config.grid_dx if config.grid_dx is not None else default.dx
    return Grid1D.from_range(x_min, float(x_max), dx)


def vibrational_levels(config: AnharmonicConfig) -> tuple[np.ndarray, np.ndarray]:
    """Scaled energies (ground at zero) and sqrt(2) x~ for the configured potential."""
    kind: Literal["morse", "harmonic", "tabulated"] = config.potential
    potential: Potential
    lam: float | None = None
    if kind == "morse":
        n_bound = morse_bound_count(config.depth)
        levels = config.levels if config.levels is not None else min(DEFAULT_LEVELS, n_bound)
        if levels > n_bound:
            raise ArgumentError(
                f"Morse potential with depth {config.depth} has {n_bound} bound states, "
                f"{levels} requested"
            )
        potential, grid, lam = morse_potential(config.depth), _grid(config, MORSE_GRID), config.depth
        bound = solve_bound_states(potential, grid, levels, bound_only=True)
    else:
        levels = config.levels if config.levels is not None else DEFAULT_LEVELS
        if kind == "harmonic":
            potential, grid = harmonic_potential(), _grid(config, SYMMETRIC_GRID)
        else:
            potential = load_tabulated_potential(Path(str(config.potential_path)))
            grid = _grid(config, SYMMETRIC_GRID)
        bound = solve_bound_states(potential, grid, levels)
    return scaled_mode_operators(bound, lam)


def scaled_mode_operators(bound: BoundStateSet, lam: float | None) -> tuple[np.ndarray, np.ndarray]:
    """Scaled energies shifted to a zero ground state, and the coupling matrix sqrt(2) x~."""
    energies, x_scaled = morse_scaled_elements(bound, lam)
    return energies - energies[0], np.sqrt(2.0) * x_scaled


def anharmonic_modes(
    energies: np.ndarray,
    coupling_matrix: np.ndarray,
    disc: ContinuumDiscretization,
    temperature: float,
    subtract_shift: bool = False,
) -> list[ModeSpec]:
    """
    Modes omega_k diag(E~) + g_k C |e><e| with C = sqrt(2) x~, thermal at k_B T = ``temperature``.
    With ``subtract_shift`` every mode uses C - Tr(C rho_E) 1, removing the static
    energy shift of |e> caused by the displaced mean position.
    """
    m = energies.shape[0]
    if coupling_matrix.shape != (m, m):
        raise ArgumentError(f"coupling matrix {coupling_matrix.shape} does not match {m} levels")
    level_h = np.diag(energies).astype(np.complex128)
    modes = []
    for k, (omega, g) in enumerate(zip(disc.omegas, disc.couplings, strict=True)):
        rho_e = thermal_state(omega * level_h, temperature)
        c = coupling_matrix.astype(np.complex128)
        if subtract_shift:
            c = c - np.real(np.trace(c @ rho_e)) * np.eye(m)
        h = omega * kron(np.eye(2), level_h) + g * kron(EXCITED, c)
        modes.append(
            ModeSpec(
                label=f"vibration-{k + 1}",
                sys_dim=2,
                mode_dim=m,
                joint_hamiltonian=constant_hamiltonian(h),
                initial_state=rho_e,
            )
        )
    return modes


class AnharmonicBuilder(BaseModelBuilder):
    """TLS with H_S = (Omega/2) sigma_x and a Lorentzian continuum of vibrations."""

    label = "anharmonic"
    config: AnharmonicConfig

    def build_system(self) -> SystemSpec:
        """Driven two-level system."""
        return SystemSpec(dim=2, hamiltonian=constant_hamiltonian(0.5 * self.config.rabi * PAULI_X))

    def build_modes(self) -> list[ModeSpec]:
        """Vibrational modes sampled on [0, omega_max]."""
        energies, coupling_matrix = vibrational_levels(self.config)
        disc = discretize(self.config.spectral_density, 0.0, self.config.omega_max, self.config.n_modes)
        logger.info(f"{self.config.potential} levels E~ = {np.round(energies, 4).tolist()}")
        return anharmonic_modes(
            energies, coupling_matrix, disc, self.config.temperature, self.config.subtract_shift
        )

    def initial_state(self) -> ComplexMatrix:
        """Ground state."""
        return basis_state(0, 2)

    def observables(self) -> dict[str, ComplexMatrix]:
        """Excited-state population."""
        return {"n_e": EXCITED}
