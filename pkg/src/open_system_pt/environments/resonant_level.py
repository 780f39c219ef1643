"""Single site hopping to a band of independent sites.

Sites are local two-level systems (0 = empty, 1 = occupied) without
Jordan-Wigner strings between environment sites.
"""

import numpy as np

from open_system_pt.domain.mode import ModeSpec
from open_system_pt.domain.simulation import ResonantLevelConfig
from open_system_pt.domain.system import SystemSpec, constant_hamiltonian
from open_system_pt.domain.tensors import ComplexMatrix
from open_system_pt.environments.base import BaseModelBuilder
from open_system_pt.environments.spectral import sample_points
from open_system_pt.numerics.operators import basis_state, projector
from open_system_pt.numerics.tensor_core import kron

LOWER = projector(0, 1, 2)
OCCUPIED = basis_state(1, 2)


def band_frequencies(n_e: int, bandwidth: float) -> np.ndarray:
    """Cell midpoints of [-bandwidth/2, bandwidth/2]; all zero for a flat band of width 0."""
    if bandwidth == 0.0:
        return np.zeros(n_e)
    omegas, _ = sample_points(-0.5 * bandwidth, 0.5 * bandwidth, n_e)
    return omegas


def resonant_level_modes(
    n_e: int, bandwidth: float, coupling: float, initial_occupations: list[int] | None = None
) -> list[ModeSpec]:
    """
    Sites with H_k = omega_k c_k^+ c_k + g (c_k^+ c_S + c_S^+ c_k), ascending omega_k.
    Args:
        n_e: Number of sites.
        bandwidth: Width of the band the frequencies are sampled from.
        coupling: Hopping g, equal for all sites.
        initial_occupations: 0/1 per site; all occupied if None.
    Returns:
        list[ModeSpec]: One two-level mode per site.
    """
    occupations = initial_occupations if initial_occupations is not None else [1] * n_e
    hop = coupling * (kron(LOWER, LOWER.conj().T) + kron(LOWER.conj().T, LOWER))
    modes = []
    omegas = band_frequencies(n_e, bandwidth)
    for k, (omega, occupied) in enumerate(zip(omegas, occupations, strict=True)):
        h = omega * kron(np.eye(2), OCCUPIED) + hop
        modes.append(
            ModeSpec(
                label=f"site-{k + 1}",
                sys_dim=2,
                mode_dim=2,
                joint_hamiltonian=constant_hamiltonian(h),
                initial_state=basis_state(occupied, 2),
            )
        )
    return modes


class ResonantLevelBuilder(BaseModelBuilder):
    """Resonant-level model with H_S = 0."""

    label = "resonant_level"
    config: ResonantLevelConfig

    def build_system(self) -> SystemSpec:
        """Empty system Hamiltonian."""
        return SystemSpec(dim=2, hamiltonian=constant_hamiltonian(np.zeros((2, 2))))

    def build_modes(self) -> list[ModeSpec]:
        """Band sites."""
        return resonant_level_modes(
            self.config.n_modes, self.config.band, self.config.coupling, self.config.occupations
        )

    def initial_state(self) -> ComplexMatrix:
        """Empty or occupied site."""
        return basis_state(1 if self.config.system_occupied else 0, 2)

    def observables(self) -> dict[str, ComplexMatrix]:
        """Site occupation."""
        return {"n_S": OCCUPIED}
