"""Two proximal emitters radiating into a common photon continuum.

System basis index 2 * s1 + s2 with s = 0 (g) or 1 (e): gg, ge, eg, ee.
"""

import numpy as np

from open_system_pt.domain.mode import ModeSpec
from open_system_pt.domain.simulation import SuperradianceConfig
from open_system_pt.domain.spectral import ContinuumDiscretization
from open_system_pt.domain.system import SystemSpec, constant_hamiltonian
from open_system_pt.domain.tensors import ComplexMatrix
from open_system_pt.environments.base import BaseModelBuilder
from open_system_pt.environments.spectral import golden_rule_band
from open_system_pt.numerics.operators import basis_state, create, destroy, embed, number, projector
from open_system_pt.numerics.tensor_core import kron

EMITTER_DIMS = [2, 2]
LOWERING_1 = embed(projector(0, 1, 2), 0, EMITTER_DIMS)
LOWERING_2 = embed(projector(0, 1, 2), 1, EMITTER_DIMS)
EXCITED_1 = embed(basis_state(1, 2), 0, EMITTER_DIMS)
EXCITED_2 = embed(basis_state(1, 2), 1, EMITTER_DIMS)
BOTH_EXCITED = 3


def superradiance_model(
    delta: float, disc: ContinuumDiscretization, photon_cutoff: int = 2
) -> tuple[SystemSpec, list[ModeSpec]]:
    """
    Emitters with H_S = (delta/2)(|e1><e1| - |e2><e2|), each photon mode coupling
    to the symmetric dipole sum: omega_k a^+ a + g_k [a^+ (s1 + s2) + h.c.].
    """
    system = SystemSpec(dim=4, hamiltonian=constant_hamiltonian(0.5 * delta * (EXCITED_1 - EXCITED_2)))
    dim = photon_cutoff + 1
    a, a_dag, n_op = destroy(dim), create(dim), number(dim)
    dipole = LOWERING_1 + LOWERING_2
    modes = []
    for k, (omega, g) in enumerate(zip(disc.omegas, disc.couplings, strict=True)):
        h = omega * kron(np.eye(4), n_op) + g * (kron(dipole, a_dag) + kron(dipole.conj().T, a))
        modes.append(
            ModeSpec(
                label=f"photon-{k + 1}",
                sys_dim=4,
                mode_dim=dim,
                joint_hamiltonian=constant_hamiltonian(h),
                initial_state=basis_state(0, dim),
            )
        )
    return system, modes


class SuperradianceBuilder(BaseModelBuilder):
    """Both emitters excited at t = 0."""

    label = "superradiance"
    config: SuperradianceConfig

    def __init__(self, config: SuperradianceConfig, dt: float, seed: int = 0) -> None:
        super().__init__(config, dt, seed)
        band = golden_rule_band(config.kappa, 0.0, config.bandwidth, config.n_modes)
        self._system, self._modes = superradiance_model(config.detuning, band, config.photon_cutoff)

    def build_system(self) -> SystemSpec:
        """Detuned emitter pair."""
        return self._system

    def build_modes(self) -> list[ModeSpec]:
        """Photon continuum."""
        return self._modes

    def initial_state(self) -> ComplexMatrix:
        """|ee>."""
        return basis_state(BOTH_EXCITED, 4)

    def observables(self) -> dict[str, ComplexMatrix]:
        """Emitter occupations."""
        return {"n_1": EXCITED_1, "n_2": EXCITED_2, "n_tot": EXCITED_1 + EXCITED_2}
