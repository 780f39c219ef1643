"""Central spin-1/2 coupled to a bath of spins by a Heisenberg interaction (J / N) S . s_k."""

import numpy as np

from open_system_pt.domain.mode import ModeSpec
from open_system_pt.domain.simulation import CentralSpinConfig
from open_system_pt.domain.system import SystemSpec, constant_hamiltonian
from open_system_pt.domain.tensors import ComplexMatrix
from open_system_pt.environments.base import BaseModelBuilder
from open_system_pt.exceptions import ArgumentError
from open_system_pt.numerics.operators import SPIN_X, SPIN_Y, SPIN_Z, basis_state, pure_state
from open_system_pt.numerics.tensor_core import kron
from open_system_pt.utils.logger_util import setup_logging

logger = setup_logging()

SPIN_UP = basis_state(0, 2)


def heisenberg_coupling(strength: float) -> ComplexMatrix:
    """strength * S . s on central spin (x) bath spin."""
    return strength * sum(kron(op, op) for op in (SPIN_X, SPIN_Y, SPIN_Z))


def sample_bath_states(n: int, polarization: float, rng: np.random.Generator) -> list[np.ndarray]:
    """
    Pure spin states drawn isotropically (two complex Gaussian components, normalized)
    and kept with probability exp[b (s_z - 1/2)].
    """
    states: list[np.ndarray] = []
    drawn = 0
    while len(states) < n:
        psi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        psi /= np.linalg.norm(psi)
        drawn += 1
        s_z = 0.5 * (abs(psi[0]) ** 2 - abs(psi[1]) ** 2)
        if rng.random() < np.exp(polarization * (s_z - 0.5)):
            states.append(psi)
    logger.debug(f"Accepted {n} of {drawn} sampled bath spins at b={polarization}")
    return states


def central_spin_modes(
    n: int, coupling: float, polarization: float, seed: int, fully_polarized: bool = False
) -> list[ModeSpec]:
    """
    Bath spins with J_k = J / N.
    Args:
        n: Number of bath spins.
        coupling: Total coupling J.
        polarization: Filter strength b of the rejection sampling.
        seed: Seed of the random generator.
        fully_polarized: All spins up (b = infinity); no sampling.
    Returns:
        list[ModeSpec]: Spin-1/2 modes with pure initial states.
    """
    if n < 1:
        raise ArgumentError(f"central spin bath needs n >= 1 spins, got {n}")
    h = constant_hamiltonian(heisenberg_coupling(coupling / n))
    if fully_polarized:
        initial = [SPIN_UP] * n
    else:
        rng = np.random.default_rng(seed)
        initial = [pure_state(psi) for psi in sample_bath_states(n, polarization, rng)]
    return [
        ModeSpec(label=f"spin-{k + 1}", sys_dim=2, mode_dim=2, joint_hamiltonian=h, initial_state=rho)
        for k, rho in enumerate(initial)
    ]


class CentralSpinBuilder(BaseModelBuilder):
    """Central spin with H_S = 0 starting along +x."""

    label = "central_spin"
    config: CentralSpinConfig

    def build_system(self) -> SystemSpec:
        """No free Hamiltonian."""
        return SystemSpec(dim=2, hamiltonian=constant_hamiltonian(np.zeros((2, 2))))

    def build_modes(self) -> list[ModeSpec]:
        """Bath spins."""
        return central_spin_modes(
            self.config.n_modes,
            self.config.coupling,
            self.config.polarization,
            self.seed,
            self.config.fully_polarized,
        )

    def initial_state(self) -> ComplexMatrix:
        """Eigenstate of S_x with eigenvalue +1/2."""
        return pure_state(np.array([1.0, 1.0]))

    def observables(self) -> dict[str, ComplexMatrix]:
        """Spin components."""
        return {"S_x": SPIN_X, "S_y": SPIN_Y, "S_z": SPIN_Z}
