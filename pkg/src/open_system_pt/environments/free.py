from open_system_pt.domain.simulation import FreeModelConfig
from open_system_pt.domain.system import Dissipator, SystemSpec, constant_hamiltonian
from open_system_pt.domain.tensors import ComplexMatrix
from open_system_pt.environments.base import BaseModelBuilder
from open_system_pt.numerics.operators import PAULI_X, basis_state, projector

GROUND, EXCITED = 0, 1


def driven_two_level(rabi: float, detuning: float = 0.0, decay: float = 0.0) -> SystemSpec:
    """H_S = detuning |e><e| + (rabi / 2) sigma_x with optional decay |g><e|."""
    h = detuning * basis_state(EXCITED, 2) + 0.5 * rabi * PAULI_X
    dissipators = [Dissipator(operator=projector(GROUND, EXCITED, 2), rate=decay)] if decay > 0.0 else []
    return SystemSpec(dim=2, hamiltonian=constant_hamiltonian(h), dissipators=dissipators)


class FreeModelBuilder(BaseModelBuilder):
    """Two-level system without environment modes."""

    label = "free"
    config: FreeModelConfig

    def build_system(self) -> SystemSpec:
        """Driven two-level system."""
        return driven_two_level(self.config.rabi, self.config.detuning, self.config.decay)

    def initial_state(self) -> ComplexMatrix:
        """Ground or excited state."""
        return basis_state(EXCITED if self.config.initial == "excited" else GROUND, 2)

    def observables(self) -> dict[str, ComplexMatrix]:
        """Excited-state population."""
        return {"n_e": basis_state(EXCITED, 2)}
