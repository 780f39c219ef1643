from typing import ClassVar

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from open_system_pt.domain.superoperator import Superoperator
from open_system_pt.config import settings
from open_system_pt.domain.system import Dissipator, HamiltonianFn, hermiticity_defect
from open_system_pt.domain.tensors import ComplexMatrix

STATE_PSD_TOL = 1e-10
STATE_TRACE_TOL = 1e-12


class ModeSpec(BaseModel):
    """One environment degree of freedom coupled to the system.

    The joint Hamiltonian acts on system (x) mode with the system index outermost,
    i.e. joint basis index = nu * mode_dim + xi.
    """

    model_config: ClassVar[ConfigDict] = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    label: str = Field(default="", description="Human-readable mode name for logs")
    sys_dim: int = Field(ge=1, description="System Hilbert dimension N_S")
    mode_dim: int = Field(ge=1, description="Local mode Hilbert dimension M")
    joint_hamiltonian: HamiltonianFn = Field(description="t -> Hermitian (N_S*M) x (N_S*M) matrix")
    mode_dissipators: list[Dissipator] = Field(
        default_factory=list, description="Lindblad terms acting on the mode alone (M x M)"
    )
    initial_state: ComplexMatrix = Field(description="Initial M x M mode density matrix")
    insertions: dict[int, Superoperator] = Field(
        default_factory=dict, description="Step index l -> map on the mode applied after step l"
    )
    time_dependent: bool = Field(default=False, description="Whether the joint H depends on time")

    @property
    def joint_dim(self) -> int:
        """Hilbert dimension of system (x) mode."""
        return self.sys_dim * self.mode_dim

    @model_validator(mode="after")
    def validate_initial_state(self) -> "ModeSpec":
        """Check the initial state is a density matrix."""
        rho = self.initial_state
        if rho.shape != (self.mode_dim, self.mode_dim):
            raise ValueError(f"initial state shape {rho.shape} != ({self.mode_dim}, {self.mode_dim})")
        if hermiticity_defect(rho) > STATE_PSD_TOL:
            raise ValueError("initial mode state is not Hermitian")
        if float(np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)))) < -STATE_PSD_TOL:
            raise ValueError("initial mode state is not positive semidefinite")
        if abs(complex(np.trace(rho)) - 1.0) > STATE_TRACE_TOL:
            raise ValueError(f"initial mode state has trace {complex(np.trace(rho))}, expected 1")
        return self

    @model_validator(mode="after")
    def validate_operators(self) -> "ModeSpec":
        """Check the joint Hamiltonian, dissipators and insertions against the dimensions."""
        h = np.asarray(self.joint_hamiltonian(0.0))
        if h.shape != (self.joint_dim, self.joint_dim):
            raise ValueError(f"joint Hamiltonian shape {h.shape} does not match {self.joint_dim}")
        tol = settings.numerics.hermiticity_tol * max(1.0, float(np.max(np.abs(h))))
        if hermiticity_defect(h) > tol:
            raise ValueError(f"joint Hamiltonian of mode '{self.label}' is not Hermitian")
        for dissipator in self.mode_dissipators:
            if dissipator.operator.shape != (self.mode_dim, self.mode_dim):
                raise ValueError(f"mode dissipator shape {dissipator.operator.shape} is not M x M")
        for step, insertion in self.insertions.items():
            if step < 1:
                raise ValueError(f"insertion step {step} must be >= 1")
            if insertion.dim != self.mode_dim**2:
                raise ValueError(f"insertion at step {step} has dim {insertion.dim} != M^2")
        return self
