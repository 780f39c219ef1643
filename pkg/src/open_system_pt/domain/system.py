from collections.abc import Callable
from typing import ClassVar

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from open_system_pt.config import settings
from open_system_pt.domain.tensors import ComplexMatrix

HamiltonianFn = Callable[[float], ComplexMatrix]


def hermiticity_defect(h: ComplexMatrix) -> float:
    """Largest absolute entry of h - h^dagger."""
    return float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0


def constant_hamiltonian(h: ComplexMatrix) -> HamiltonianFn:
    """Wrap a fixed matrix as a time-independent Hamiltonian."""
    frozen = np.array(h, dtype=np.complex128)
    frozen.setflags(write=False)

    def hamiltonian(t: float) -> ComplexMatrix:
        return frozen

    return hamiltonian


class Dissipator(BaseModel):
    """Lindblad jump operator with its rate: rate * (O rho O^+ - 1/2 {O^+ O, rho})."""

    model_config: ClassVar[ConfigDict] = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    operator: ComplexMatrix = Field(description="Square jump operator")
    rate: float = Field(ge=0.0, description="Rate (1/time)")

    @model_validator(mode="after")
    def validate_operator(self) -> "Dissipator":
        """Check the jump operator is a square matrix."""
        if self.operator.ndim != 2 or self.operator.shape[0] != self.operator.shape[1]:
            raise ValueError(f"jump operator must be square, got shape {self.operator.shape}")
        return self


class SystemSpec(BaseModel):
    """Free system: Hilbert dimension, H_S(t) with hbar = 1, Markovian dissipators."""

    model_config: ClassVar[ConfigDict] = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    dim: int = Field(ge=1, description="System Hilbert dimension N_S")
    hamiltonian: HamiltonianFn = Field(description="t -> Hermitian N_S x N_S matrix")
    dissipators: list[Dissipator] = Field(default_factory=list, description="Lindblad terms")
    time_dependent: bool = Field(default=False, description="Whether H_S depends on time")

    @model_validator(mode="after")
    def validate_hamiltonian(self) -> "SystemSpec":
        """Sample H_S(0) for shape and Hermiticity; check dissipator shapes."""
        h = np.asarray(self.hamiltonian(0.0))
        if h.shape != (self.dim, self.dim):
            raise ValueError(f"H_S shape {h.shape} does not match dim={self.dim}")
        tol = settings.numerics.hermiticity_tol * max(1.0, float(np.max(np.abs(h))))
        if hermiticity_defect(h) > tol:
            raise ValueError("system Hamiltonian is not Hermitian")
        for dissipator in self.dissipators:
            if dissipator.operator.shape != (self.dim, self.dim):
                raise ValueError(
                    f"dissipator shape {dissipator.operator.shape} does not match dim={self.dim}"
                )
        return self
