from typing import ClassVar

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from open_system_pt.domain.tensors import ComplexMatrix


class Superoperator(BaseModel):
    """Dense Liouville-space map acting on row-major vectorized density matrices."""

    model_config: ClassVar[ConfigDict] = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    dim: int = Field(ge=1, description="Liouville dimension D (square of the Hilbert dimension)")
    matrix: ComplexMatrix = Field(description="D x D matrix acting on vec(rho)")

    @model_validator(mode="after")
    def validate_matrix(self) -> "Superoperator":
        """Check the matrix is D x D and D is a perfect square."""
        if self.matrix.shape != (self.dim, self.dim):
            raise ValueError(f"matrix shape {self.matrix.shape} != ({self.dim}, {self.dim})")
        hilbert = int(round(np.sqrt(self.dim)))
        if hilbert * hilbert != self.dim:
            raise ValueError(f"Liouville dimension {self.dim} is not a perfect square")
        return self

    @property
    def hilbert_dim(self) -> int:
        """Hilbert dimension the superoperator acts on."""
        return int(round(np.sqrt(self.dim)))

    def apply(self, rho: ComplexMatrix) -> ComplexMatrix:
        """Apply the map to a density matrix and return the resulting matrix."""
        n = self.hilbert_dim
        return (self.matrix @ np.asarray(rho, dtype=np.complex128).reshape(-1)).reshape(n, n)

    def then(self, other: "Superoperator") -> "Superoperator":
        """Return the map that applies self first and other afterwards."""
        if other.dim != self.dim:
            raise ValueError(f"cannot compose superoperators of dims {self.dim} and {other.dim}")
        return Superoperator(dim=self.dim, matrix=other.matrix @ self.matrix)

    def trace_defect(self) -> float:
        """Max deviation of the left action on the trace functional from the functional."""
        n = self.hilbert_dim
        trace_row = np.eye(n, dtype=np.complex128).reshape(-1)
        return float(np.max(np.abs(trace_row @ self.matrix - trace_row)))
