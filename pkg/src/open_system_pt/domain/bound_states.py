from typing import ClassVar

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from open_system_pt.domain.tensors import RealVector


class Grid1D(BaseModel):
    """Equidistant grid x_j = x0 + j * dx, j = 0..n_x-1 (dimensionless)."""

    model_config: ClassVar[ConfigDict] = ConfigDict(frozen=True)

    x0: float = Field(description="First grid point")
    dx: float = Field(gt=0.0, description="Grid spacing")
    n_x: int = Field(ge=3, description="Number of grid points")

    @classmethod
    def from_range(cls, x_min: float, x_max: float, dx: float) -> "Grid1D":
        """Grid covering [x_min, x_max] with spacing dx."""
        return cls(x0=x_min, dx=dx, n_x=int(round((x_max - x_min) / dx)) + 1)

    @property
    def points(self) -> RealVector:
        """Grid coordinates."""
        return self.x0 + self.dx * np.arange(self.n_x, dtype=np.float64)


class BoundStateSet(BaseModel):
    """Lowest eigenpairs of a 1-D Hamiltonian and the position matrix in that basis."""

    model_config: ClassVar[ConfigDict] = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    grid: Grid1D
    energies: RealVector = Field(description="Ascending eigenvalues, shape (m,)")
    wavefunctions: np.ndarray = Field(description="Shape (m, n_x), sum |psi|^2 dx = 1")
    x_elements: np.ndarray = Field(description="<i|x|j>, real symmetric (m, m)")

    @property
    def count(self) -> int:
        """Number of states."""
        return int(self.energies.shape[0])

    @model_validator(mode="after")
    def validate_shapes(self) -> "BoundStateSet":
        """Check shapes and symmetry of the position matrix."""
        m = self.energies.shape[0]
        if self.wavefunctions.shape != (m, self.grid.n_x):
            raise ValueError(f"wavefunctions shape {self.wavefunctions.shape} != ({m}, {self.grid.n_x})")
        if self.x_elements.shape != (m, m):
            raise ValueError(f"x_elements shape {self.x_elements.shape} != ({m}, {m})")
        if not np.allclose(self.x_elements, self.x_elements.T, atol=1e-10):
            raise ValueError("position matrix is not symmetric")
        return self
