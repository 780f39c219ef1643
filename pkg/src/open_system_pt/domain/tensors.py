from typing import ClassVar

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, model_validator

ComplexMatrix = npt.NDArray[np.complex128]
ComplexVector = npt.NDArray[np.complex128]
RealVector = npt.NDArray[np.float64]

# Rank-4 process tensor site, axes (d_out, d_in, alpha, alpha_tilde):
# d_out/d_in are the bond indices after/before the step, alpha the system Liouville
# index after the environment step and alpha_tilde the one entering it.
QTensor = npt.NDArray[np.complex128]


class SVDResult(BaseModel):
    """Threshold-truncated singular value decomposition u @ diag(s) @ v_dag."""

    model_config: ClassVar[ConfigDict] = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    u: ComplexMatrix = Field(description="Left singular vectors, shape (n, k_eff)")
    singular_values: RealVector = Field(description="Retained singular values, descending")
    v_dag: ComplexMatrix = Field(description="Right singular vectors, shape (k_eff, m)")
    discarded_max: float = Field(default=0.0, ge=0.0, description="Largest discarded value")

    @property
    def k_eff(self) -> int:
        """Retained rank."""
        return int(self.singular_values.shape[0])

    @property
    def relative_discarded(self) -> float:
        """Largest discarded singular value relative to the largest kept one."""
        sigma_1 = float(self.singular_values[0])
        return self.discarded_max / sigma_1 if sigma_1 > 0.0 else 0.0

    @model_validator(mode="after")
    def validate_shapes(self) -> "SVDResult":
        """Check factor shapes agree with the retained rank."""
        k = self.singular_values.shape[0]
        if k < 1:
            raise ValueError("an SVD result keeps at least one singular triplet")
        if self.u.shape[1] != k or self.v_dag.shape[0] != k:
            raise ValueError(
                f"factor shapes u{self.u.shape}, v_dag{self.v_dag.shape} do not match k_eff={k}"
            )
        return self
