from typing import ClassVar

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from open_system_pt.domain.tensors import ComplexMatrix, ComplexVector, QTensor


class ProcessTensor(BaseModel):
    """Process tensor in MPO form on an equidistant grid t_l = l * dt.

    ``q[l - 1]`` is the site tensor of step l with axes (d_l, d_{l-1}, alpha, alpha_tilde).
    ``closures[l - 1]`` contracts bond d_l for readout at step l; closures depend on the
    representation, so every operation returning a new tensor leaves them unset.
    """

    model_config: ClassVar[ConfigDict] = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n_steps: int = Field(ge=1, description="Number of time steps n")
    sys_dim: int = Field(ge=1, description="System Hilbert dimension N_S")
    dt: float = Field(gt=0.0, description="Time step")
    q: tuple[QTensor, ...] = Field(description="Site tensors for steps 1..n")
    closures: tuple[ComplexVector, ...] | None = Field(
        default=None, description="Closure vectors for steps 1..n"
    )
    truncation: tuple[float, ...] = Field(
        default=(), description="Largest discarded sigma/sigma_1 seen on bond d_l, l = 1..n"
    )

    @model_validator(mode="after")
    def validate_chain(self) -> "ProcessTensor":
        """Check site count, Liouville axes, trivial boundary bonds and bond agreement."""
        if len(self.q) != self.n_steps:
            raise ValueError(f"expected {self.n_steps} site tensors, got {len(self.q)}")
        n_sys2 = self.sys_dim**2
        for l, site in enumerate(self.q, start=1):
            if site.ndim != 4 or site.shape[2:] != (n_sys2, n_sys2):
                raise ValueError(
                    f"site {l} has shape {site.shape}, expected (d, d', {n_sys2}, {n_sys2})"
                )
        if self.q[0].shape[1] != 1 or self.q[-1].shape[0] != 1:
            raise ValueError("boundary bonds d_0 and d_n must have dimension 1")
        for l in range(1, self.n_steps):
            if self.q[l - 1].shape[0] != self.q[l].shape[1]:
                raise ValueError(
                    f"bond mismatch after step {l}: {self.q[l - 1].shape[0]} != {self.q[l].shape[1]}"
                )
        if self.truncation and len(self.truncation) != self.n_steps:
            raise ValueError("truncation diagnostics must have one entry per step")
        if self.closures is not None:
            if len(self.closures) != self.n_steps:
                raise ValueError("closures must have one entry per step")
            for l, closure in enumerate(self.closures, start=1):
                if closure.shape != (self.q[l - 1].shape[0],):
                    raise ValueError(f"closure {l} has shape {closure.shape}")
            if not np.allclose(self.closures[-1], 1.0):
                raise ValueError("closure of the final step must be the scalar 1")
        return self

    @property
    def bond_dims(self) -> list[int]:
        """Inner dimensions d_0..d_n (d_0 = d_n = 1)."""
        return [1] + [int(site.shape[0]) for site in self.q]

    @property
    def d_max(self) -> int:
        """Largest inner dimension along the chain."""
        return max(self.bond_dims)

    @property
    def max_truncation(self) -> float:
        """Largest relative discarded singular value over all bonds."""
        return max(self.truncation, default=0.0)

    @property
    def times(self) -> list[float]:
        """Grid times t_0..t_n."""
        return [l * self.dt for l in range(self.n_steps + 1)]


class PropagationState(BaseModel):
    """The propagated quantity R_{alpha_l d_l} of the network summation."""

    model_config: ClassVar[ConfigDict] = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    r: ComplexMatrix = Field(description="Shape (N_S^2, d_l)")
    step: int = Field(ge=0, description="Current step l")

    @model_validator(mode="after")
    def validate_initial_bond(self) -> "PropagationState":
        """At l = 0 the bond is trivial."""
        if self.r.ndim != 2:
            raise ValueError(f"R must be a matrix, got shape {self.r.shape}")
        if self.step == 0 and self.r.shape[1] != 1:
            raise ValueError("the initial propagation state has bond dimension 1")
        return self
