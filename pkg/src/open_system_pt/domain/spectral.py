from typing import Annotated, ClassVar, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from open_system_pt.domain.tensors import RealVector


class GaasPhononDensity(BaseModel):
    kind: Literal["gaas_phonon"] = "gaas_phonon"
    mass_density: float = Field(default=5370.0, gt=0.0, description="Mass density (kg/m^3)")
    sound_velocity: float = Field(
        default=5110.0, gt=0.0, description="Longitudinal sound velocity (m/s)"
    )
    d_electron: float = Field(default=7.0, description="Electron deformation potential (eV)")
    d_hole: float = Field(default=-3.5, description="Hole deformation potential (eV)")
    a_electron: float = Field(default=3.0e-9, gt=0.0, description="Electron confinement radius (m)")
    a_hole: float | None = Field(
        default=None, gt=0.0, description="Hole radius (m); a_electron / 1.15 if unset"
    )

    @property
    def hole_radius(self) -> float:
        """Hole radius with the usual a_e / 1.15 default."""
        return self.a_hole if self.a_hole is not None else self.a_electron / 1.15


class LorentzianDensity(BaseModel):
    kind: Literal["lorentzian"] = "lorentzian"
    strength: float = Field(gt=0.0, description="Weight C (energy^2)")
    width: float = Field(gt=0.0, description="Half width gamma (energy)")
    center: float = Field(description="Centre omega_c (energy)")


class FlatDensity(BaseModel):
    kind: Literal["flat"] = "flat"
    height: float = Field(ge=0.0, description="Constant value of J on the band")
    lower: float = Field(description="Lower band edge")
    upper: float = Field(description="Upper band edge")

    @model_validator(mode="after")
    def validate_band(self) -> "FlatDensity":
        """Band edges must be ordered."""
        if self.upper <= self.lower:
            raise ValueError(f"flat band needs upper > lower, got [{self.lower}, {self.upper}]")
        return self


SpectralDensity = Annotated[
    GaasPhononDensity | LorentzianDensity | FlatDensity, Field(discriminator="kind")
]


class ContinuumDiscretization(BaseModel):
    """Equidistant sample of a continuum: mode frequencies and couplings g_k >= 0."""

    model_config: ClassVar[ConfigDict] = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    omegas: RealVector = Field(description="Mode frequencies, ascending")
    couplings: RealVector = Field(description="Couplings g_k")
    density_of_states: float = Field(gt=0.0, description="Modes per unit frequency")

    @property
    def n_modes(self) -> int:
        """Number of sampled modes N_E."""
        return int(self.omegas.shape[0])

    @model_validator(mode="after")
    def validate_samples(self) -> "ContinuumDiscretization":
        """Equal lengths and non-negative couplings."""
        if self.omegas.shape != self.couplings.shape or self.omegas.ndim != 1:
            raise ValueError(f"omegas {self.omegas.shape} and couplings {self.couplings.shape} differ")
        if (self.couplings < 0.0).any():
            raise ValueError("couplings must be non-negative")
        return self
