import math
from pathlib import Path
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from open_system_pt.domain.spectral import LorentzianDensity


class _ModelBlock(BaseModel):
    model_config = ConfigDict(extra="forbid")


class FreeModelConfig(_ModelBlock):
    kind: Literal["free"] = "free"
    rabi: float = Field(default=1.0, description="Rabi frequency Omega of (Omega/2) sigma_x")
    detuning: float = Field(default=0.0, description="Energy of the excited state")
    decay: float = Field(default=0.0, ge=0.0, description="Lindblad decay rate of |e> -> |g>")
    initial: Literal["ground", "excited"] = "ground"


class ResonantLevelConfig(_ModelBlock):
    kind: Literal["resonant_level"] = "resonant_level"
    n_modes: int = Field(default=2, ge=1, description="Number of environment sites N_E")
    bandwidth: float = Field(default=0.0, ge=0.0, description="Band width omega_BW")
    density_of_states: float | None = Field(
        default=None, gt=0.0, description="If set, bandwidth = n_modes / density_of_states"
    )
    coupling: float = Field(default=1.0, description="Hopping g")
    occupations: list[int] | None = Field(
        default=None, description="0/1 per site; all occupied if unset"
    )
    system_occupied: bool = False

    @model_validator(mode="after")
    def validate_occupations(self) -> "ResonantLevelConfig":
        """One 0/1 occupation per site."""
        if self.occupations is not None:
            if len(self.occupations) != self.n_modes:
                raise ValueError(f"{len(self.occupations)} occupations for {self.n_modes} sites")
            if any(o not in (0, 1) for o in self.occupations):
                raise ValueError("occupations must be 0 or 1")
        return self

    @property
    def band(self) -> float:
        """Effective band width."""
        if self.density_of_states is not None:
            return self.n_modes / self.density_of_states
        return self.bandwidth


class QuantumDotConfig(_ModelBlock):
    kind: Literal["qd_phonon_photon"] = "qd_phonon_photon"
    detuning_mev: float = Field(default=1.5, description="Laser detuning above the exciton (meV)")
    drive: bool = Field(default=True, description="Apply the Gaussian pulse")
    pulse_area: float = Field(default=3.0 * math.pi, description="Pulse area A")
    pulse_center: float = Field(default=7.0, description="Pulse centre t_0 (ps)")
    pulse_fwhm: float = Field(default=5.0, gt=0.0, description="Pulse FWHM (ps)")
    initial: Literal["ground", "exciton"] = "ground"
    phonons: bool = True
    phonon_modes: int = Field(default=100, ge=1)
    phonon_omega_max_mev: float = Field(default=5.0, gt=0.0, description="Phonon cutoff energy (meV)")
    temperature_k: float = Field(default=4.0, ge=0.0, description="Phonon temperature (K)")
    phonon_cutoff: int = Field(default=2, ge=1, description="Maximum phonons per mode")
    photons: Literal["none", "lindblad", "microscopic"] = "lindblad"
    kappa: float = Field(default=0.1, ge=0.0, description="Radiative decay rate (1/ps)")
    photon_modes: int = Field(default=100, ge=1)
    photon_bandwidth: float = Field(default=10.0, gt=0.0, description="Photon band width (1/ps)")
    photon_cutoff: int = Field(default=1, ge=1, description="Maximum photons per mode")
    merge_photon_pt: bool = Field(
        default=False, description="Build phonon and photon tensors separately and merge them"
    )


class CentralSpinConfig(_ModelBlock):
    kind: Literal["central_spin"] = "central_spin"
    n_modes: int = Field(default=10, ge=1, description="Number of bath spins N")
    coupling: float = Field(default=1.0, description="Total coupling J; J_k = J / N")
    polarization: float = Field(default=0.0, ge=0.0, description="Rejection filter strength b")
    fully_polarized: bool = Field(default=False, description="All bath spins up (b = infinity)")


class AnharmonicConfig(_ModelBlock):
    kind: Literal["anharmonic"] = "anharmonic"
    potential: Literal["morse", "harmonic", "tabulated"] = "morse"
    depth: float = Field(default=5.0, gt=0.0, description="Morse parameter Lambda")
    potential_path: Path | None = Field(default=None, description="Two-column table for 'tabulated'")
    levels: int | None = Field(
        default=None, ge=2, description="Levels per mode M; min(5, bound) if unset"
    )
    grid_min: float | None = None
    grid_max: float | None = None
    grid_dx: float | None = Field(default=None, gt=0.0)
    n_modes: int = Field(default=100, ge=1)
    omega_max: float = Field(
        default=7.5, gt=0.0, description="Upper end of the sampled band (units of Omega)"
    )
    spectral_density: LorentzianDensity = Field(
        default_factory=lambda: LorentzianDensity(strength=0.1, width=0.1, center=1.0)
    )
    rabi: float = Field(default=1.0, description="TLS drive Omega")
    temperature: float = Field(default=0.5, ge=0.0, description="k_B T in units of Omega")
    subtract_shift: bool = Field(
        default=False, description="Remove the environment-induced energy shift"
    )

    @model_validator(mode="after")
    def validate_potential(self) -> "AnharmonicConfig":
        """A tabulated potential needs its file."""
        if self.potential == "tabulated" and self.potential_path is None:
            raise ValueError("potential 'tabulated' requires potential_path")
        return self


class SuperradianceConfig(_ModelBlock):
    kind: Literal["superradiance"] = "superradiance"
    detuning: float = Field(default=0.0, description="Emitter detuning delta")
    kappa: float = Field(default=1.0, gt=0.0, description="Single-emitter golden-rule rate")
    n_modes: int = Field(default=12, ge=1)
    bandwidth: float = Field(
        default=24.0, gt=0.0, description="Photon band width centred on the emitters"
    )
    photon_cutoff: int = Field(default=2, ge=1, description="Maximum photons per mode")


class DispersiveConfig(_ModelBlock):
    kind: Literal["dispersive"] = "dispersive"
    coupling: float = Field(default=1.0, gt=0.0, description="Dispersive coupling g")
    omega_over_g: float = Field(default=8.5 * math.pi / 10.0, description="TLS drive Omega / g")
    n_modes: int = Field(default=4, ge=1)
    mode_offset: float = Field(default=10.0, description="omega_k / g = mode_offset + k")
    drive: Literal["pulses", "fock", "none"] = "pulses"
    pulse_times: list[float] | None = Field(default=None, description="g tau_k; 10 k if unset")
    amplitudes: list[float] | None = Field(default=None, description="Pulse areas A_k; 2 if unset")
    pulse_fwhm: float = Field(default=0.2, gt=0.0, description="g tau_FWHM")
    kappa: float = Field(default=0.0, ge=0.0, description="Photon loss rate")
    boson_cutoff: int = Field(default=4, ge=1, description="Maximum photons per mode")

    @model_validator(mode="after")
    def validate_schedule(self) -> "DispersiveConfig":
        """Per-mode lists must have one entry per mode."""
        for name in ("pulse_times", "amplitudes"):
            values = getattr(self, name)
            if values is not None and len(values) != self.n_modes:
                raise ValueError(f"{name} has {len(values)} entries for {self.n_modes} modes")
        return self


ModelConfig = Annotated[
    FreeModelConfig
    | ResonantLevelConfig
    | QuantumDotConfig
    | CentralSpinConfig
    | AnharmonicConfig
    | SuperradianceConfig
    | DispersiveConfig,
    Field(discriminator="kind"),
]


class ObservableSpec(BaseModel):
    """Inline observable: row-major entries as [re, im] pairs."""

    model_config = ConfigDict(extra="forbid")

    name: str
    matrix: list[list[tuple[float, float]]]


class SweepConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dt: list[float] = Field(default_factory=list, description="Time steps to scan")
    epsilon: list[float] = Field(default_factory=list, description="Thresholds to scan")
    n_modes: list[int] = Field(default_factory=list, description="Mode counts to scan")
    reference_epsilon: float | None = Field(default=None, ge=0.0, description="epsilon_min per dt")
    trotter_reference_dt: float | None = Field(default=None, gt=0.0, description="dt_min reference")
    final_time: float | None = Field(default=None, gt=0.0, description="Common end time of all points")
    observable: str | None = Field(default=None, description="Observable compared; first one if unset")

    @model_validator(mode="after")
    def validate_lists(self) -> "SweepConfig":
        """Values must be positive, thresholds non-negative."""
        if any(v <= 0.0 for v in self.dt):
            raise ValueError("sweep time steps must be positive")
        if any(v < 0.0 for v in self.epsilon):
            raise ValueError("sweep thresholds must be non-negative")
        if any(v < 1 for v in self.n_modes):
            raise ValueError("sweep mode counts must be >= 1")
        return self


class SimulationConfig(BaseModel):
    """A single run: model, grid, compression and output."""

    model_config = ConfigDict(extra="forbid")

    model: ModelConfig
    dt: float = Field(gt=0.0)
    n_max: int = Field(ge=1)
    epsilon: float = Field(default=1e-8, ge=0.0)
    observables: list[str | ObservableSpec] = Field(default_factory=list)
    output_path: Path = Path("output/run.csv")
    seed: int = 0
    pt_cache_path: Path | None = None
    method: Literal["process_tensor", "dense"] = "process_tensor"
    merge_final_sweep: bool = Field(
        default=True, description="Forward sweep after the backward sweep when merging mode groups"
    )
    sweep: SweepConfig | None = None

    @property
    def final_time(self) -> float:
        """End of the time grid."""
        return self.dt * self.n_max
