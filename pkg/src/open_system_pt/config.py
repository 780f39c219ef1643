from typing import ClassVar, Literal

from pydantic import BaseModel, Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from open_system_pt.utils.logger_util import setup_logging

logger = setup_logging()


class NumericsSettings(BaseModel):
    bond_cap: int = Field(
        default=4096, ge=1, description="Largest inner dimension allowed before compression"
    )
    max_mode_liouville_dim: int = Field(
        default=4096, ge=1, description="Largest joint system-mode Liouville dimension"
    )
    max_dense_liouville_dim: int = Field(
        default=2**20, ge=1, description="Largest Liouville dimension of a dense reference run"
    )
    hermiticity_tol: float = Field(
        default=1e-12, gt=0.0, description="Relative Hermiticity tolerance of Hamiltonians"
    )
    trace_tol: float = Field(
        default=1e-10, gt=0.0, description="Largest trace change of a step propagator"
    )
    trace_drift_warning: float = Field(
        default=5e-7, ge=0.0, description="Run trace drift above which a warning is logged"
    )
    hermiticity_drift_warning: float = Field(
        default=1e-7, ge=0.0, description="Run Hermiticity defect above which a warning is logged"
    )
    svd_driver: Literal["gesdd", "gesvd"] = Field(
        default="gesdd", description="LAPACK driver tried first for singular value decompositions"
    )


class OutputSettings(BaseModel):
    csv_significant_digits: int = Field(
        default=17, ge=1, le=17, description="Significant digits written to CSV files"
    )
    pt_cache_precision: Literal["complex128", "complex64"] = Field(
        default="complex128", description="Payload precision of process tensor snapshots"
    )


class SweepSettings(BaseModel):
    max_workers: int = Field(default=4, ge=1, description="Concurrent convergence sweep points")


class Settings(BaseSettings):
    """
    Process-level settings loaded from environment variables.
    Use .env file or environment variables (e.g. NUMERICS__BOND_CAP=2048) to configure.
    """

    model_config: ClassVar[SettingsConfigDict] = SettingsConfigDict(
        env_file=[".env"],
        env_file_encoding="utf-8",
        extra="ignore",
        env_nested_delimiter="__",
        case_sensitive=False,
        frozen=True,
    )

    numerics: NumericsSettings = NumericsSettings()
    output: OutputSettings = OutputSettings()
    sweep: SweepSettings = SweepSettings()

    @model_validator(mode="after")
    def validate_cache_precision(self) -> "Settings":
        """Warn when snapshots are stored below double precision."""
        if self.output.pt_cache_precision == "complex64":
            logger.warning(
                "Process tensor snapshots are written as complex64; "
                "reloaded tensors carry ~1e-7 relative rounding."
            )
        return self

    @model_validator(mode="after")
    def validate_caps(self) -> "Settings":
        """Warn when the mode Liouville cap exceeds the bond cap."""
        if self.numerics.max_mode_liouville_dim > self.numerics.bond_cap:
            logger.warning(
                f"max_mode_liouville_dim={self.numerics.max_mode_liouville_dim} exceeds "
                f"bond_cap={self.numerics.bond_cap}; single-mode tensors may hit the bond cap."
            )
        return self


settings = Settings()
