from pathlib import Path

from pydantic import BaseModel, Field


class RunSummary(BaseModel):
    model: str = Field(description="Model kind")
    method: str = Field(description="process_tensor or dense")
    n_steps: int
    dt: float
    epsilon: float
    d_max: int = Field(default=1, description="Largest inner dimension")
    bond_profile: list[int] = Field(default_factory=list, description="Inner dimensions d_0..d_n")
    max_discarded: float = Field(default=0.0, description="Largest discarded sigma / sigma_1")
    build_seconds: float = Field(default=0.0, description="Wall time of the PT construction")
    contraction_seconds: float = Field(default=0.0, description="Wall time of the contraction")
    max_trace_drift: float = Field(default=0.0, description="max_l |Tr rho(t_l) - 1|")
    max_hermiticity_defect: float = Field(default=0.0)
    pt_cache_hit: bool = False
    csv_path: Path | None = None


class SweepRow(BaseModel):
    dt: float
    epsilon: float
    n_modes: int | None = None
    error: float = Field(description="max_l |O(t_l) - O_ref(t_l)|")
    d_max: int
    wall_time: float


class TrotterRow(BaseModel):
    dt: float
    error: float = Field(description="Final-time deviation from the dt_min reference")
    d_max: int
    wall_time: float
