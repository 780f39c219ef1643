from typing import ClassVar

from pydantic import BaseModel, ConfigDict, Field, model_validator

from open_system_pt.domain.mode import ModeSpec
from open_system_pt.domain.system import SystemSpec
from open_system_pt.domain.tensors import ComplexMatrix


class ModelBundle(BaseModel):
    """Everything a run needs from a model: system, ordered modes, default state, observables."""

    model_config: ClassVar[ConfigDict] = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    label: str = Field(description="Model family")
    system: SystemSpec
    modes: list[ModeSpec] = Field(default_factory=list, description="Modes in absorption order")
    initial_state: ComplexMatrix = Field(description="Default initial system density matrix")
    observables: dict[str, ComplexMatrix] = Field(
        default_factory=dict, description="Named system operators offered by the model"
    )
    mode_groups: list[int] = Field(
        default_factory=list,
        description="Sizes of consecutive mode groups built as separate tensors and merged",
    )

    @model_validator(mode="after")
    def validate_dimensions(self) -> "ModelBundle":
        """Modes, initial state and observables must match the system dimension."""
        n = self.system.dim
        for mode in self.modes:
            if mode.sys_dim != n:
                raise ValueError(
                    f"mode '{mode.label}' expects system dim {mode.sys_dim}, system has {n}"
                )
        if self.initial_state.shape != (n, n):
            raise ValueError(f"initial state shape {self.initial_state.shape} != ({n}, {n})")
        for name, op in self.observables.items():
            if op.shape != (n, n):
                raise ValueError(f"observable '{name}' has shape {op.shape}, expected ({n}, {n})")
        if self.mode_groups and (
            sum(self.mode_groups) != len(self.modes) or min(self.mode_groups) < 1
        ):
            raise ValueError(f"mode groups {self.mode_groups} do not partition {len(self.modes)} modes")
        return self
