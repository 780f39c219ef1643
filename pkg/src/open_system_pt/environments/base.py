from abc import ABC, abstractmethod
from typing import Any

from open_system_pt.domain.bundle import ModelBundle
from open_system_pt.domain.mode import ModeSpec
from open_system_pt.domain.system import SystemSpec
from open_system_pt.domain.tensors import ComplexMatrix
from open_system_pt.utils.logger_util import setup_logging

logger = setup_logging()


class BaseModelBuilder(ABC):
    """Abstract base class turning a model configuration into a ModelBundle."""

    label: str = "model"

    def __init__(self, config: Any, dt: float, seed: int = 0) -> None:
        self.config = config
        self.dt = dt
        self.seed = seed

    def build(self) -> ModelBundle:
        """Build system, modes, default initial state and observables."""
        system = self.build_system()
        modes = self.build_modes()
        logger.info(
            f"Built {self.label} model: system dim {system.dim}, {len(modes)} modes"
            + (f" of dim {modes[0].mode_dim}" if modes else "")
        )
        return ModelBundle(
            label=self.label,
            system=system,
            modes=modes,
            initial_state=self.initial_state(),
            observables=self.observables(),
            mode_groups=self.mode_groups(),
        )

    @abstractmethod
    def build_system(self) -> SystemSpec:
        """Free system with its Markovian terms."""
        pass

    def build_modes(self) -> list[ModeSpec]:
        """Environment modes in absorption order; none by default."""
        return []

    @abstractmethod
    def initial_state(self) -> ComplexMatrix:
        """Default initial system state."""
        pass

    def observables(self) -> dict[str, ComplexMatrix]:
        """Named system observables of the model."""
        return {}

    def mode_groups(self) -> list[int]:
        """Sizes of mode groups with separate process tensors; one chain by default."""
        return []
