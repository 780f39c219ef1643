"""Test configuration and fixtures."""

import pytest

from open_system_pt.domain.mode import ModeSpec
from open_system_pt.domain.system import SystemSpec
from open_system_pt.domain.tensors import ComplexMatrix
from open_system_pt.environments.free import driven_two_level
from open_system_pt.environments.resonant_level import resonant_level_modes
from open_system_pt.numerics.operators import projector
from tests.helpers import jaynes_cummings_mode


@pytest.fixture
def rabi_system() -> SystemSpec:
    """Create a resonantly driven two-level system with unit Rabi frequency."""
    return driven_two_level(1.0)


@pytest.fixture
def detuned_lossy_system() -> SystemSpec:
    """Create a driven, detuned two-level system with spontaneous decay."""
    return driven_two_level(0.8, detuning=0.3, decay=0.1)


@pytest.fixture
def jc_mode() -> ModeSpec:
    """Create a unitary boson mode in a thermal state."""
    return jaynes_cummings_mode()


@pytest.fixture
def lossy_jc_mode() -> ModeSpec:
    """Create a boson mode with photon loss."""
    return jaynes_cummings_mode(coupling=0.4, omega=-0.2, loss=0.3)


@pytest.fixture
def resonant_pair() -> list[ModeSpec]:
    """Create two occupied degenerate sites with unit hopping."""
    return resonant_level_modes(2, 0.0, 1.0, None)


@pytest.fixture
def ground_state() -> ComplexMatrix:
    """Return the two-level ground state."""
    return projector(0, 0, 2)
