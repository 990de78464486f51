import pytest

from src.physics.dissipation import PlateConfig
from src.physics.response import DrudeMetal, OscillatorPair, ThermalState
from src.utils.logger import logger


@pytest.fixture(autouse=True)
def fresh_logger():
    logger.reset_warnings()
    logger.verbose = True
    logger.debug_enabled = False
    yield
    logger.reset_warnings()


@pytest.fixture
def unit_metal() -> DrudeMetal:
    """omega_p = nu = rho = 1, so D = 1 / pi^2."""
    return DrudeMetal(plasma_frequency=1.0, relaxation=1.0, density=1.0)


@pytest.fixture
def cold_plates(unit_metal) -> PlateConfig:
    return PlateConfig.for_metal(unit_metal, 1.0, ThermalState.zero())


@pytest.fixture
def warm_plates(unit_metal) -> PlateConfig:
    return PlateConfig.for_metal(unit_metal, 1.0, ThermalState(1.0))


@pytest.fixture
def resonant_pair() -> OscillatorPair:
    return OscillatorPair(alpha1=1.0, alpha2=1.0, omega1=1.0, omega2=2.0)
