import numpy as np
import pytest

from harmonic_census.models.FamilyModels import FamilyParams
from harmonic_census.services.CausticService import CausticService
from harmonic_census.services.CensusService import CensusService
from harmonic_census.services.FamilyService import FamilyService
from harmonic_census.services.TheoremService import TheoremService
from harmonic_census.services.WindingService import WindingService


@pytest.fixture
def family_service() -> FamilyService:
    return FamilyService()


@pytest.fixture
def caustic_service() -> CausticService:
    return CausticService()


@pytest.fixture
def winding_service() -> WindingService:
    return WindingService()


@pytest.fixture
def census_service() -> CensusService:
    return CensusService()


@pytest.fixture(scope="session")
def theorem_service() -> TheoremService:
    return TheoremService()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)


@pytest.fixture
def params_4_3() -> FamilyParams:
    return FamilyParams(n=4, a=3.0)
