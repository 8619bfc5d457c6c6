import pytest

from tentlab.arith import Parameter
from tentlab.measure import density_auto
from tentlab.tent import TentMap

GOLDEN = 'poly:"-1,-1,1":interval:"1.6,1.7"'


@pytest.fixture(scope="session")
def golden():
    return TentMap(Parameter.parse(GOLDEN))


@pytest.fixture(scope="session")
def dec162():
    return TentMap(Parameter.parse("1.62"))


@pytest.fixture(scope="session")
def golden_density(golden):
    return density_auto(golden)


@pytest.fixture(scope="session")
def dec162_density(dec162):
    return density_auto(dec162)
