import pytest

from painleve_totals import acceptance
from painleve_totals.monodromy import MonodromyData


@pytest.fixture(scope="session")
def hm():
    return acceptance.dense_for(MonodromyData.hastings_mcleod(1))


@pytest.fixture(scope="session")
def real_as():
    # s1 = -i/2
    return acceptance.dense_for(MonodromyData.real_as(0.5))


@pytest.fixture(scope="session")
def pv():
    return acceptance._pv()
