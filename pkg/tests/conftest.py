import pytest

from ringunits import (
    catalog_support_pair,
    make_alpha,
    make_beta,
    make_group_P,
    make_group_S,
    make_nu,
)


@pytest.fixture(scope="session")
def group_p():
    return make_group_P()


@pytest.fixture(scope="session")
def group_s():
    return make_group_S()


@pytest.fixture(scope="session")
def alpha():
    return make_alpha()


@pytest.fixture(scope="session")
def beta():
    return make_beta()


@pytest.fixture(scope="session")
def nu():
    return make_nu()


@pytest.fixture(scope="session")
def supports():
    return catalog_support_pair()
