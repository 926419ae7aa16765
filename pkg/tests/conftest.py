import pytest

from orbitcheck import catalog


def _space(entry_id):
    return catalog.catalog_instantiate(entry_id, seed=0)


@pytest.fixture(scope="session")
def so5_u2():
    return _space("go-3-k2")


@pytest.fixture(scope="session")
def so8_g2():
    return _space("go-1")


@pytest.fixture(scope="session")
def su3_su2():
    return _space("go-6-m2n1")


@pytest.fixture(scope="session")
def sp2_sp1u1():
    return _space("go-8-n1")


@pytest.fixture(scope="session")
def so9_spin7():
    return _space("go-5")


@pytest.fixture(scope="session")
def sp3_principal():
    return _space("t1-V.10")


@pytest.fixture(scope="session")
def so9_tensor():
    return _space("t1-V.1-m3n3")
