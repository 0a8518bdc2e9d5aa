import os

import pytest

from orbit_atlas import mat, orbit_of, partition_all, ring_from_string


def pytest_collection_modifyitems(config, items):
    if os.environ.get("ORBIT_ATLAS_STRETCH") == "1":
        return
    skip = pytest.mark.skip(reason="stretch run; enable with ORBIT_ATLAS_STRETCH=1")
    for item in items:
        if "stretch" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def warm_kernels():
    """Compile the default-backend kernels on a tiny ring so that timed
    acceptance runs measure enumeration work, not JIT compilation."""
    gf3 = ring_from_string("GF(3)")
    partition_all(gf3)
    orbit_of(mat(gf3, 0, 1, 0, 0))
    partition_all(gf3, threads=2)
    return True


@pytest.fixture(scope="session")
def z9():
    return ring_from_string("Z/3^2")


@pytest.fixture(scope="session")
def gf3():
    return ring_from_string("GF(3)")


@pytest.fixture(scope="session")
def gf5():
    return ring_from_string("GF(5)")


@pytest.fixture(scope="session")
def gf9():
    return ring_from_string("GF(9)")


@pytest.fixture(scope="session")
def z27():
    return ring_from_string("Z/3^3")


@pytest.fixture(scope="session")
def z25():
    return ring_from_string("Z/5^2")


@pytest.fixture(scope="session")
def t9():
    return ring_from_string("GF(3)[u]/u^2")


@pytest.fixture(scope="session")
def part_z9(z9, warm_kernels):
    return partition_all(z9)


@pytest.fixture(scope="session")
def part_z27(z27, warm_kernels):
    return partition_all(z27)


@pytest.fixture(scope="session")
def part_z25(z25, warm_kernels):
    return partition_all(z25)


@pytest.fixture(scope="session")
def part_t9(t9, warm_kernels):
    return partition_all(t9)
