import random

import pytest

from congtower.rings import make_ring, factor_rational_prime


@pytest.fixture(scope="session")
def rng():
    return random.Random(20240809)


@pytest.fixture(scope="session")
def all_rings():
    return [make_ring(spec) for spec in ("rational", 1, 2, 3, 7, 11, "cyclotomic-5")]


@pytest.fixture(scope="session")
def gaussian_prime2():
    return factor_rational_prime(make_ring(1), 2)[0]


@pytest.fixture(scope="session")
def zeta5_prime():
    return factor_rational_prime(make_ring("cyclotomic-5"), 5)[0]
