import random

import pytest

from bimodulus.exactmath import QQ, PrimeField


@pytest.fixture
def rng():
    return random.Random(20260814)


@pytest.fixture
def F101():
    return PrimeField(101)


@pytest.fixture
def F5():
    return PrimeField(5)


@pytest.fixture(params=["Q", "F101"])
def any_field(request):
    return QQ if request.param == "Q" else PrimeField(101)
