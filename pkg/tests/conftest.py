from functools import lru_cache

import numpy as np
import pytest

from whampdo import presets
from whampdo.distinguished import distinguished_elements

SIGMA_Z = np.diag([1.0, -1.0])
HOPF_PRESETS = ("z2", "s3", "h8")
BICONNECTED = ("z2", "s3", "h8", "lee_yang")


@lru_cache(maxsize=None)
def spec_of(name):
    return presets.preset(name)


@lru_cache(maxsize=None)
def elements_of(name):
    return distinguished_elements(spec_of(name))


@pytest.fixture(params=BICONNECTED)
def any_preset(request):
    return request.param


@pytest.fixture
def z2():
    return spec_of("z2"), elements_of("z2")


@pytest.fixture
def lee_yang():
    return spec_of("lee_yang"), elements_of("lee_yang")


@pytest.fixture
def h8():
    return spec_of("h8"), elements_of("h8")


def random_positive(spec, seed=7):
    rng = np.random.default_rng(seed)
    y = rng.standard_normal(spec.n) + 1j * rng.standard_normal(spec.n)
    return spec.mul(spec.adj(y), y)
