import random

import pytest
from hypothesis import HealthCheck, settings

from curvecomplex.fixtures import FIXTURES, curve_pool, surface
from curvecomplex.surface_model import SurfaceSignature

settings.register_profile(
    "repo", deadline=None, max_examples=40, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("repo")

ANCHORED = ["t1", "d4", "d5", "t0b1"]


@pytest.fixture(scope="session")
def pools():
    return {name: curve_pool(sig, random.Random(7)) for name, sig in FIXTURES.items()}


@pytest.fixture(scope="session")
def torus():
    return surface(SurfaceSignature(1, 0, 0))


@pytest.fixture(scope="session")
def genus2():
    return surface(SurfaceSignature(2, 0, 0))


@pytest.fixture(scope="session")
def g2_pair():
    """(a1, a4) on the genus-2 fixture: a1 nonseparating, a4 separating, disjoint."""
    from curvecomplex.stabilizers_actions import self_commensurating_chain

    ch = self_commensurating_chain(SurfaceSignature(2, 0, 0))
    a1 = ch.alpha.components[0]
    a4 = next(c for c in ch.beta.components if c != a1)
    return a1, a4
