import random

import pytest
from hypothesis import HealthCheck, settings

from steenrod_fp.poly import Polynomial

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


def random_poly(rng: random.Random, p: int, nvars: int, degree: int, terms: int = 3) -> Polynomial:
    """A random homogeneous polynomial of the given degree."""
    out = {}
    for _ in range(terms):
        exps = [0] * nvars
        for _ in range(degree):
            exps[rng.randrange(nvars)] += 1
        out[tuple(exps)] = rng.randrange(1, p)
    return Polynomial(p, nvars, out)


@pytest.fixture
def rng():
    return random.Random(20240611)
