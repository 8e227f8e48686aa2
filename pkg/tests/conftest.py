from fractions import Fraction

import numpy as np
import pytest

from gaudin import ModelSpec


def random_spec(rng, n_min=2, n_max=5, lam_max=4) -> ModelSpec:
    """A random instance: N sites, weights 1..lam_max, distinct rational z."""
    n = int(rng.integers(n_min, n_max + 1))
    weights = tuple(int(rng.integers(1, lam_max + 1)) for _ in range(n))
    zs = []
    while len(zs) < n:
        cand = Fraction(int(rng.integers(-12, 13)), int(rng.integers(1, 7)))
        if cand not in zs:
            zs.append(cand)
    return ModelSpec(weights, tuple(zs))


@pytest.fixture
def rng():
    return np.random.default_rng(20010814)
