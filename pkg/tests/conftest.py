import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_bloch(rng, n=None, radius=1.0):
    """Uniform random points inside a ball (or on its surface with radius=None)."""
    shape = (3,) if n is None else (n, 3)
    v = rng.normal(size=shape)
    v /= np.linalg.norm(v, axis=-1, keepdims=True)
    if radius is None:
        return v
    r = radius * rng.uniform(size=shape[:-1] + (1,)) ** (1 / 3)
    return v * (r if n is not None else r[0])
