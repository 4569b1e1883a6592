import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_well_conditioned(rng, n, det_floor=1e-3):
    """Entries uniform in [-2, 2], rejecting matrices with |det| below the floor."""
    while True:
        g = rng.uniform(-2.0, 2.0, size=(n, n))
        if abs(np.linalg.det(g)) >= det_floor:
            return g


def random_orthogonal(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.where(np.diagonal(r) < 0, -1.0, 1.0)


def random_lower_triangular(rng, n, *, positive=False):
    b = np.tril(rng.uniform(-2.0, 2.0, size=(n, n)))
    diag = rng.uniform(0.3, 2.0, size=n)
    if not positive:
        diag = diag * rng.choice([-1.0, 1.0], size=n)
    np.fill_diagonal(b, diag)
    return b
