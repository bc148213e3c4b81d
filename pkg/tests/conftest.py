import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def finite_difference_gradient(fun, x, h=1e-5):
    """Central-difference gradient, the reference for every analytic gradient."""
    x = np.asarray(x, dtype=float)
    g = np.zeros_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (fun(x + e) - fun(x - e)) / (2.0 * h)
    return g


def align_column_signs(A, B):
    """Flip columns of B to match the signs of A (for sign-ambiguous factors)."""
    B = B.copy()
    for j in range(B.shape[1]):
        if np.dot(A[:, j], B[:, j]) < 0:
            B[:, j] = -B[:, j]
    return B
