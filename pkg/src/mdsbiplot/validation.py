"""Input validation helpers shared across the package."""

import numpy as np


def as_matrix(X, name="X", min_rows=1, min_cols=1):
    """Coerce to a 2-D float array and reject NaN/Inf entries."""
    A = np.asarray(X, dtype=float)
    if A.ndim != 2:
        raise ValueError(f"{name} must be a 2-D array, got shape {A.shape}")
    if A.shape[0] < min_rows:
        raise ValueError(f"{name} needs at least {min_rows} row(s), got {A.shape[0]}")
    if A.shape[1] < min_cols:
        raise ValueError(f"{name} needs at least {min_cols} column(s), got {A.shape[1]}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} contains non-finite entries")
    return A


def as_vector(x, name="x"):
    """Coerce to a 1-D float array and reject NaN/Inf entries."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"{name} must be a 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains non-finite entries")
    return v


def check_square_symmetric(D, name="D", tol=1e-10, zero_diagonal=False, nonnegative=False):
    """Validate a square symmetric matrix, optionally with zero diagonal and no negatives.

    Symmetry is judged relative to the largest absolute entry.
    """
    D = as_matrix(D, name=name)
    n, m = D.shape
    if n != m:
        raise ValueError(f"{name} must be square, got shape {D.shape}")
    scale = max(1.0, float(np.max(np.abs(D))))
    if np.max(np.abs(D - D.T)) > tol * scale:
        raise ValueError(f"{name} must be symmetric (tolerance {tol})")
    if nonnegative and np.any(D < 0):
        raise ValueError(f"{name} must not contain negative entries")
    if zero_diagonal and np.any(np.abs(np.diag(D)) > tol * scale):
        raise ValueError(f"{name} must have a zero diagonal")
    return D
