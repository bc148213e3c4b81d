"""Dense real-matrix primitives: centering, scaling, eigh, SVD, double centering.

All routines work on plain 2-D numpy arrays of float64 and never mutate
their inputs. Decompositions are delegated to LAPACK via numpy and then
post-processed so ordering and signs are deterministic.
"""

from typing import NamedTuple

import numpy as np

from .validation import as_matrix, check_square_symmetric


class EigenResult(NamedTuple):
    """Eigenvalues in descending order paired with orthonormal column eigenvectors."""

    values: np.ndarray
    vectors: np.ndarray


class SvdResult(NamedTuple):
    """Thin singular value decomposition X = U diag(s) V'."""

    U: np.ndarray
    singular_values: np.ndarray
    V: np.ndarray


def center_columns(X):
    """Subtract each column mean so every column sums to zero.

    Raises on single-row input, which cannot be meaningfully centered.
    """
    X = as_matrix(X, name="X")
    if X.shape[0] < 2:
        raise ValueError("degenerate: cannot center one observation")
    return X - X.mean(axis=0)


def scale_columns(X, mode="zscore"):
    """Rescale columns by the given mode.

    Parameters
    ----------
    X : (n, p) array
    mode : {"zscore", "unit_interval", "none"}
        "zscore" divides by the sample standard deviation (divisor n-1),
        "unit_interval" maps each column onto [0, 1] exactly, and "none"
        returns the input unchanged.
    """
    X = as_matrix(X, name="X")
    if mode == "none":
        return X.copy()
    if mode == "zscore":
        if X.shape[0] < 2:
            raise ValueError("zscore scaling needs at least two rows")
        sd = X.std(axis=0, ddof=1)
        bad = np.flatnonzero(sd == 0)
        if bad.size:
            raise ValueError(f"column {bad[0]} is constant; cannot scale with mode 'zscore'")
        return X / sd
    if mode == "unit_interval":
        lo = X.min(axis=0)
        hi = X.max(axis=0)
        bad = np.flatnonzero(hi <= lo)
        if bad.size:
            raise ValueError(f"column {bad[0]} is constant; cannot scale with mode 'unit_interval'")
        return (X - lo) / (hi - lo)
    raise ValueError(f"unknown scaling mode '{mode}' (expected zscore, unit_interval or none)")


def _fix_column_signs(V, companion=None):
    """Flip column signs so the largest-magnitude entry of each column is positive.

    Ties pick the first maximal entry. A companion matrix (e.g. U of an SVD)
    gets the same flips so products are preserved.
    """
    V = V.copy()
    companion = None if companion is None else companion.copy()
    for j in range(V.shape[1]):
        pivot = int(np.argmax(np.abs(V[:, j])))
        if V[pivot, j] < 0:
            V[:, j] = -V[:, j]
            if companion is not None:
                companion[:, j] = -companion[:, j]
    return V, companion


def eigh_symmetric(S):
    """Eigendecompose a symmetric matrix, descending eigenvalues, deterministic signs."""
    S = check_square_symmetric(S, name="S", tol=1e-10)
    values, vectors = np.linalg.eigh(S)
    order = np.argsort(values)[::-1]
    values = values[order]
    vectors = vectors[:, order]
    vectors, _ = _fix_column_signs(vectors)
    return EigenResult(values=values, vectors=vectors)


def svd_thin(X):
    """Thin SVD with descending singular values and deterministic signs on V."""
    X = as_matrix(X, name="X")
    U, s, Vh = np.linalg.svd(X, full_matrices=False)
    V, U = _fix_column_signs(Vh.T, companion=U)
    return SvdResult(U=U, singular_values=s, V=V)


def double_center(D2):
    """Apply B = -1/2 (I - 11'/n) D2 (I - 11'/n) to a squared-distance matrix.

    The input must be square, symmetric, nonnegative, with zero diagonal.
    The output is symmetrized so row and column sums vanish exactly to
    rounding.
    """
    D2 = check_square_symmetric(D2, name="D2", zero_diagonal=True, nonnegative=True)
    n = D2.shape[0]
    J = np.eye(n) - np.full((n, n), 1.0 / n)
    B = -0.5 * (J @ D2 @ J)
    return 0.5 * (B + B.T)
