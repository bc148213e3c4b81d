"""Dissimilarity metrics with analytic gradients in the second argument.

Every metric is addressed by a lowercase tag. The registry covers:

    euclidean          ||x - y||_2
    manhattan          sum_c |x_c - y_c|
    squared_euclidean  ||x - y||_2^2
    cosine             1 - x'y / (||x|| ||y||)
    inner_product      x'y
    sqrt_manhattan     (sum_c |x_c - y_c|)^(1/2)
    clark              (sum_c ((x_c - y_c) / (x_c + y_c))^2)^(1/2)

``delta`` and ``grad_delta_y`` are strict about their mathematical domain
(they raise at singular points). The vectorized helpers ``cross`` and
``cross_grad_y`` are what the optimizers use: any distance appearing in a
denominator is clamped below at EPSILON so descent stays finite.
"""

from dataclasses import dataclass

import numpy as np

from .validation import as_matrix, as_vector

# Floor applied to distances used as denominators inside optimizers.
EPSILON = 1e-9


@dataclass(frozen=True)
class DissimilarityKind:
    tag: str
    euclidean_embeddable: bool
    requires_nonnegative_inputs: bool


KINDS = {
    k.tag: k
    for k in (
        DissimilarityKind("euclidean", True, False),
        DissimilarityKind("manhattan", False, False),
        DissimilarityKind("squared_euclidean", False, False),
        DissimilarityKind("cosine", False, False),
        DissimilarityKind("inner_product", False, False),
        DissimilarityKind("sqrt_manhattan", True, False),
        DissimilarityKind("clark", True, True),
    )
}


def get_kind(tag):
    """Look up a metric tag, raising with the list of valid tags on a miss."""
    if isinstance(tag, DissimilarityKind):
        return tag
    try:
        return KINDS[tag]
    except KeyError:
        raise ValueError(
            f"unknown dissimilarity '{tag}' (expected one of {sorted(KINDS)})"
        ) from None


def _check_pair(x, y):
    x = as_vector(x, name="x")
    y = as_vector(y, name="y")
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: x has {x.size} entries, y has {y.size}")
    return x, y


def delta(kind, x, y):
    """Dissimilarity between two vectors under the named metric."""
    tag = get_kind(kind).tag
    x, y = _check_pair(x, y)
    if tag == "euclidean":
        return float(np.sqrt(np.sum((x - y) ** 2)))
    if tag == "manhattan":
        return float(np.sum(np.abs(x - y)))
    if tag == "squared_euclidean":
        return float(np.sum((x - y) ** 2))
    if tag == "inner_product":
        return float(x @ y)
    if tag == "cosine":
        nx = np.sqrt(x @ x)
        ny = np.sqrt(y @ y)
        if nx == 0.0 or ny == 0.0:
            raise ValueError("cosine dissimilarity is undefined for zero vectors")
        return float(1.0 - (x @ y) / (nx * ny))
    if tag == "sqrt_manhattan":
        return float(np.sqrt(np.sum(np.abs(x - y))))
    if tag == "clark":
        s = x + y
        if np.any(s <= 0):
            raise ValueError("clark distance needs strictly positive coordinate sums")
        return float(np.sqrt(np.sum(((x - y) / s) ** 2)))
    raise AssertionError(tag)


def grad_delta_y(kind, x, y):
    """Gradient of delta(kind, x, y) with respect to y.

    Raises at points where the gradient is genuinely undefined (coincident
    points for the euclidean family). At manhattan kinks the subgradient
    sign(y - x) with sign(0) = 0 is returned.
    """
    tag = get_kind(kind).tag
    x, y = _check_pair(x, y)
    d = y - x
    if tag == "squared_euclidean":
        return 2.0 * d
    if tag == "inner_product":
        return x.copy()
    if tag == "manhattan":
        return np.sign(d)
    if tag == "euclidean":
        r = np.sqrt(d @ d)
        if r == 0.0:
            raise ValueError("gradient undefined at coincident points")
        return d / r
    if tag == "sqrt_manhattan":
        r = np.sqrt(np.sum(np.abs(d)))
        if r == 0.0:
            raise ValueError("gradient undefined at coincident points")
        return np.sign(d) / (2.0 * r)
    if tag == "cosine":
        nx = np.sqrt(x @ x)
        ny = np.sqrt(y @ y)
        if nx == 0.0 or ny == 0.0:
            raise ValueError("cosine dissimilarity is undefined for zero vectors")
        return -x / (nx * ny) + (x @ y) * y / (nx * ny**3)
    if tag == "clark":
        s = x + y
        if np.any(s <= 0):
            raise ValueError("clark distance needs strictly positive coordinate sums")
        t = (x - y) / s
        r = np.sqrt(np.sum(t**2))
        if r == 0.0:
            raise ValueError("gradient undefined at coincident points")
        return (t / r) * (-2.0 * x / s**2)
    raise AssertionError(tag)


def pairwise(kind, X):
    """All-pairs dissimilarity matrix M[i, j] = delta(kind, x_i, x_j).

    Output is exactly symmetric; the diagonal is exactly zero for every
    metric except inner_product.
    """
    info = get_kind(kind)
    tag = info.tag
    X = as_matrix(X, name="X")
    if tag in ("euclidean", "manhattan", "squared_euclidean", "sqrt_manhattan", "clark"):
        diff = X[:, None, :] - X[None, :, :]
        if tag == "clark":
            s = X[:, None, :] + X[None, :, :]
            if np.any(s <= 0):
                raise ValueError("clark distance needs strictly positive coordinate sums")
            M = np.sqrt(np.sum((diff / s) ** 2, axis=2))
        elif tag == "euclidean":
            M = np.sqrt(np.sum(diff**2, axis=2))
        elif tag == "squared_euclidean":
            M = np.sum(diff**2, axis=2)
        elif tag == "manhattan":
            M = np.sum(np.abs(diff), axis=2)
        else:
            M = np.sqrt(np.sum(np.abs(diff), axis=2))
        np.fill_diagonal(M, 0.0)
        return M
    C = X @ X.T
    C = 0.5 * (C + C.T)
    if tag == "inner_product":
        return C
    norms = np.sqrt(np.diag(C))
    if np.any(norms == 0.0):
        raise ValueError("cosine dissimilarity is undefined for zero vectors")
    M = 1.0 - C / np.outer(norms, norms)
    np.fill_diagonal(M, 0.0)
    return M


def cross(kind, X, y):
    """Vector of dissimilarities delta(kind, x_i, y) for every row of X.

    Optimizer-facing: inputs are trusted (hot path, no validation) and the
    cosine norm of y is clamped at EPSILON instead of raising, so a descent
    iterate passing near the origin stays finite.
    """
    tag = get_kind(kind).tag
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    diff = X - y
    if tag == "euclidean":
        return np.sqrt(np.sum(diff**2, axis=1))
    if tag == "manhattan":
        return np.sum(np.abs(diff), axis=1)
    if tag == "squared_euclidean":
        return np.sum(diff**2, axis=1)
    if tag == "inner_product":
        return X @ y
    if tag == "sqrt_manhattan":
        return np.sqrt(np.sum(np.abs(diff), axis=1))
    if tag == "cosine":
        nx = np.maximum(np.sqrt(np.sum(X**2, axis=1)), EPSILON)
        ny = max(np.sqrt(y @ y), EPSILON)
        return 1.0 - (X @ y) / (nx * ny)
    if tag == "clark":
        s = X + y
        if np.any(s <= 0):
            raise ValueError("clark distance needs strictly positive coordinate sums")
        return np.sqrt(np.sum((diff / s) ** 2, axis=1))
    raise AssertionError(tag)


def cross_grad_y(kind, X, y):
    """Stacked gradients d delta(x_i, y) / dy, one row per row of X.

    Optimizer-facing companion of ``cross``: distances in denominators are
    clamped at EPSILON, and sign(0) = 0 resolves manhattan kinks, so rows
    for coincident points come out as zero vectors.
    """
    tag = get_kind(kind).tag
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    diff = y - X
    if tag == "squared_euclidean":
        return 2.0 * diff
    if tag == "inner_product":
        return X.copy()
    if tag == "manhattan":
        return np.sign(diff)
    if tag == "euclidean":
        r = np.maximum(np.sqrt(np.sum(diff**2, axis=1)), EPSILON)
        return diff / r[:, None]
    if tag == "sqrt_manhattan":
        r = np.maximum(np.sqrt(np.sum(np.abs(diff), axis=1)), EPSILON)
        return np.sign(diff) / (2.0 * r[:, None])
    if tag == "cosine":
        nx = np.maximum(np.sqrt(np.sum(X**2, axis=1)), EPSILON)
        ny = max(np.sqrt(y @ y), EPSILON)
        dots = X @ y
        return -X / (nx[:, None] * ny) + (dots / (nx * ny**3))[:, None] * y
    if tag == "clark":
        s = X + y
        if np.any(s <= 0):
            raise ValueError("clark distance needs strictly positive coordinate sums")
        t = -diff / s
        r = np.maximum(np.sqrt(np.sum(t**2, axis=1)), EPSILON)
        return (t / r[:, None]) * (-2.0 * X / s**2)
    raise AssertionError(tag)
