"""Low-dimensional embeddings: classical MDS, PCA, and iterative stress fits.

The iterative fit minimizes

    f(Z) = sum_i sum_j ( delta_HD(x_i, x_j) - delta_LD(z_i, z_j) )^2

over all ordered pairs, including i = j. The diagonal terms vanish for
every metric except inner_product, where they are genuine residuals.
"""

import json
from dataclasses import dataclass, field, replace

import numpy as np

from . import dissimilarity as dis
from .descent import minimize_descent
from .linalg import double_center, eigh_symmetric, svd_thin
from .validation import as_matrix, check_square_symmetric


@dataclass(frozen=True)
class FitOptions:
    """Knobs for the iterative stress minimizer.

    ``tolerance`` is the relative stress decrease below which the fit is
    declared converged. ``restarts`` adds extra runs from random starts
    (seeded seed+1, seed+2, ...) and keeps the lowest-stress result.
    ``initial_coordinates`` is only consulted when ``init='given'``.
    """

    max_iterations: int = 2000
    tolerance: float = 1e-8
    step_rule: str = "backtracking"
    restarts: int = 0
    init: str = "classical"
    step_size: float = 0.01
    initial_coordinates: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.step_rule not in ("fixed", "backtracking"):
            raise ValueError(f"unknown step_rule '{self.step_rule}'")
        if self.restarts < 0:
            raise ValueError("restarts must be nonnegative")
        if self.init not in ("classical", "random", "given"):
            raise ValueError(f"unknown init '{self.init}'")
        if self.init == "given" and self.initial_coordinates is None:
            raise ValueError("init='given' requires initial_coordinates")


@dataclass(frozen=True)
class Embedding:
    """Fitted low-dimensional coordinates plus fit provenance."""

    coordinates: np.ndarray
    kind_hd: str
    kind_ld: str
    stress: float
    iterations: int
    seed: int
    converged: bool

    @property
    def n(self):
        return self.coordinates.shape[0]

    @property
    def m(self):
        return self.coordinates.shape[1]

    def to_json_dict(self):
        return {
            "n": self.n,
            "m": self.m,
            "kind_hd": self.kind_hd,
            "kind_ld": self.kind_ld,
            "stress": self.stress,
            "seed": self.seed,
            "iterations": self.iterations,
            "converged": self.converged,
            "coordinates": [[float(v) for v in row] for row in self.coordinates],
        }

    def to_json(self):
        return json.dumps(self.to_json_dict(), indent=2) + "\n"


def stress(Z, X, kind_hd, kind_ld):
    """Squared-loss stress between HD and LD pairwise dissimilarities."""
    Z = as_matrix(Z, name="Z")
    X = as_matrix(X, name="X")
    if Z.shape[0] != X.shape[0]:
        raise ValueError("Z and X must have the same number of rows")
    return stress_from_dissimilarity(Z, dis.pairwise(kind_hd, X), kind_ld)


def stress_from_dissimilarity(Z, Delta, kind_ld):
    """Stress of coordinates Z against a precomputed HD dissimilarity matrix."""
    Z = as_matrix(Z, name="Z")
    Delta = as_matrix(Delta, name="Delta")
    R = Delta - dis.pairwise(kind_ld, Z)
    return float(np.sum(R * R))


def stress_gradient(Z, X, kind_hd, kind_ld):
    """Gradient of the stress with respect to every LD coordinate (n x m)."""
    Z = as_matrix(Z, name="Z")
    X = as_matrix(X, name="X")
    return _stress_gradient_from(Z, dis.pairwise(kind_hd, X), kind_ld)


def _stress_gradient_from(Z, Delta, kind_ld):
    # d f / d z_k = -4 sum_i R[i, k] * (d delta(z_i, y) / dy at y = z_k);
    # the diagonal contributes only under inner_product, where the formula
    # already accounts for it.
    tag = dis.get_kind(kind_ld).tag
    R = Delta - dis.pairwise(kind_ld, Z)
    if tag == "inner_product":
        return -4.0 * (R.T @ Z)
    if tag == "euclidean":
        D = dis.pairwise("euclidean", Z)
        W = R / np.maximum(D, dis.EPSILON)
        np.fill_diagonal(W, 0.0)
        return -4.0 * (W.sum(axis=0)[:, None] * Z - W.T @ Z)
    n = Z.shape[0]
    G = np.empty_like(Z)
    for k in range(n):
        A = dis.cross_grad_y(kind_ld, Z, Z[k])
        G[k] = -4.0 * (A.T @ R[:, k])
    return G


def classical_mds(D, m):
    """Coordinates from a distance matrix via squaring, double centering and eigh.

    The first ``m`` columns of V Lambda^(1/2) are returned; ``m`` may not
    exceed the number of positive eigenvalues of the centered matrix.
    """
    D = check_square_symmetric(D, name="D", zero_diagonal=True, nonnegative=True)
    if m < 1:
        raise ValueError("m must be at least 1")
    B = double_center(D * D)
    eig = eigh_symmetric(B)
    scale = max(float(eig.values[0]), 0.0)
    positive = int(np.sum(eig.values > 1e-10 * max(scale, 1.0)))
    if m > positive:
        raise ValueError(
            f"m={m} exceeds the {positive} positive eigenvalue(s); spectrum: "
            f"{np.array2string(eig.values, precision=6)}"
        )
    return eig.vectors[:, :m] * np.sqrt(eig.values[:m])


def pca_project(X, m):
    """Project centered data onto its first m right singular vectors."""
    X = as_matrix(X, name="X")
    _require_centered(X)
    p = X.shape[1]
    if not 1 <= m <= p:
        raise ValueError(f"m must be in [1, {p}], got {m}")
    svd = svd_thin(X)
    return X @ svd.V[:, :m]


def pca_variance_ratio(X, m):
    """Proportion of total variance kept by an m-dimensional PCA projection."""
    X = as_matrix(X, name="X")
    _require_centered(X)
    svd = svd_thin(X)
    lam = svd.singular_values**2
    total = float(lam.sum())
    if total == 0.0:
        raise ValueError("X has no variance")
    return float(lam[:m].sum()) / total


def _require_centered(X):
    scale = max(1.0, float(np.max(np.abs(X))))
    if np.max(np.abs(X.mean(axis=0))) > 1e-8 * scale:
        raise ValueError("input must be column-centered")


def _classical_init(Delta, m):
    # Torgerson pipeline on the dissimilarity matrix treated as distances:
    # the diagonal is forced to zero and signs vanish in the squaring.
    D0 = Delta.copy()
    np.fill_diagonal(D0, 0.0)
    n = D0.shape[0]
    J = np.eye(n) - np.full((n, n), 1.0 / n)
    B = -0.5 * (J @ (D0 * D0) @ J)
    eig = eigh_symmetric(0.5 * (B + B.T))
    vals = np.maximum(eig.values[:m], 0.0)
    Z0 = eig.vectors[:, :m] * np.sqrt(vals)
    if m > n:
        Z0 = np.hstack([Z0, np.zeros((n, m - n))])
    return Z0


def fit_mds(X, kind_hd, kind_ld, m, opts=None, seed=0):
    """Fit an m-dimensional embedding of X by iterative stress minimization."""
    X = as_matrix(X, name="X", min_rows=2)
    Delta = dis.pairwise(kind_hd, X)
    return fit_mds_from_dissimilarity(
        Delta, kind_ld, m, opts=opts, seed=seed, kind_hd=dis.get_kind(kind_hd).tag
    )


def fit_mds_from_dissimilarity(Delta, kind_ld, m, opts=None, seed=0, kind_hd="precomputed"):
    """Fit an embedding against a precomputed HD dissimilarity matrix.

    Restart k runs with seed + k from a random start; the lowest final
    stress wins and ties go to the lowest seed.
    """
    Delta = check_square_symmetric(Delta, name="Delta", tol=1e-8)
    opts = opts or FitOptions()
    if m < 1:
        raise ValueError("m must be at least 1")
    kind_ld = dis.get_kind(kind_ld).tag

    best = None
    for attempt in range(opts.restarts + 1):
        run_seed = seed + attempt
        run_opts = opts if attempt == 0 else replace(opts, init="random", initial_coordinates=None)
        emb = _fit_single(Delta, kind_ld, m, run_opts, run_seed, kind_hd)
        if best is None or emb.stress < best.stress:
            best = emb
    return best


def _fit_single(Delta, kind_ld, m, opts, seed, kind_hd):
    n = Delta.shape[0]
    if opts.init == "classical":
        Z0 = _classical_init(Delta, m)
    elif opts.init == "random":
        Z0 = np.random.default_rng(seed).uniform(-1.0, 1.0, size=(n, m))
    else:
        Z0 = as_matrix(opts.initial_coordinates, name="initial_coordinates")
        if Z0.shape != (n, m):
            raise ValueError(f"initial_coordinates must have shape {(n, m)}, got {Z0.shape}")

    def fun(zvec):
        return stress_from_dissimilarity(zvec.reshape(n, m), Delta, kind_ld)

    def grad(zvec):
        return _stress_gradient_from(zvec.reshape(n, m), Delta, kind_ld).ravel()

    res = minimize_descent(
        fun,
        grad,
        Z0.ravel(),
        max_iterations=opts.max_iterations,
        rel_tolerance=opts.tolerance,
        step_rule=opts.step_rule,
        step_size=opts.step_size,
    )
    return Embedding(
        coordinates=res.x.reshape(n, m),
        kind_hd=kind_hd,
        kind_ld=kind_ld,
        stress=res.value,
        iterations=res.iterations,
        seed=seed,
        converged=res.converged,
    )
