"""Comparison methods: PCA biplot, nonlinear biplot, and the data context map."""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import dissimilarity as dis
from .linalg import eigh_symmetric, svd_thin
from .mds import Embedding, FitOptions, classical_mds, fit_mds_from_dissimilarity
from .validation import as_matrix, as_vector


@dataclass(frozen=True)
class PcaBiplot:
    """Observation points b U1 L1^(a/2) and attribute arrows V1 L1^((1-a)/2) / b."""

    alpha: float
    scale: float
    points: np.ndarray
    arrows: np.ndarray


def pca_biplot(X, m, alpha=1.0, scale=1.0):
    """Decompose centered X into observation points and attribute arrows.

    ``alpha`` shifts singular-value weight between points and arrows and
    ``scale`` trades off their sizes; their product reconstructs the rank-m
    approximation of X for any choice. With alpha=1, scale=1 the points are
    the PCA projection and the arrows are the rows of V1.
    """
    X = as_matrix(X, name="X")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    if scale <= 0:
        raise ValueError("scale must be positive")
    if not 1 <= m <= X.shape[1]:
        raise ValueError(f"m must be in [1, {X.shape[1]}], got {m}")
    svd = svd_thin(X)
    s1 = svd.singular_values[:m]
    U1 = svd.U[:, :m]
    V1 = svd.V[:, :m]
    points = scale * U1 * s1**alpha
    arrows = V1 * s1 ** (1.0 - alpha) / scale
    return PcaBiplot(alpha=float(alpha), scale=float(scale), points=points, arrows=arrows)


def nb_embed(D, m):
    """Low-dimensional coordinates for the nonlinear biplot (classical MDS)."""
    return classical_mds(D, m)


class NbProjector:
    """Closed-form affine map that places new high-dimensional points into an
    existing classical-MDS configuration.

    Precomputes the row statistics of the squared distance matrix and the
    pseudo-inverse of Z'Z so that projecting a grid of axis points costs one
    distance vector and one matrix-vector product each.
    """

    def __init__(self, X, Z, kind):
        info = dis.get_kind(kind)
        if not info.euclidean_embeddable:
            raise ValueError(
                "nonlinear biplot requires Euclidean embeddable dissimilarity; "
                f"'{info.tag}' is not (allowed: euclidean, sqrt_manhattan, clark)"
            )
        self.X = as_matrix(X, name="X")
        self.Z = as_matrix(Z, name="Z")
        if self.X.shape[0] != self.Z.shape[0]:
            raise ValueError("X and Z must have the same number of rows")
        self.kind = info.tag
        D2 = dis.pairwise(self.kind, self.X) ** 2
        n = D2.shape[0]
        self._row_term = D2.sum(axis=1) / n - D2.sum() / (2.0 * n * n)
        eig = eigh_symmetric(self.Z.T @ self.Z)
        cutoff = 1e-10 * max(float(eig.values[0]), 0.0)
        mask = eig.values > cutoff
        if not np.any(mask):
            raise ValueError("Z'Z is singular; cannot project new points")
        inv = np.zeros_like(eig.values)
        inv[mask] = 1.0 / eig.values[mask]
        self._half_pinv_zt = 0.5 * (eig.vectors * inv) @ eig.vectors.T @ self.Z.T

    def project(self, x_new):
        x_new = as_vector(x_new, name="x_new")
        e = dis.cross(self.kind, self.X, x_new) ** 2
        d = self._row_term - e
        return self._half_pinv_zt @ d


def nb_axis_point(x_new, X, Z, kind):
    """Project one new high-dimensional point through the nonlinear-biplot map.

    ``Z`` must be the classical-MDS configuration of ``pairwise(kind, X)``.
    The map is affine in the vector of adjusted squared distances, so
    tracing a straight high-dimensional axis under the euclidean metric
    yields a straight low-dimensional axis.
    """
    return NbProjector(X, Z, kind).project(x_new)


@dataclass(frozen=True)
class CompositeDistanceMatrix:
    """Fused (n+p) x (n+p) dissimilarities among observations and attributes.

    Blocks are stored after rescaling; ``block_means_before_fusion`` keeps
    the raw means (off-diagonal for DD and VV, all entries for DV).
    """

    fused: np.ndarray
    dd: np.ndarray
    vv: np.ndarray
    dv: np.ndarray
    block_means_before_fusion: tuple

    @property
    def n(self):
        return self.dv.shape[0]

    @property
    def p(self):
        return self.dv.shape[1]


def _offdiag_mean(M):
    n = M.shape[0]
    return float((M.sum() - np.trace(M)) / (n * (n - 1)))


def dcm_build_cdm(X01, dd_kind="euclidean"):
    """Build the composite distance matrix from data scaled to [0, 1].

    Observation-observation dissimilarities use ``dd_kind`` (euclidean by
    default), attribute-attribute entries are 1 - pearson correlation, and
    observation-attribute entries are 1 - x_ik. The VV and DV blocks are
    rescaled so all three block means match the DD mean before fusing.
    """
    X01 = as_matrix(X01, name="X01", min_rows=2, min_cols=2)
    if np.any(X01 < 0) or np.any(X01 > 1):
        raise ValueError("X01 must be scaled to [0, 1] per column")
    n, p = X01.shape
    sd = X01.std(axis=0)
    bad = np.flatnonzero(sd == 0)
    if bad.size:
        raise ValueError(f"column {bad[0]} is constant; correlation is undefined")

    DD = dis.pairwise(dd_kind, X01)
    corr = np.corrcoef(X01, rowvar=False)
    VV = 1.0 - corr
    np.fill_diagonal(VV, 0.0)
    VV = 0.5 * (VV + VV.T)
    DV = 1.0 - X01

    mean_dd = _offdiag_mean(DD)
    mean_vv = _offdiag_mean(VV)
    mean_dv = float(DV.mean())
    if mean_dd <= 0:
        raise ValueError("observations are all identical; DD block has zero mean")
    VV_s = VV * (mean_dd / mean_vv) if mean_vv > 0 else VV
    DV_s = DV * (mean_dd / mean_dv) if mean_dv > 0 else DV

    fused = np.zeros((n + p, n + p))
    fused[:n, :n] = DD
    fused[:n, n:] = DV_s
    fused[n:, :n] = DV_s.T
    fused[n:, n:] = VV_s
    return CompositeDistanceMatrix(
        fused=fused,
        dd=DD,
        vv=VV_s,
        dv=DV_s,
        block_means_before_fusion=(mean_dd, mean_vv, mean_dv),
    )


class DcmProjection(NamedTuple):
    obs_points: np.ndarray
    attr_points: np.ndarray
    embedding: Embedding


def dcm_project(cdm, m, kind_ld="euclidean", opts=None, seed=0):
    """Embed all n+p entities of a composite distance matrix jointly.

    The iterative stress fit treats every entity as an observation; the
    result is split back into observation and attribute points.
    """
    opts = opts or FitOptions()
    emb = fit_mds_from_dissimilarity(
        cdm.fused, kind_ld, m, opts=opts, seed=seed, kind_hd="composite"
    )
    n = cdm.n
    return DcmProjection(
        obs_points=emb.coordinates[:n].copy(),
        attr_points=emb.coordinates[n:].copy(),
        embedding=emb,
    )
