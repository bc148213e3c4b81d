"""Scikit-learn style estimators wrapping the functional core.

These make the embeddings and biplots compose with pipelines, grid search
and ``clone``: parameters live in ``__init__``, fitted state lands in
trailing-underscore attributes, and ``fit_transform`` returns coordinates.
"""

import numpy as np
from sklearn.base import BaseEstimator

from . import axes as axes_mod
from . import baselines
from .linalg import center_columns, scale_columns
from .mds import FitOptions, fit_mds
from .validation import as_matrix


def _options(self):
    return FitOptions(
        max_iterations=self.max_iter,
        tolerance=self.tol,
        step_rule=self.step_rule,
        restarts=self.restarts,
        init=self.init,
    )


class StressMDS(BaseEstimator):
    """Iterative stress-minimizing embedding under arbitrary dissimilarities.

    Parameters
    ----------
    n_components : target dimensionality
    hd_dissimilarity, ld_dissimilarity : metric tags for the original and
        embedded spaces
    max_iter, tol, step_rule, restarts, init : optimizer controls
    random_state : seed recorded in the embedding and used by random starts

    Attributes
    ----------
    embedding_ : (n, n_components) coordinates
    stress_ : final stress value
    n_iter_ : accepted descent steps
    converged_ : whether the relative-decrease tolerance was reached
    """

    def __init__(self, n_components=2, hd_dissimilarity="euclidean",
                 ld_dissimilarity="euclidean", max_iter=2000, tol=1e-8,
                 step_rule="backtracking", restarts=0, init="classical",
                 random_state=0):
        self.n_components = n_components
        self.hd_dissimilarity = hd_dissimilarity
        self.ld_dissimilarity = ld_dissimilarity
        self.max_iter = max_iter
        self.tol = tol
        self.step_rule = step_rule
        self.restarts = restarts
        self.init = init
        self.random_state = random_state

    def fit(self, X, y=None):
        X = as_matrix(X, min_rows=2)
        result = fit_mds(X, self.hd_dissimilarity, self.ld_dissimilarity,
                         self.n_components, opts=_options(self), seed=self.random_state)
        self.result_ = result
        self.embedding_ = result.coordinates
        self.stress_ = result.stress
        self.n_iter_ = result.iterations
        self.converged_ = result.converged
        return self

    def fit_transform(self, X, y=None):
        return self.fit(X).embedding_


class MDSBiplot(BaseEstimator):
    """Embedding plus traced low-dimensional attribute axes with pruning.

    Attributes after fit: ``embedding_``, ``traces_``, ``scene_`` and the
    per-attribute average stress ``axis_stress_``.
    """

    def __init__(self, n_components=2, hd_dissimilarity="euclidean",
                 ld_dissimilarity="euclidean", grid_half_range=5.0, grid_step=0.1,
                 display_range=(-2.0, 2.0), keep=None, threshold=None,
                 max_iter=2000, tol=1e-8, step_rule="backtracking", restarts=0,
                 init="classical", random_state=0, n_jobs=None, feature_names=None):
        self.n_components = n_components
        self.hd_dissimilarity = hd_dissimilarity
        self.ld_dissimilarity = ld_dissimilarity
        self.grid_half_range = grid_half_range
        self.grid_step = grid_step
        self.display_range = display_range
        self.keep = keep
        self.threshold = threshold
        self.max_iter = max_iter
        self.tol = tol
        self.step_rule = step_rule
        self.restarts = restarts
        self.init = init
        self.random_state = random_state
        self.n_jobs = n_jobs
        self.feature_names = feature_names

    def fit(self, X, y=None):
        X = as_matrix(X, min_rows=2)
        result = fit_mds(X, self.hd_dissimilarity, self.ld_dissimilarity,
                         self.n_components, opts=_options(self), seed=self.random_state)
        grid = axes_mod.AxisGrid.build(self.grid_half_range, self.grid_step)
        traces = axes_mod.trace_all_axes(
            X, result.coordinates, self.hd_dissimilarity, self.ld_dissimilarity,
            grid=grid, n_jobs=self.n_jobs,
        )
        self.result_ = result
        self.embedding_ = result.coordinates
        self.stress_ = result.stress
        self.traces_ = traces
        self.axis_stress_ = np.array([t.avg_stress for t in traces])
        self.scene_ = axes_mod.prune_axes(
            result, traces, keep=self.keep, threshold=self.threshold,
            display_range=self.display_range, attribute_names=self.feature_names,
        )
        return self

    def fit_transform(self, X, y=None):
        return self.fit(X).embedding_


class PCABiplot(BaseEstimator):
    """Principal-component biplot with adjustable point/arrow weighting."""

    def __init__(self, n_components=2, alpha=1.0, scale=1.0, center=True):
        self.n_components = n_components
        self.alpha = alpha
        self.scale = scale
        self.center = center

    def fit(self, X, y=None):
        X = as_matrix(X, min_rows=2)
        if self.center:
            X = center_columns(X)
        bp = baselines.pca_biplot(X, self.n_components, alpha=self.alpha, scale=self.scale)
        self.points_ = bp.points
        self.arrows_ = bp.arrows
        return self

    def fit_transform(self, X, y=None):
        return self.fit(X).points_


class NonlinearBiplot(BaseEstimator):
    """Classical-MDS embedding with closed-form projected attribute axes.

    Requires a Euclidean embeddable dissimilarity.
    """

    def __init__(self, n_components=2, dissimilarity="euclidean",
                 grid_half_range=5.0, grid_step=0.1):
        self.n_components = n_components
        self.dissimilarity = dissimilarity
        self.grid_half_range = grid_half_range
        self.grid_step = grid_step

    def fit(self, X, y=None):
        from . import dissimilarity as dis

        X = as_matrix(X, min_rows=2)
        D = dis.pairwise(self.dissimilarity, X)
        Z = baselines.nb_embed(D, self.n_components)
        projector = baselines.NbProjector(X, Z, self.dissimilarity)
        grid = axes_mod.AxisGrid.build(self.grid_half_range, self.grid_step)
        p = X.shape[1]
        self.embedding_ = Z
        self.axes_ = [
            np.vstack([projector.project(axes_mod.axis_point(k, off, p)) for off in grid.values])
            for k in range(p)
        ]
        self.grid_ = grid
        return self

    def fit_transform(self, X, y=None):
        return self.fit(X).embedding_


class DataContextMap(BaseEstimator):
    """Joint embedding of observations and attributes via a composite matrix.

    Input columns are mapped onto [0, 1] before the composite matrix is
    assembled.
    """

    def __init__(self, n_components=2, dd_dissimilarity="euclidean",
                 ld_dissimilarity="euclidean", max_iter=2000, tol=1e-8,
                 step_rule="backtracking", restarts=0, init="classical",
                 random_state=0):
        self.n_components = n_components
        self.dd_dissimilarity = dd_dissimilarity
        self.ld_dissimilarity = ld_dissimilarity
        self.max_iter = max_iter
        self.tol = tol
        self.step_rule = step_rule
        self.restarts = restarts
        self.init = init
        self.random_state = random_state

    def fit(self, X, y=None):
        X01 = scale_columns(as_matrix(X, min_rows=2, min_cols=2), "unit_interval")
        cdm = baselines.dcm_build_cdm(X01, dd_kind=self.dd_dissimilarity)
        proj = baselines.dcm_project(cdm, self.n_components, kind_ld=self.ld_dissimilarity,
                                     opts=_options(self), seed=self.random_state)
        self.cdm_ = cdm
        self.obs_points_ = proj.obs_points
        self.attr_points_ = proj.attr_points
        self.stress_ = proj.embedding.stress
        return self

    def fit_transform(self, X, y=None):
        return self.fit(X).obs_points_
