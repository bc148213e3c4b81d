"""Stress-based multidimensional scaling with low-dimensional attribute axes.

The package fits embeddings that minimize the squared loss between high-
and low-dimensional pairwise dissimilarities, then labels the embedded
space with one traced axis per attribute, each found by per-point stress
minimization against the fixed configuration. Per-axis stress diagnostics
support pruning, and three reference methods (PCA biplot, nonlinear
biplot, data context map) are included for comparison.
"""

from .axes import (
    AxisGrid,
    AxisTrace,
    BiplotScene,
    axis_avg_stress,
    axis_point,
    closed_form_axis_ip,
    default_grid,
    point_stress,
    prune_axes,
    scene_to_json,
    scene_to_json_dict,
    solve_axis_point,
    trace_all_axes,
    trace_axis,
)
from .baselines import (
    CompositeDistanceMatrix,
    NbProjector,
    PcaBiplot,
    dcm_build_cdm,
    dcm_project,
    nb_axis_point,
    nb_embed,
    pca_biplot,
)
from .datasets import Dataset, ingest_csv, load_sample
from .descent import NumericalError, minimize_descent
from .dissimilarity import (
    EPSILON,
    KINDS,
    DissimilarityKind,
    cross,
    cross_grad_y,
    delta,
    get_kind,
    grad_delta_y,
    pairwise,
)
from .estimators import (
    DataContextMap,
    MDSBiplot,
    NonlinearBiplot,
    PCABiplot,
    StressMDS,
)
from .linalg import (
    EigenResult,
    SvdResult,
    center_columns,
    double_center,
    eigh_symmetric,
    scale_columns,
    svd_thin,
)
from .mds import (
    Embedding,
    FitOptions,
    classical_mds,
    fit_mds,
    fit_mds_from_dissimilarity,
    pca_project,
    pca_variance_ratio,
    stress,
    stress_from_dissimilarity,
    stress_gradient,
)
from .render import render_svg

__version__ = "0.1.0"

__all__ = [
    "AxisGrid",
    "AxisTrace",
    "BiplotScene",
    "CompositeDistanceMatrix",
    "DataContextMap",
    "Dataset",
    "DissimilarityKind",
    "EPSILON",
    "EigenResult",
    "Embedding",
    "FitOptions",
    "KINDS",
    "MDSBiplot",
    "NbProjector",
    "NonlinearBiplot",
    "NumericalError",
    "PCABiplot",
    "PcaBiplot",
    "SvdResult",
    "StressMDS",
    "axis_avg_stress",
    "axis_point",
    "center_columns",
    "classical_mds",
    "closed_form_axis_ip",
    "cross",
    "cross_grad_y",
    "dcm_build_cdm",
    "dcm_project",
    "default_grid",
    "delta",
    "double_center",
    "eigh_symmetric",
    "fit_mds",
    "fit_mds_from_dissimilarity",
    "get_kind",
    "grad_delta_y",
    "ingest_csv",
    "load_sample",
    "minimize_descent",
    "nb_axis_point",
    "nb_embed",
    "pairwise",
    "pca_biplot",
    "pca_project",
    "pca_variance_ratio",
    "point_stress",
    "prune_axes",
    "render_svg",
    "scale_columns",
    "scene_to_json",
    "scene_to_json_dict",
    "solve_axis_point",
    "stress",
    "stress_from_dissimilarity",
    "stress_gradient",
    "svd_thin",
    "trace_all_axes",
    "trace_axis",
]
