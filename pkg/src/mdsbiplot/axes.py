"""Low-dimensional axis tracing against a fixed embedding.

Each high-dimensional attribute axis is approximated by a uniformly spaced
sequence of points ell * e_k. For every such point the best-fitting
low-dimensional location solves

    argmin_b  sum_i ( delta_HD(x_i, a_k_ell) - delta_LD(zhat_i, b) )^2

with the embedding zhat held fixed. Solves sweep the grid in ascending
order, each warm-started from the previous solution, and the per-point
optimal stress g is averaged into a per-axis diagnostic G used to prune
axes that fit the projection poorly. Axes are mutually independent, so
tracing parallelizes across attributes without any shared mutable state.
"""

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import dissimilarity as dis
from .descent import minimize_descent
from .mds import Embedding
from .validation import as_matrix, as_vector


@dataclass(frozen=True)
class AxisGrid:
    """Uniform grid {-c, ..., c} of offsets along a high-dimensional axis."""

    half_range: float
    step: float
    values: np.ndarray

    @staticmethod
    def build(half_range=5.0, step=0.1):
        if half_range <= 0 or step <= 0:
            raise ValueError("half_range and step must be positive")
        ratio = 2.0 * half_range / step
        count = int(round(ratio))
        if abs(ratio - count) > 1e-9:
            raise ValueError("2 * half_range must be an integer multiple of step")
        values = np.linspace(-half_range, half_range, count + 1)
        return AxisGrid(half_range=float(half_range), step=float(step), values=values)


def default_grid():
    """The standard tracing grid {-5.0, -4.9, ..., 4.9, 5.0}."""
    return AxisGrid.build(5.0, 0.1)


@dataclass(frozen=True)
class AxisTrace:
    """Traced low-dimensional axis for one attribute with per-point stress."""

    attribute_index: int
    grid: AxisGrid
    points: np.ndarray
    point_stress: np.ndarray
    avg_stress: float


@dataclass(frozen=True)
class BiplotScene:
    """An embedding annotated with retained axis traces and pruning diagnostics."""

    embedding: Embedding
    traces: tuple
    removed: tuple
    display_range: tuple = (-2.0, 2.0)
    method: str = "gmb"
    attribute_names: tuple | None = None
    ids: tuple | None = None
    attr_points: np.ndarray | None = None


def axis_point(index, offset, n_attributes):
    """The high-dimensional axis point: ``offset`` in position ``index``, zeros elsewhere.

    ``index`` is 0-based.
    """
    if not 0 <= index < n_attributes:
        raise ValueError(f"attribute index {index} out of range for {n_attributes} attributes")
    a = np.zeros(n_attributes)
    a[index] = offset
    return a


def hd_axis_targets(kind_hd, X, index, offset):
    """HD dissimilarities between every observation and an axis point.

    Cosine is an angle measure, so its value against any nonzero multiple
    of e_k is the value against e_k itself; the unit direction is used for
    every offset, which also keeps the zero-offset point well defined and
    collapses each trace to a single location.
    """
    tag = dis.get_kind(kind_hd).tag
    p = X.shape[1]
    if tag == "cosine":
        return dis.cross(kind_hd, X, axis_point(index, 1.0, p))
    return dis.cross(kind_hd, X, axis_point(index, offset, p))


def _solve_targets(targets, Z_hat, kind_ld, init, grad_tolerance, max_iterations):
    def fun(b):
        r = targets - dis.cross(kind_ld, Z_hat, b)
        return float(r @ r)

    def grad(b):
        r = targets - dis.cross(kind_ld, Z_hat, b)
        return -2.0 * (dis.cross_grad_y(kind_ld, Z_hat, b).T @ r)

    return minimize_descent(
        fun,
        grad,
        np.asarray(init, dtype=float),
        max_iterations=max_iterations,
        grad_tolerance=grad_tolerance,
    )


def _solve_with_restarts(targets, Z, kind_ld, init, grad_tolerance, max_iterations,
                         restarts, seed_key):
    best = _solve_targets(targets, Z, kind_ld, init, grad_tolerance, max_iterations)
    if restarts:
        # The per-point objective can be multimodal; extra seeded starts
        # spanning the embedding's scale keep the best solution found.
        radius = 2.0 * max(float(np.max(np.linalg.norm(Z, axis=1))), 1e-3)
        rng = np.random.default_rng(seed_key)
        for _ in range(restarts):
            b0 = rng.uniform(-radius, radius, size=Z.shape[1])
            cand = _solve_targets(targets, Z, kind_ld, b0, grad_tolerance, max_iterations)
            if cand.value < best.value:
                best = cand
    return best


def solve_axis_point(
    x_rows, Z_hat, kind_hd, kind_ld, a, init,
    grad_tolerance=1e-6, max_iterations=2000, restarts=0, seed=0,
):
    """Best low-dimensional location for one high-dimensional axis point.

    Runs the same backtracking descent as the embedding fit, restricted to
    a single m-vector, until the objective gradient norm drops below
    ``grad_tolerance``. ``restarts`` adds seeded random starts and keeps
    the lowest objective. The embedding is never modified.
    """
    X = as_matrix(x_rows, name="x_rows")
    Z = as_matrix(Z_hat, name="Z_hat")
    a = as_vector(a, name="a")
    targets = dis.cross(kind_hd, X, a)
    res = _solve_with_restarts(targets, Z, kind_ld, init, grad_tolerance,
                               max_iterations, restarts, seed)
    return res.x


def point_stress(b, a, x_rows, Z_hat, kind_hd, kind_ld):
    """Stress of one low-dimensional axis point against the fixed embedding."""
    X = as_matrix(x_rows, name="x_rows")
    Z = as_matrix(Z_hat, name="Z_hat")
    r = dis.cross(kind_hd, X, as_vector(a, name="a")) - dis.cross(
        kind_ld, Z, as_vector(b, name="b")
    )
    return float(r @ r)


def trace_axis(
    index, grid, x_rows, Z_hat, kind_hd, kind_ld,
    grad_tolerance=1e-6, max_iterations=2000, restarts=0, seed=0,
):
    """Trace one attribute's low-dimensional axis across the whole grid.

    Grid offsets are solved in ascending order; the first solve starts at
    the origin and every later solve starts from the previous solution.
    Optional restarts add seeded random starts at every offset; the seeds
    derive from (seed, attribute, offset position) so traces do not depend
    on execution order.
    """
    X = as_matrix(x_rows, name="x_rows")
    Z = as_matrix(Z_hat, name="Z_hat")
    m = Z.shape[1]
    points = np.empty((grid.values.size, m))
    stresses = np.empty(grid.values.size)
    current = np.zeros(m)
    for i, offset in enumerate(grid.values):
        targets = hd_axis_targets(kind_hd, X, index, offset)
        res = _solve_with_restarts(targets, Z, kind_ld, current, grad_tolerance,
                                   max_iterations, restarts, (seed, index, i))
        current = res.x
        points[i] = current
        stresses[i] = res.value
    return AxisTrace(
        attribute_index=index,
        grid=grid,
        points=points,
        point_stress=stresses,
        avg_stress=float(stresses.mean()),
    )


def trace_all_axes(
    x_rows,
    Z_hat,
    kind_hd,
    kind_ld,
    grid=None,
    n_jobs=None,
    grad_tolerance=1e-6,
    max_iterations=2000,
    restarts=0,
    seed=0,
):
    """Trace every attribute, optionally with a thread per axis.

    Parallel and sequential runs produce bitwise-identical traces because
    each axis is an independent pure function of the shared inputs.
    """
    X = as_matrix(x_rows, name="x_rows")
    grid = grid or default_grid()
    p = X.shape[1]

    def one(k):
        return trace_axis(
            k, grid, X, Z_hat, kind_hd, kind_ld,
            grad_tolerance=grad_tolerance, max_iterations=max_iterations,
            restarts=restarts, seed=seed,
        )

    if n_jobs is None or n_jobs <= 1:
        return [one(k) for k in range(p)]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(one, range(p)))


def axis_avg_stress(trace):
    """Arithmetic mean of the per-point stress along a trace."""
    return float(np.asarray(trace.point_stress).mean())


def closed_form_axis_ip(index, offset, V1):
    """Axis point under inner-product dissimilarities: offset times row ``index`` of V1.

    Serves as the analytic oracle for ``solve_axis_point`` when both
    metrics are inner products and the embedding is X @ V1.
    """
    V1 = as_matrix(V1, name="V1")
    return offset * V1[index].copy()


def prune_axes(
    embedding,
    traces,
    keep=None,
    threshold=None,
    display_range=(-2.0, 2.0),
    method="gmb",
    attribute_names=None,
    ids=None,
    attr_points=None,
):
    """Drop the highest-average-stress axes and assemble a scene.

    Exactly one of ``keep`` (number of axes to retain) or ``threshold``
    (drop every axis with G above it) must be given; passing neither keeps
    all axes. Ties in G drop the higher attribute index first. The
    embedding itself is never touched.
    """
    traces = list(traces)
    p = len(traces)
    if keep is not None and threshold is not None:
        raise ValueError("pass at most one of keep and threshold")
    order = sorted(traces, key=lambda t: (-t.avg_stress, -t.attribute_index))
    if keep is not None:
        if not 0 <= keep <= p:
            raise ValueError(f"keep must be in [0, {p}], got {keep}")
        dropped = order[: p - keep]
    elif threshold is not None:
        dropped = [t for t in order if t.avg_stress > threshold]
    else:
        dropped = []
    dropped_ix = {t.attribute_index for t in dropped}
    retained = sorted(
        (t for t in traces if t.attribute_index not in dropped_ix),
        key=lambda t: t.attribute_index,
    )
    return BiplotScene(
        embedding=embedding,
        traces=tuple(retained),
        removed=tuple((t.attribute_index, t.avg_stress) for t in dropped),
        display_range=(float(display_range[0]), float(display_range[1])),
        method=method,
        attribute_names=None if attribute_names is None else tuple(attribute_names),
        ids=None if ids is None else tuple(ids),
        attr_points=attr_points,
    )


def _attribute_name(scene, k):
    if scene.attribute_names is not None:
        return scene.attribute_names[k]
    return f"x{k + 1}"


def scene_to_json_dict(scene):
    out = {
        "method": scene.method,
        "display_range": [scene.display_range[0], scene.display_range[1]],
        "ids": None if scene.ids is None else list(scene.ids),
        "embedding": scene.embedding.to_json_dict(),
        "axes": [
            {
                "k": t.attribute_index,
                "name": _attribute_name(scene, t.attribute_index),
                "ell": [float(v) for v in t.grid.values],
                "points": [[float(v) for v in row] for row in t.points],
                "g": [float(v) for v in t.point_stress],
                "G": float(t.avg_stress),
            }
            for t in scene.traces
        ],
        "removed": [
            {"k": k, "name": _attribute_name(scene, k), "G": float(g)}
            for k, g in scene.removed
        ],
    }
    if scene.attr_points is not None:
        out["attr_points"] = [
            {"k": k, "name": _attribute_name(scene, k), "point": [float(v) for v in row]}
            for k, row in enumerate(scene.attr_points)
        ]
    return out


def scene_to_json(scene):
    return json.dumps(scene_to_json_dict(scene), indent=2) + "\n"
