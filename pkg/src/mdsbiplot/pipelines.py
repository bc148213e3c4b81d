"""End-to-end pipelines behind the CLI subcommands.

Everything here is a pure function of (dataset, config, seed) writing
deterministic JSON/CSV/SVG, so repeated runs with the same seed produce
byte-identical files. Concurrent variants derive one seed per work item
(seed + index), which makes parallel and serial execution agree exactly.
"""

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import axes as axes_mod
from . import baselines, dissimilarity
from .descent import NumericalError
from .linalg import center_columns, scale_columns
from .mds import Embedding, FitOptions, fit_mds, stress_from_dissimilarity

METHODS = ("gmb", "pca", "nb", "dcm")

# Supported (method, hd metric) comparison cells, in fixed seed order, plus
# the rejected combinations with their reasons.
COMPARE_CELLS = (
    ("nb", "euclidean"),
    ("dcm", "euclidean"),
    ("dcm", "manhattan"),
    ("dcm", "cosine"),
    ("gmb", "euclidean"),
    ("gmb", "manhattan"),
    ("gmb", "cosine"),
    ("gmb", "inner_product"),
)
COMPARE_SKIPPED = (
    ("nb", "manhattan"),
    ("nb", "cosine"),
)


@dataclass
class RunConfig:
    """Flat run configuration; every field doubles as a config-file key."""

    kind_hd: str = "euclidean"
    kind_ld: str = "euclidean"
    m: int = 2
    grid_c: float = 5.0
    grid_step: float = 0.1
    display_lo: float = -2.0
    display_hi: float = 2.0
    scale: str = "zscore"
    seed: int = 0
    keep: int | None = None
    threshold: float | None = None
    max_iterations: int = 2000
    tolerance: float = 1e-8
    step_rule: str = "backtracking"
    restarts: int = 0
    init: str = "classical"
    axis_restarts: int = 0
    method: str = "gmb"
    out: str = "out"
    jobs: int = 1

    def fit_options(self):
        return FitOptions(
            max_iterations=self.max_iterations,
            tolerance=self.tolerance,
            step_rule=self.step_rule,
            restarts=self.restarts,
            init=self.init,
        )

    def grid(self):
        return axes_mod.AxisGrid.build(self.grid_c, self.grid_step)

    def display_range(self):
        return (self.display_lo, self.display_hi)


_INT_KEYS = {"m", "seed", "keep", "max_iterations", "restarts", "axis_restarts", "jobs"}
_FLOAT_KEYS = {"grid_c", "grid_step", "display_lo", "display_hi", "threshold", "tolerance"}


def parse_config_file(path):
    """Read flat key=value lines into a dict of typed config values."""
    values = {}
    known = {f.name for f in fields(RunConfig)}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got '{line}'")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key == "display_range":
            lo, _, hi = val.partition(",")
            values["display_lo"] = float(lo)
            values["display_hi"] = float(hi)
            continue
        if key not in known:
            raise ValueError(f"{path}:{lineno}: unknown config key '{key}'")
        if key in _INT_KEYS:
            values[key] = int(val)
        elif key in _FLOAT_KEYS:
            values[key] = float(val)
        else:
            values[key] = val
    return values


def validate_method_metric(method, kind_hd):
    """Reject method/metric pairs the methods cannot support."""
    if method not in METHODS:
        raise ValueError(f"unknown method '{method}' (expected one of {METHODS})")
    info = dissimilarity.get_kind(kind_hd)
    if method == "nb" and not info.euclidean_embeddable:
        raise ValueError(
            "nonlinear biplot requires Euclidean embeddable dissimilarity; "
            f"'{info.tag}' is not (allowed: euclidean, sqrt_manhattan, clark)"
        )


def validate_config(config):
    dissimilarity.get_kind(config.kind_hd)
    dissimilarity.get_kind(config.kind_ld)
    if config.m < 1:
        raise ValueError("m must be at least 1")
    if config.keep is not None and config.threshold is not None:
        raise ValueError("pass at most one of keep and threshold")
    if config.scale not in ("zscore", "unit_interval", "none"):
        raise ValueError(f"unknown scaling mode '{config.scale}'")
    validate_method_metric(config.method, config.kind_hd)
    config.fit_options()
    config.grid()


def prepare_matrix(dataset, scale_mode):
    """Center and scale the raw table for fitting."""
    if scale_mode == "unit_interval":
        return scale_columns(dataset.X, "unit_interval")
    X = center_columns(dataset.X)
    if scale_mode == "zscore":
        X = scale_columns(X, "zscore")
    return X


def write_text(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def dump_json(obj):
    return json.dumps(obj, indent=2) + "\n"


def embedding_csv(embedding, ids):
    lines = ["id," + ",".join(f"z{j + 1}" for j in range(embedding.m))]
    for label, row in zip(ids, embedding.coordinates):
        lines.append(label + "," + ",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def run_fit(dataset, config):
    """Fit an embedding and write embedding.json / embedding.csv.

    Returns (embedding, paths). The caller maps ``converged`` onto the
    process exit code.
    """
    validate_config(config)
    X = prepare_matrix(dataset, config.scale)
    emb = fit_mds(X, config.kind_hd, config.kind_ld, config.m,
                  opts=config.fit_options(), seed=config.seed)
    out = Path(config.out)
    paths = {
        "json": write_text(out / "embedding.json", emb.to_json()),
        "csv": write_text(out / "embedding.csv", embedding_csv(emb, dataset.ids)),
    }
    return emb, paths


def _gmb_scene(dataset, config, X):
    emb = fit_mds(X, config.kind_hd, config.kind_ld, config.m,
                  opts=config.fit_options(), seed=config.seed)
    traces = axes_mod.trace_all_axes(
        X, emb.coordinates, config.kind_hd, config.kind_ld,
        grid=config.grid(), n_jobs=config.jobs,
        restarts=config.axis_restarts, seed=config.seed,
    )
    return axes_mod.prune_axes(
        emb, traces, keep=config.keep, threshold=config.threshold,
        display_range=config.display_range(), method="gmb",
        attribute_names=dataset.names, ids=dataset.ids,
    )


def _pca_scene(dataset, config, X):
    # Arrows are straight, so each is stored as a two-point trace over
    # offsets {0, 1}; their stress diagnostics use the inner-product pair
    # under which the decomposition is the exact stress minimizer.
    bp = baselines.pca_biplot(X, config.m)
    emb = Embedding(
        coordinates=bp.points, kind_hd="inner_product", kind_ld="inner_product",
        stress=stress_from_dissimilarity(bp.points, dissimilarity.pairwise("inner_product", X),
                                         "inner_product"),
        iterations=0, seed=config.seed, converged=True,
    )
    grid = axes_mod.AxisGrid.build(1.0, 1.0)
    traces = []
    for k in range(X.shape[1]):
        pts = np.vstack([off * bp.arrows[k] for off in grid.values])
        g = np.array([
            axes_mod.point_stress(pts[i], axes_mod.axis_point(k, off, X.shape[1]),
                                  X, bp.points, "inner_product", "inner_product")
            for i, off in enumerate(grid.values)
        ])
        traces.append(axes_mod.AxisTrace(k, grid, pts, g, float(g.mean())))
    return axes_mod.prune_axes(
        emb, traces, keep=config.keep, threshold=config.threshold,
        display_range=config.display_range(), method="pca_biplot",
        attribute_names=dataset.names, ids=dataset.ids,
    )


def _nb_scene(dataset, config, X):
    D = dissimilarity.pairwise(config.kind_hd, X)
    Z = baselines.nb_embed(D, config.m)
    emb = Embedding(
        coordinates=Z, kind_hd=config.kind_hd, kind_ld="euclidean",
        stress=stress_from_dissimilarity(Z, D, "euclidean"),
        iterations=0, seed=config.seed, converged=True,
    )
    projector = baselines.NbProjector(X, Z, config.kind_hd)
    grid = config.grid()
    traces = []
    p = X.shape[1]
    for k in range(p):
        pts = np.vstack([projector.project(axes_mod.axis_point(k, off, p)) for off in grid.values])
        g = np.array([
            axes_mod.point_stress(pts[i], axes_mod.axis_point(k, off, p),
                                  X, Z, config.kind_hd, "euclidean")
            for i, off in enumerate(grid.values)
        ])
        traces.append(axes_mod.AxisTrace(k, grid, pts, g, float(g.mean())))
    return axes_mod.prune_axes(
        emb, traces, keep=config.keep, threshold=config.threshold,
        display_range=config.display_range(), method="nonlinear_biplot",
        attribute_names=dataset.names, ids=dataset.ids,
    )


def _dcm_scene(dataset, config, X01):
    cdm = baselines.dcm_build_cdm(X01, dd_kind=config.kind_hd)
    proj = baselines.dcm_project(cdm, config.m, kind_ld=config.kind_ld,
                                 opts=config.fit_options(), seed=config.seed)
    emb = Embedding(
        coordinates=proj.obs_points, kind_hd=config.kind_hd, kind_ld=config.kind_ld,
        stress=proj.embedding.stress, iterations=proj.embedding.iterations,
        seed=config.seed, converged=proj.embedding.converged,
    )
    return axes_mod.BiplotScene(
        embedding=emb, traces=(), removed=(),
        display_range=config.display_range(), method="dcm",
        attribute_names=dataset.names, ids=dataset.ids,
        attr_points=proj.attr_points,
    )


def build_scene(dataset, config):
    """Run one biplot method end to end and return its scene."""
    validate_config(config)
    if config.method == "dcm":
        X = prepare_matrix(dataset, "unit_interval")
        return _dcm_scene(dataset, config, X)
    X = prepare_matrix(dataset, config.scale)
    if config.method == "gmb":
        return _gmb_scene(dataset, config, X)
    if config.method == "pca":
        return _pca_scene(dataset, config, X)
    return _nb_scene(dataset, config, X)


def run_biplot(dataset, config):
    """Build a scene and write its JSON and SVG files."""
    from .render import render_svg

    scene = build_scene(dataset, config)
    out = Path(config.out)
    stem = f"scene_{config.method}_{config.kind_hd}"
    paths = {
        "json": write_text(out / f"{stem}.json", axes_mod.scene_to_json(scene)),
        "svg": write_text(out / f"{stem}.svg", render_svg(scene)),
    }
    return scene, paths


def run_compare(dataset, config):
    """Run every supported comparison cell and write scenes plus a summary.

    Each cell owns seed = config.seed + cell index; cells run independently
    (optionally in parallel) and a failing cell is recorded without
    aborting the others.
    """
    validate_config(replace(config, method="gmb"))
    out = Path(config.out)

    def one(item):
        index, (method, kind_hd) = item
        # The inner-product cell pairs inner products on both sides, the
        # configuration under which the traced axes reproduce the PCA
        # biplot; every other cell keeps the configured LD metric.
        kind_ld = "inner_product" if kind_hd == "inner_product" else config.kind_ld
        cell_config = replace(
            config, method=method, kind_hd=kind_hd, kind_ld=kind_ld,
            seed=config.seed + index,
            scale="unit_interval" if method == "dcm" else config.scale,
            out=str(out),
        )
        try:
            scene, paths = run_biplot(dataset, cell_config)
            return {
                "method": method,
                "kind_hd": kind_hd,
                "seed": cell_config.seed,
                "stress": scene.embedding.stress,
                "scene": Path(paths["json"]).name,
                "svg": Path(paths["svg"]).name,
            }
        except (ValueError, NumericalError) as exc:
            return {"method": method, "kind_hd": kind_hd, "error": str(exc)}

    items = list(enumerate(COMPARE_CELLS))
    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(one, items))
    else:
        results = [one(item) for item in items]

    skipped = []
    for method, kind_hd in COMPARE_SKIPPED:
        try:
            validate_method_metric(method, kind_hd)
        except ValueError as exc:
            skipped.append({"method": method, "kind_hd": kind_hd, "reason": str(exc)})

    summary = {"seed": config.seed, "scenes": results, "skipped": skipped}
    path = write_text(out / "summary.json", dump_json(summary))
    return summary, path


@dataclass
class SimulationSpec:
    """Controls for the low-variance-attribute stress study.

    The tracing grid spans offsets up to the largest attribute standard
    deviation (1.0). Far beyond the data the per-point misfit is dominated
    by the overall data scale rather than by how well an axis direction is
    represented, which drowns the planarity effect the study measures.
    """

    n: int = 25
    p: int = 3
    replications: int = 1000
    sd1_range: tuple = (0.5, 1.0)
    sd2_range: tuple = (0.5, 1.0)
    sd3_range: tuple = (0.0, 0.5)
    kind_hd: str = "manhattan"
    kind_ld: str = "euclidean"
    m: int = 2
    seed: int = 0
    grid_c: float = 1.0
    grid_step: float = 0.1
    fit_options: FitOptions = field(default_factory=FitOptions)

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("replications must be at least 1")
        if self.p != 3:
            raise ValueError("the simulation design uses exactly 3 attributes")
        for rng in (self.sd1_range, self.sd2_range, self.sd3_range):
            if rng[1] < rng[0] or rng[0] < 0:
                raise ValueError(f"invalid standard deviation range {rng}")


def _simulate_one(spec, index):
    rng = np.random.default_rng(spec.seed + index)
    X = rng.standard_normal((spec.n, spec.p))
    sds = np.array([
        rng.uniform(*spec.sd1_range),
        rng.uniform(*spec.sd2_range),
        rng.uniform(*spec.sd3_range),
    ])
    X = center_columns(X)
    X = scale_columns(X, "zscore") * sds
    emb = fit_mds(X, spec.kind_hd, spec.kind_ld, spec.m,
                  opts=spec.fit_options, seed=spec.seed + index)
    grid = axes_mod.AxisGrid.build(spec.grid_c, spec.grid_step)
    traces = axes_mod.trace_all_axes(X, emb.coordinates, spec.kind_hd, spec.kind_ld, grid=grid)
    G = [t.avg_stress for t in traces]
    return {
        "replication": index,
        "seed": spec.seed + index,
        "sigmas": [float(s) for s in sds],
        "G": [float(g) for g in G],
        "gap": float(G[2] - max(G[0], G[1])),
        "stress": emb.stress,
    }


def rank_average(values):
    """Ranks starting at 1 with ties sharing their average rank."""
    values = np.asarray(values, dtype=float)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size)
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def spearman(x, y):
    """Spearman rank correlation with average-rank ties."""
    rx = rank_average(x)
    ry = rank_average(y)
    rx = rx - rx.mean()
    ry = ry - ry.mean()
    denom = np.sqrt((rx @ rx) * (ry @ ry))
    if denom == 0:
        raise ValueError("rank correlation undefined for constant input")
    return float((rx @ ry) / denom)


def run_simulation(spec, jobs=1):
    """Run the replicated simulation and assemble the report dict.

    Per replication: draw a standard normal table, rescale its columns to
    freshly drawn standard deviations (the third one much smaller), fit the
    embedding, trace all axes, and record the per-axis average stress G.
    Replication i owns seed spec.seed + i. Failed fits are recorded and
    skipped.
    """
    rows = []
    failures = []

    def one(i):
        try:
            return _simulate_one(spec, i)
        except (ValueError, NumericalError) as exc:
            return {"replication": i, "error": str(exc)}

    indexes = range(spec.replications)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(one, indexes))
    else:
        results = [one(i) for i in indexes]
    for res in results:
        (failures if "error" in res else rows).append(res)

    frac = (
        sum(1 for r in rows if r["G"][2] > max(r["G"][0], r["G"][1])) / len(rows)
        if rows else 0.0
    )
    corr = (
        spearman([r["sigmas"][2] for r in rows], [r["gap"] for r in rows])
        if len(rows) >= 3 else None
    )
    return {
        "n": spec.n,
        "p": spec.p,
        "replications": spec.replications,
        "seed": spec.seed,
        "kind_hd": spec.kind_hd,
        "kind_ld": spec.kind_ld,
        "m": spec.m,
        "sd_ranges": [list(spec.sd1_range), list(spec.sd2_range), list(spec.sd3_range)],
        "fraction_attr3_highest": frac,
        "pass_threshold": 0.85,
        "spearman_sigma3_vs_gap": corr,
        "rows": rows,
        "failures": failures,
    }
