"""Command-line interface: fit, biplot, compare and simulate subcommands.

Exit codes: 0 success, 1 usage or configuration error, 2 fit did not
converge (outputs are still written), 3 numerical failure.
"""

import argparse
import sys
from dataclasses import fields, replace
from pathlib import Path

from .datasets import ingest_csv, load_sample
from .descent import NumericalError
from .pipelines import (
    RunConfig,
    SimulationSpec,
    dump_json,
    parse_config_file,
    run_biplot,
    run_compare,
    run_fit,
    run_simulation,
    write_text,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_CONVERGED = 2
EXIT_NUMERICAL = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_data_arguments(sub):
    sub.add_argument("input", nargs="?", default=None,
                     help="input CSV (omit to use the bundled sample dataset)")
    sub.add_argument("--no-header", action="store_true", help="CSV has no header row")
    sub.add_argument("--id-column", default=None, help="column holding row ids")


def _add_config_arguments(sub):
    sub.add_argument("--config", default=None, help="key=value config file")
    sub.add_argument("--hd", dest="kind_hd", default=None, help="HD dissimilarity tag")
    sub.add_argument("--ld", dest="kind_ld", default=None, help="LD dissimilarity tag")
    sub.add_argument("--m", type=int, default=None, help="embedding dimensionality")
    sub.add_argument("--grid-c", dest="grid_c", type=float, default=None,
                     help="half range of the axis grid")
    sub.add_argument("--grid-step", dest="grid_step", type=float, default=None,
                     help="spacing of the axis grid")
    sub.add_argument("--display-range", default=None, metavar="LO,HI",
                     help="grid offsets drawn in the SVG (use --display-range=-2,2)")
    sub.add_argument("--scale", default=None, choices=["zscore", "unit_interval", "none"])
    sub.add_argument("--keep", type=int, default=None, help="number of axes to retain")
    sub.add_argument("--threshold", type=float, default=None,
                     help="drop axes with average stress above this")
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--max-iterations", dest="max_iterations", type=int, default=None)
    sub.add_argument("--tolerance", dest="tolerance", type=float, default=None)
    sub.add_argument("--restarts", type=int, default=None)
    sub.add_argument("--axis-restarts", dest="axis_restarts", type=int, default=None,
                     help="extra seeded starts per axis point")
    sub.add_argument("--init", default=None, choices=["classical", "random"])
    sub.add_argument("--jobs", type=int, default=None, help="worker threads")
    sub.add_argument("--out", default=None, help="output directory")


def _build_config(args):
    values = {}
    if getattr(args, "config", None):
        values.update(parse_config_file(args.config))
    known = {f.name for f in fields(RunConfig)}
    for key in known:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    if getattr(args, "display_range", None):
        lo, _, hi = args.display_range.partition(",")
        values["display_lo"] = float(lo)
        values["display_hi"] = float(hi)
    if getattr(args, "method", None):
        values["method"] = args.method
    return replace(RunConfig(), **values)


def _load_dataset(args):
    if args.input is None:
        return load_sample()
    return ingest_csv(args.input, has_header=not args.no_header, id_column=args.id_column)


def _cmd_fit(args):
    dataset = _load_dataset(args)
    config = _build_config(args)
    emb, paths = run_fit(dataset, config)
    print(f"stress={emb.stress!r} iterations={emb.iterations} converged={emb.converged}")
    print(f"wrote {paths['json']} and {paths['csv']}")
    return EXIT_OK if emb.converged else EXIT_NOT_CONVERGED


def _cmd_biplot(args):
    dataset = _load_dataset(args)
    config = _build_config(args)
    scene, paths = run_biplot(dataset, config)
    print(f"method={config.method} stress={scene.embedding.stress!r}")
    print(f"wrote {paths['json']} and {paths['svg']}")
    return EXIT_OK if scene.embedding.converged else EXIT_NOT_CONVERGED


def _cmd_compare(args):
    dataset = _load_dataset(args)
    config = _build_config(args)
    summary, path = run_compare(dataset, config)
    for row in summary["scenes"]:
        if "error" in row:
            print(f"{row['method']}/{row['kind_hd']}: FAILED {row['error']}")
        else:
            print(f"{row['method']}/{row['kind_hd']}: stress={row['stress']!r}")
    for row in summary["skipped"]:
        print(f"{row['method']}/{row['kind_hd']}: skipped ({row['reason']})")
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_simulate(args):
    spec = SimulationSpec(replications=args.replications, seed=args.seed or 0)
    report = run_simulation(spec, jobs=args.jobs or 1)
    out = Path(args.out or "out")
    path = write_text(out / "simulation.json", dump_json(report))
    print(
        f"replications={spec.replications} "
        f"fraction_attr3_highest={report['fraction_attr3_highest']:.4f} "
        f"spearman={report['spearman_sigma3_vs_gap']}"
    )
    print(f"wrote {path}")
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="mdsbiplot",
                     description="stress-based embeddings with low-dimensional attribute axes")
    commands = parser.add_subparsers(dest="command", required=True)

    fit = commands.add_parser("fit", help="fit an embedding and write JSON/CSV")
    _add_data_arguments(fit)
    _add_config_arguments(fit)
    fit.set_defaults(func=_cmd_fit)

    biplot = commands.add_parser("biplot", help="fit, trace axes and write scene JSON/SVG")
    _add_data_arguments(biplot)
    _add_config_arguments(biplot)
    biplot.add_argument("--method", default="gmb", choices=["gmb", "pca", "nb", "dcm"])
    biplot.set_defaults(func=_cmd_biplot)

    compare = commands.add_parser("compare", help="run every supported method/metric cell")
    _add_data_arguments(compare)
    _add_config_arguments(compare)
    compare.set_defaults(func=_cmd_compare)

    simulate = commands.add_parser("simulate", help="replicated low-variance axis study")
    simulate.add_argument("--replications", type=int, default=1000)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--jobs", type=int, default=1)
    simulate.add_argument("--out", default="out")
    simulate.set_defaults(func=_cmd_simulate)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
