"""Command-line entry point.

Exit codes::

    0  success
    1  unexpected internal error
    2  bad arguments or parameter values
    3  unreadable or malformed input (ParseError, EmptyInput)
    4  InsufficientData
    5  analysis could not proceed (NoMaxima, NoScalingRegion, BadProjection)
    6  DivergenceError
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import generators as gen
from .analysis.forecast import DEFAULT_K, DEFAULT_TEST_FRACTION
from .analysis.surrogate import DEFAULT_SURROGATES
from .analysis.correlation import DEFAULT_PAIR_BUDGET
from .analysis.verdict import DEFAULT_ALPHA
from .embedding import EmbeddingConfig, delay_embed, successive_maxima, suggest_lag
from .errors import HiddenOrderError
from .io import FORMATS, DWELL_SELECTIONS, ingest_series, write_portrait, write_series
from .pipeline import AnalysisConfig, analyze
from .report import svg
from .report.document import emit_report, emit_timings
from .series import normalize

OUTDIR_ENV = "HIDDENORDER_OUTDIR"
SOURCES = ("logistic", "henon", "lorenz", "iid-uniform", "born", "chaos-masked")

EXIT_USAGE = 2


def _lag(text):
    if text == "auto":
        return text
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("lag must be >= 1 or 'auto'")
    return value


def _out_dir(args) -> Path:
    return Path(args.out_dir or os.environ.get(OUTDIR_ENV) or ".")


def _output(args, default_name) -> Path:
    return Path(args.output) if args.output else _out_dir(args) / default_name


def _ingest(args):
    return ingest_series(args.input, format=args.format, dwell=args.dwell)


def cmd_generate(args):
    rng = gen.make_rng(args.seed)
    x0 = args.x0 if args.x0 is not None else float(rng.uniform(0.05, 0.95))
    model = gen.SlitScreenModel(args.fringe_frequency, args.envelope_width)
    src = args.source
    if src == "logistic":
        series = gen.logistic_series(x0, args.k, args.n)
    elif src == "henon":
        if args.component == "z":
            raise ValueError("Henon map has components x and y only")
        xs, ys = gen.henon_series(args.x0 or 0.0, args.y0,
                                  gen.MapParams(henon_a=args.a, henon_b=args.b), args.n)
        series = xs if args.component == "x" else ys
    elif src == "lorenz":
        params = gen.LorenzParams(args.sigma, args.rho, args.beta, args.dt, args.transient)
        series = gen.lorenz_series(tuple(args.initial), params, args.n)["xyz".index(args.component)]
    elif src == "iid-uniform":
        series = gen.iid_uniform(args.n, args.seed)
    elif src == "born":
        series = gen.born_hits(model, args.n, args.seed)
    else:
        base = gen.logistic_series(x0, 4.0, args.n)
        series = gen.chaos_masked_hits(base, model, method=args.mask_method)
    series = gen.EventSeries(series.values, series.source_label, seed=args.seed)
    path = write_series(_output(args, f"{src}.txt"), series)
    print(f"wrote {series.length} values to {path}")


def cmd_corrupt(args):
    series = _ingest(args)
    out = gen.corrupt(series, args.dropout, args.sigma, args.seed)
    path = write_series(_output(args, "corrupted.txt"), out)
    print(f"wrote {out.length} of {series.length} values to {path}")


def cmd_embed(args):
    series = _ingest(args)
    norm = normalize(series) if args.normalize else series
    lag = suggest_lag(normalize(series)) if args.lag == "auto" else args.lag
    portrait = delay_embed(norm, EmbeddingConfig(args.dimension, lag))
    path = write_portrait(_output(args, "portrait.csv"), portrait)
    print(f"wrote {len(portrait)} points (m={args.dimension}, lag={lag}) to {path}")
    if args.plot:
        proj = tuple(args.projection) if args.projection else tuple(range(min(args.dimension, 3)))
        if len(proj) == 1:
            proj = (0, 0)
        Path(args.plot).write_text(svg.render_portrait(portrait, proj))
        print(f"wrote plot to {args.plot}")


def cmd_maxima(args):
    maxima = successive_maxima(_ingest(args))
    path = write_series(_output(args, "maxima.txt"), maxima)
    print(f"wrote {maxima.length} maxima to {path}")
    if args.plot:
        Path(args.plot).write_text(svg.render_return_map(maxima.values))


def _analysis_config(args) -> AnalysisConfig:
    return AnalysisConfig(dimension=args.dimension, lag=args.lag, k=args.k,
                          test_fraction=args.test_fraction, n_surrogates=args.surrogates,
                          seed=args.seed, alpha=args.alpha,
                          probe_dimensions=tuple(args.probe_dims),
                          pair_budget=args.pair_budget,
                          fit_window=tuple(args.fit_window) if args.fit_window else None)


def cmd_analyze(args):
    series = _ingest(args)
    config = _analysis_config(args)
    report = analyze(series, config, workers=args.workers)
    out = _out_dir(args)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(emit_report(report))
    (out / "timings.json").write_text(emit_timings(report))
    if not args.no_plots:
        portrait = delay_embed(normalize(series), EmbeddingConfig(config.dimension, report.lag))
        if config.dimension >= 2:
            (out / "portrait_2d.svg").write_text(svg.render_portrait(portrait, (0, 1)))
        if config.dimension >= 3:
            (out / "portrait_3d.svg").write_text(svg.render_portrait(portrait, (0, 1, 2)))
        for curve in report.curves:
            (out / f"curve_m{curve.embedding_dimension}.svg").write_text(svg.render_curve(curve))
    v = report.verdict
    dim = "n/a" if v.dimension_estimate is None else f"{v.dimension_estimate:.4g}"
    print(f"{v.classification}: forecast p = {v.forecast_p:.4g}, "
          f"dimension = {dim}; report in {out / 'report.json'}")


def cmd_reproduce(args):
    from .figures import reproduce_figures

    out = _out_dir(args)
    summary = reproduce_figures(out, seed=args.seed, n=args.n,
                                analyses=not args.no_analyses, workers=args.workers)
    print(json.dumps({k: summary[k] for k in summary if k != "files"}, sort_keys=True))
    print(f"wrote {len(summary['files'])} files to {out}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="global random seed (default 0)")
    common.add_argument("--out-dir", default=None,
                        help=f"output directory (default ${OUTDIR_ENV} or .)")
    common.add_argument("--workers", type=int, default=1,
                        help="threads for pairwise kernels; results do not depend on it")

    reader = argparse.ArgumentParser(add_help=False)
    reader.add_argument("input", help="series file")
    reader.add_argument("--format", choices=FORMATS, default="auto")
    reader.add_argument("--dwell", choices=DWELL_SELECTIONS, default="all",
                        help="which on/off durations to keep for record input")

    out_file = argparse.ArgumentParser(add_help=False)
    out_file.add_argument("-o", "--output", default=None, help="output file")

    parser = argparse.ArgumentParser(
        prog="hiddenorder",
        description="Delay-embedding test for deterministic structure in event series.",
        formatter_class=argparse.RawDescriptionHelpFormatter, epilog=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common, out_file], help="write a synthetic series")
    p.add_argument("source", choices=SOURCES)
    p.add_argument("-n", type=int, default=10_000)
    p.add_argument("--x0", type=float, default=None,
                   help="initial value (logistic / chaos-masked: drawn from --seed if omitted)")
    p.add_argument("--y0", type=float, default=0.0)
    p.add_argument("--k", type=float, default=4.0, help="logistic parameter")
    p.add_argument("--a", type=float, default=1.4, help="Henon a")
    p.add_argument("--b", type=float, default=0.3, help="Henon b")
    p.add_argument("--component", default="x", choices=("x", "y", "z"))
    p.add_argument("--sigma", type=float, default=10.0)
    p.add_argument("--rho", type=float, default=28.0)
    p.add_argument("--beta", type=float, default=8.0 / 3.0)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--transient", type=int, default=1000)
    p.add_argument("--initial", type=float, nargs=3, default=(1.0, 1.0, 1.0))
    p.add_argument("--fringe-frequency", type=float, default=gen.SlitScreenModel.fringe_frequency)
    p.add_argument("--envelope-width", type=float, default=gen.SlitScreenModel.envelope_width)
    p.add_argument("--mask-method", choices=("value", "rank"), default="rank")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("corrupt", parents=[common, reader, out_file],
                       help="apply detector dropout and noise")
    p.add_argument("--dropout", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=0.0)
    p.set_defaults(func=cmd_corrupt)

    p = sub.add_parser("embed", parents=[common, reader, out_file],
                       help="write delay vectors as CSV")
    p.add_argument("-m", "--dimension", type=int, default=3)
    p.add_argument("--lag", type=_lag, default=1, help="integer or 'auto'")
    p.add_argument("--normalize", action="store_true", help="min-max normalize first")
    p.add_argument("--plot", default=None, help="also write an SVG portrait here")
    p.add_argument("--projection", type=int, nargs="+", default=None)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("maxima", parents=[common, reader, out_file],
                       help="successive local maxima of a flow observable")
    p.add_argument("--plot", default=None, help="also write the return map SVG here")
    p.set_defaults(func=cmd_maxima)

    p = sub.add_parser("analyze", parents=[common, reader],
                       help="classify a series and write report + plots")
    p.add_argument("-m", "--dimension", type=int, default=3)
    p.add_argument("--lag", type=_lag, default=1)
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--test-fraction", type=float, default=DEFAULT_TEST_FRACTION)
    p.add_argument("--surrogates", type=int, default=DEFAULT_SURROGATES)
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--probe-dims", type=int, nargs="+", default=[2, 3, 4])
    p.add_argument("--pair-budget", type=int, default=DEFAULT_PAIR_BUDGET)
    p.add_argument("--fit-window", type=int, nargs=2, default=None, metavar=("START", "STOP"),
                   help="manual scaling window (radius indices, half-open)")
    p.add_argument("--no-plots", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("reproduce-figures", parents=[common],
                       help="regenerate the figure analogues")
    p.add_argument("-n", type=int, default=10_000)
    p.add_argument("--no-analyses", action="store_true",
                   help="skip the full logistic / i.i.d. analyses")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except HiddenOrderError as exc:
        print(f"hiddenorder: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"hiddenorder: error: ValueError: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - last-resort single-line diagnostic
        print(f"hiddenorder: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
