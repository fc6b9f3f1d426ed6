"""Command-line interface: ``msforecast {detect,fit,forecast,simulate,benchmark}``.

Series files are single-column CSVs; ``-`` means stdin/stdout. Human-facing
tables use 6 significant digits, CSV and JSON outputs keep full precision.
"""

from __future__ import annotations

import argparse
import logging
import sys
from contextlib import contextmanager

import numpy as np

from . import __version__
from .bench import BenchProtocol, format_table, reports_json, run_benchmark
from .core import MSError, center, read_csv, write_csv
from .forecast import predict
from .selection import CRITERIA, FittedModel, MsConfig, candidate_sets, select_model
from .simgen import SetupKind, SimSetup, gen_setup

log = logging.getLogger("msforecast")


@contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _read_series(path):
    return read_csv(sys.stdin if path in (None, "-") else path)


def _add_model_flags(p: argparse.ArgumentParser, r_required=True):
    p.add_argument("--r", type=int, required=r_required,
                   help="number of seasonal components in the model (0 = plain ARMA)")
    p.add_argument("--tau", type=int, default=6, help="lags per seasonal set")
    p.add_argument("--max-p", type=int, default=3, help="largest AR order searched")
    p.add_argument("--max-q", type=int, default=3, help="largest MA order searched")
    p.add_argument("--criterion", choices=CRITERIA, default="BC", type=str.upper,
                   help="information criterion used for selection")
    p.add_argument("--min-lag", type=int, default=None,
                   help="seasonal lags must exceed this (default max(max-p, max-q))")
    p.add_argument("--max-lag", type=int, default=None,
                   help="largest seasonal lag allowed (default floor(N/2))")
    p.add_argument("--allow-fewer", action="store_true",
                   help="also search subsets with fewer than r seasonal sets, down to none")
    p.add_argument("--grad-tol", type=float, default=1e-6,
                   help="BFGS stops when |grad|_inf < grad-tol * (1 + |sse|)")
    p.add_argument("--max-iter", type=int, default=500, help="BFGS iteration limit")
    p.add_argument("--seed", type=int, default=0, help="seed for every stochastic component")


def _config(args, center_flag) -> MsConfig:
    return MsConfig(
        r=args.r,
        tau=args.tau,
        p_max=args.max_p,
        q_max=args.max_q,
        criterion=args.criterion,
        min_period=args.min_lag,
        max_period=args.max_lag,
        allow_fewer=args.allow_fewer,
        center=center_flag,
        grad_tol=args.grad_tol,
        max_iter=args.max_iter,
        seed=args.seed,
    )


def cmd_detect(args) -> int:
    cfg = _config(args, args.center)
    series = _read_series(args.input)
    if cfg.r == 0:
        raise MSError("detect needs r >= 1")
    if cfg.center:
        series, _ = center(series)
    sets = candidate_sets(series, cfg)
    with _open_out(args.output) as out:
        out.write(f"{'rank':>4} {'period':>7} {'lags':>11} {'freq':>6} {'power':>12}\n")
        for rank, s in enumerate(sets, start=1):
            out.write(
                f"{rank:>4} {s.center:>7} {f'{s.lo}..{s.hi}':>11} {s.freq:>6} {s.power:>12.6g}\n"
            )
    return 0


def cmd_fit(args) -> int:
    cfg = _config(args, args.center)
    series = _read_series(args.input)
    best, board = select_model(series, cfg, jobs=args.jobs)
    with _open_out(args.output) as out:
        out.write(best.to_json())
    if args.leaderboard:
        with _open_out(args.leaderboard) as out:
            out.write("rank,p,q,lag_sets,k,sse,criterion\n")
            for rank, m in enumerate(board, start=1):
                sets = " ".join(f"{s.lo}-{s.hi}" for s in m.spec.lag_sets)
                out.write(f"{rank},{m.spec.p},{m.spec.q},{sets},{m.k},{m.sse!r},{m.criterion_value!r}\n")
    if board.failures:
        log.warning("%d specs failed to fit", len(board.failures))
    return 0


def cmd_forecast(args) -> int:
    with open(args.model) as fh:
        model = FittedModel.from_json(fh.read())
    series = _read_series(args.input)
    res = predict(series, model, args.horizon)
    with _open_out(args.output) as out:
        write_csv(out, {"step": np.arange(1, res.horizon + 1), "forecast": res.predictions})
    return 0


def cmd_simulate(args) -> int:
    sim = gen_setup(SimSetup(args.kind, args.n, seed=args.seed, stream=args.stream))
    cols = {"x": sim.series.values}
    if args.components:
        cols.update(sim.components)
    with _open_out(args.output) as out:
        write_csv(out, cols)
    return 0


def cmd_benchmark(args) -> int:
    cfg = _config(args, not args.no_center)
    if args.full_scale:
        proto = BenchProtocol.full_scale(cfg, seed=args.seed)
    else:
        proto = BenchProtocol(cfg, sequences=args.sequences, evaluations=args.evaluations, seed=args.seed)
    reports = [run_benchmark(args.kind, proto, jobs=args.jobs)]
    if args.baseline and cfg.r > 0:
        base = BenchProtocol(**{**proto.__dict__, "config": MsConfig(**{**cfg.__dict__, "r": 0})})
        reports.append(run_benchmark(args.kind, base, jobs=args.jobs))
    with _open_out(args.output) as out:
        out.write(f"setup: {SetupKind(args.kind).value}\n")
        out.write(format_table(reports) + "\n")
        missing = sum(r.n_missing for r in reports)
        if missing:
            out.write(f"failed cells: {missing}\n")
    if args.json:
        with _open_out(args.json) as out:
            out.write(reports_json(reports))
    return 0


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(
        prog="msforecast",
        description="Forecast series with multiple unknown seasonal periods.",
        formatter_class=fmt,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="list seasonal candidates found in the spectrum", formatter_class=fmt)
    p.add_argument("--input", default="-", help="series CSV")
    p.add_argument("--output", default="-", help="where to write the table")
    p.add_argument("--center", action="store_true", help="subtract the sample mean first")
    _add_model_flags(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("fit", help="select and fit a model, write it as JSON", formatter_class=fmt)
    p.add_argument("--input", default="-", help="series CSV")
    p.add_argument("--output", default="-", help="fitted-model JSON")
    p.add_argument("--center", action="store_true", help="subtract the sample mean before fitting")
    p.add_argument("--leaderboard", default=None, help="also write every scored spec to this CSV")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for the grid search")
    _add_model_flags(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("forecast", help="predict ahead with a fitted model", formatter_class=fmt)
    p.add_argument("--model", required=True, help="fitted-model JSON from `fit`")
    p.add_argument("--input", default="-", help="series CSV the model conditions on")
    p.add_argument("--horizon", type=int, required=True, help="number of steps ahead")
    p.add_argument("--output", default="-", help="forecast CSV (step, forecast)")
    p.set_defaults(func=cmd_forecast)

    p = sub.add_parser("simulate", help="generate a synthetic seasonal series", formatter_class=fmt)
    p.add_argument("--kind", choices=[k.value for k in SetupKind], required=True)
    p.add_argument("--n", type=int, default=1000, help="series length")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.add_argument("--stream", type=int, default=0, help="independent stream index under the seed")
    p.add_argument("--components", action="store_true", help="also write the individual components")
    p.add_argument("--output", default="-", help="series CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("benchmark", help="rolling-origin CMSE evaluation", formatter_class=fmt)
    p.add_argument("--kind", choices=[k.value for k in SetupKind], required=True)
    p.add_argument("--sequences", type=int, default=10, help="simulated sequences")
    p.add_argument("--evaluations", type=int, default=10, help="rolling origins per sequence")
    p.add_argument("--full-scale", action="store_true",
                   help="30 sequences x 50 evaluations with 5-step origin increments")
    p.add_argument("--baseline", action="store_true", help="add the plain ARMA (r=0) column")
    p.add_argument("--no-center", action="store_true", help="fit raw training data")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--output", default="-", help="where to write the table")
    p.add_argument("--json", default=None, help="also write the machine-readable report here")
    _add_model_flags(p)
    p.set_defaults(func=cmd_benchmark)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (MSError, OSError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"msforecast: error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
