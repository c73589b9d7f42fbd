"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 input/data error,
3 numeric or estimation failure.
"""
from __future__ import annotations

import argparse
import csv
import io as stdio
import json
import math
import sys

import numpy as np

from . import io as rio
from . import theory
from .errors import (DegenerateSeriesError, EstimationError, NumericError, ParameterError,
                     RcarError, SpecError)
from .mc import ExperimentSpec, noise_probe, run_experiment
from .model import InnovationSpec, simulate_panel
from .pipeline import estimate_exact, estimate_noisy, panel_coefficients
from .tailest import confidence_interval, long_memory_test

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _unit_interval(name):
    def conv(text):
        v = float(text)
        if not 0.0 < v < 1.0:
            raise argparse.ArgumentTypeError(f"{name} must lie in (0, 1)")
        return v
    return conv


def _above_one(text):
    v = float(text)
    if not v > 1.0:
        raise argparse.ArgumentTypeError("must exceed 1")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rcartail", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("simulate", help="simulate a panel from a JSON PanelConfig")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--keep-truth", action="store_true", help="store true coefficients in the sidecar")

    for name, helptext in (("estimate", "estimate the tail index of a panel"),
                           ("test", "test H0: beta >= 2 against long memory")):
        e = sub.add_parser(name, help=helptext)
        e.add_argument("--panel", required=True)
        g = e.add_mutually_exclusive_group()
        g.add_argument("--epsilon", type=_unit_interval("epsilon"))
        g.add_argument("--delta", type=_unit_interval("delta"))
        e.add_argument("--r", type=_above_one, default=10.0)
        e.add_argument("--exact", action="store_true",
                       help="use the true coefficients from the sidecar instead of autocorrelations")
        e.add_argument("--out")
        if name == "estimate":
            e.add_argument("--level", type=_unit_interval("level"), default=0.95)
        else:
            e.add_argument("--omega", type=_unit_interval("omega"), default=0.05)

    t = sub.add_parser("theory", help="closed-form model quantities as CSV")
    t.add_argument("what", choices=("constants", "acf", "spectrum"))
    t.add_argument("--alpha", type=float, required=True)
    t.add_argument("--beta", type=float, required=True)
    t.add_argument("--tmax", type=_nonneg_int, default=50)
    t.add_argument("--npoints", type=_positive_int, default=200)
    t.add_argument("--lambda-min", type=float, default=None)
    t.add_argument("--out")

    x = sub.add_parser("experiment", help="run a Monte Carlo experiment")
    x.add_argument("--spec", required=True)
    x.add_argument("--out", required=True)
    x.add_argument("--threads", type=_nonneg_int, default=1, help="worker processes, 0 = all CPUs")
    x.add_argument("--seed", type=int, default=None, help="override master_seed from the spec file")
    x.add_argument("--quiet", action="store_true")

    q = sub.add_parser("probe", help="empirical P(|a_hat - a| > eps) across series lengths")
    q.add_argument("--alpha", type=float, required=True)
    q.add_argument("--beta", type=float, required=True)
    q.add_argument("--T", type=_positive_int, nargs="+", required=True)
    q.add_argument("--eps", type=float, default=0.1)
    q.add_argument("--reps", type=_positive_int, default=5000)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--dist", default="gaussian")
    q.add_argument("--out")
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj, out: str | None) -> None:
    _emit(json.dumps(obj, indent=2) + "\n", out)


def _csv_text(header, rows) -> str:
    buf = stdio.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _panel_estimate(args):
    if args.exact:
        meta = rio.read_sidecar(args.panel)
        if meta is None or "true_coeffs" not in meta:
            raise rio.FormatError("--exact needs a sidecar with true_coeffs (simulate --keep-truth)")
        x = np.asarray(meta["true_coeffs"], dtype=float)
        return estimate_exact(x, epsilon=args.epsilon or 0.9, delta=args.delta)
    values = rio.read_panel_csv(args.panel)
    return estimate_noisy(panel_coefficients(values), epsilon=args.epsilon or 0.9,
                          r=args.r, delta=args.delta)


def cmd_simulate(args) -> int:
    cfg = rio.read_panel_config(args.config)
    panel = simulate_panel(cfg, keep_truth=args.keep_truth)
    rio.write_panel_csv(panel, args.out)
    return EXIT_OK


def cmd_estimate(args) -> int:
    est, choice = _panel_estimate(args)
    lo, hi = confidence_interval(est, args.level)
    _emit_json({"estimate": est.to_dict(),
                "threshold": choice.to_dict() if choice else None,
                "confidence_interval": {"level": args.level, "lower": lo, "upper": hi}}, args.out)
    return EXIT_OK


def cmd_test(args) -> int:
    est, _ = _panel_estimate(args)
    _emit_json(long_memory_test(est, args.omega).to_dict(), args.out)
    return EXIT_OK


def cmd_theory(args) -> int:
    a, b = args.alpha, args.beta
    if args.what == "constants":
        k = theory.beta_model_constants(a, b)
        rows = [("kappa", k.kappa), ("nu", k.nu), ("tau", k.tau), ("rho", k.rho),
                ("b_const", k.b_const), ("g1", k.g1), ("d", k.memory_parameter),
                ("acf_tail_constant", theory.autocovariance_tail_constant(a, b))]
        text = _csv_text(("name", "value"), rows)
    elif args.what == "acf":
        ts = np.arange(args.tmax + 1)
        vals = np.atleast_1d(theory.autocovariance(a, b, ts))
        text = _csv_text(("t", "value"), zip(ts.tolist(), vals.tolist()))
    else:
        lo = args.lambda_min if args.lambda_min is not None else math.pi / args.npoints
        if not 0 < lo <= math.pi:
            raise UsageError("--lambda-min must lie in (0, pi]")
        grid = np.linspace(lo, math.pi, args.npoints)
        text = _csv_text(("lambda", "value"),
                         ((float(l), theory.spectral_density(a, b, float(l))) for l in grid))
    _emit(text, args.out)
    return EXIT_OK


def cmd_experiment(args) -> int:
    with open(args.spec) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecError(f"{args.spec}: invalid JSON ({exc})") from None
    if args.seed is not None:
        d["master_seed"] = args.seed
    spec = ExperimentSpec.from_dict(d)
    report = run_experiment(spec, parallelism=args.threads, progress=not args.quiet)
    report.write(args.out)
    return EXIT_OK


def cmd_probe(args) -> int:
    res = noise_probe(args.alpha, args.beta, args.T, args.eps, args.reps, args.seed,
                      InnovationSpec(dist=args.dist))
    text = _csv_text(("T", "probability", "std_error"),
                     ((r["T"], r["probability"], r["std_error"]) for r in res))
    _emit(text, args.out)
    return EXIT_OK


COMMANDS = {"simulate": cmd_simulate, "estimate": cmd_estimate, "test": cmd_test,
            "theory": cmd_theory, "experiment": cmd_experiment, "probe": cmd_probe}


def run_cli(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"rcartail: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EstimationError, NumericError) as exc:
        print(f"rcartail: estimation failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, SpecError, ParameterError, DegenerateSeriesError, KeyError,
            RcarError) as exc:
        print(f"rcartail: input error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
