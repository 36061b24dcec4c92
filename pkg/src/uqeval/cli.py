"""Command-line front end: ``uqeval evaluate|retention|synth``.

Exit codes: 0 success, 1 I/O or parse error, 2 validation error,
3 metric precondition error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from uqeval import synth
from uqeval.data import LlfuMode, validate_set
from uqeval.errors import UQEvalError
from uqeval.evaluate import EvalConfig, build_curve, evaluate_set, parse_measures
from uqeval.fileio import read_predictions, write_csv, write_curve, write_report
from uqeval.retention import CurveKind

log = logging.getLogger("uqeval")

_DEFAULTS = EvalConfig()


def _sidecar(path) -> Path:
    return Path(str(path) + ".synth.json")


def _add_metric_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="prediction file (.csv or .jsonl)")
    p.add_argument("--threshold", type=float, default=_DEFAULTS.threshold,
                   help="acceptability threshold tau on |error| for F1 retention")
    p.add_argument("--grid-size", type=int, default=_DEFAULTS.grid_size,
                   help="number of retention fractions, including 0 and 1")
    p.add_argument("--llfu-mode", choices=[m.value for m in LlfuMode],
                   default=_DEFAULTS.llfu_mode.value, help="LL-FU scoring mode")
    p.add_argument("--variance-floor", type=float, default=None,
                   help="floor applied to variances before LL-FU (off by default)")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(
        prog="uqeval",
        description="Uncertainty and shift-robustness metrics for regression predictions.",
        formatter_class=fmt,
    )
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="increase log verbosity")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("evaluate", formatter_class=fmt,
                        help="compute calibration and retention summaries as JSON")
    _add_metric_flags(ev)
    ev.add_argument("--measures", default="auto",
                    help="comma list from mvar,tvar,varm,epkl,llfu,variance; "
                         "'auto' picks every measure available for the ensemble size")
    ev.add_argument("--bins", type=int, default=_DEFAULTS.n_bins,
                    help="number of equal-count variance bins for ENCE")
    ev.add_argument("--label", default=None, help="dataset label (default: input file name)")
    ev.add_argument("--out", default="-", help="report path, '-' for stdout")

    rt = sub.add_parser("retention", formatter_class=fmt,
                        help="write retention curves as CSV")
    _add_metric_flags(rt)
    rt.add_argument("--curve", action="append", choices=[k.value for k in CurveKind],
                    default=None, help="curve kind; repeat for several (default: mse)")
    rt.add_argument("--measure", default=None,
                    help="ranking uncertainty measure (default: tvar, or variance for M=1)")
    rt.add_argument("--out", default="-",
                    help="CSV path for one curve, a directory for several, '-' for stdout")

    sy = sub.add_parser("synth", formatter_class=fmt,
                        help="generate a synthetic prediction file")
    d = synth.SynthConfig()
    sy.add_argument("--n", type=int, default=d.n, help="record count")
    sy.add_argument("--m", type=int, default=d.m, help="ensemble size")
    sy.add_argument("--seed", type=int, default=d.seed, help="64-bit generator seed")
    sy.add_argument("--sigma-lo", type=float, default=d.sigma_lo, help="lower bound of true noise sigma")
    sy.add_argument("--sigma-hi", type=float, default=d.sigma_hi, help="upper bound of true noise sigma")
    sy.add_argument("--miscalibration", type=float, default=d.miscalibration,
                    help="reported variance = c^2 * true variance")
    sy.add_argument("--shift-fraction", type=float, default=d.shift_fraction,
                    help="fraction of records with biased predictions")
    sy.add_argument("--shift-scale", type=float, default=d.shift_scale,
                    help="additive bias on shifted records' member means")
    sy.add_argument("--member-jitter", type=float, default=d.member_jitter,
                    help="std of member means around the latent mean")
    sy.add_argument("--latent-scale", type=float, default=d.latent_scale,
                    help="std of the latent target mean")
    sy.add_argument("--out", required=True, help="output CSV path")
    return parser


def _config(args) -> EvalConfig:
    return EvalConfig(
        n_bins=getattr(args, "bins", _DEFAULTS.n_bins),
        threshold=args.threshold,
        grid_size=args.grid_size,
        llfu_mode=args.llfu_mode,
        variance_floor=args.variance_floor,
    )


def _load(path):
    return validate_set(read_predictions(path))


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def run_evaluate(args) -> int:
    es = _load(args.input)
    measures = parse_measures(args.measures, es)
    echo = {}
    side = _sidecar(args.input)
    if side.exists():
        with open(side, encoding="utf-8") as fh:
            echo["seed"] = json.load(fh).get("seed")
    label = args.label if args.label is not None else Path(args.input).name
    report = evaluate_set(es, measures, _config(args), dataset=label, extra_echo=echo)
    _emit(write_report(report), args.out)
    log.info("wrote report for %d records, M=%d", len(es), es.member_count)
    return 0


def run_retention(args) -> int:
    es = _load(args.input)
    config = _config(args)
    measure = parse_measures(args.measure, es)[0] if args.measure else None
    kinds = list(dict.fromkeys(args.curve or [CurveKind.MSE.value]))
    curves = [build_curve(es, kind, measure, config) for kind in kinds]
    if len(curves) == 1:
        _emit(write_curve(curves[0]), args.out)
        return 0
    if args.out == "-":
        for kind, curve in zip(kinds, curves):
            sys.stdout.write(f"# curve={kind}\n" + write_curve(curve))
        return 0
    os.makedirs(args.out, exist_ok=True)
    for kind, curve in zip(kinds, curves):
        name = curve.measure.value if curve.measure else "default"
        _emit(write_curve(curve), os.path.join(args.out, f"{kind}_{name}.csv"))
    return 0


def run_synth(args) -> int:
    config = synth.SynthConfig(
        n=args.n,
        m=args.m,
        seed=args.seed,
        sigma_lo=args.sigma_lo,
        sigma_hi=args.sigma_hi,
        miscalibration=args.miscalibration,
        shift_fraction=args.shift_fraction,
        shift_scale=args.shift_scale,
        member_jitter=args.member_jitter,
        latent_scale=args.latent_scale,
    )
    es = synth.generate(config)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(write_csv(es))
    with open(_sidecar(args.out), "w", encoding="utf-8") as fh:
        json.dump(config.to_dict(), fh, indent=2)
        fh.write("\n")
    return 0


_COMMANDS = {"evaluate": run_evaluate, "retention": run_retention, "synth": run_synth}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return _COMMANDS[args.command](args)
    except UQEvalError as exc:
        print(f"uqeval {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, UnicodeDecodeError) as exc:
        print(f"uqeval {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
