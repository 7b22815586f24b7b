"""Command-line entry point: ``hankelspec <verb> [flags]``.

Exit codes: 0 on success, 2 on usage errors, 1 on runtime errors.
"""
from __future__ import annotations

import argparse
import logging
import sys
import warnings

from .experiments import (ExperimentConfig, UsageError, cmd_bounds, cmd_experiment, cmd_hankel, cmd_learn,
                          cmd_moments, cmd_sample)
from .wfa import MODES

log = logging.getLogger("hankelspec")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--model", help="model file in 'wfa v1' format")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", help="output path (stdout for CSV reports when omitted)")
    g.add_argument("--mode", choices=MODES, default="standard")
    g.add_argument("--eta", type=float, default=0.0)
    g.add_argument("--l", type=int, default=None, help="max string length of both bases")
    g.add_argument("--lu", type=int, default=None, help="max string length of the row basis")
    g.add_argument("--lv", type=int, default=None, help="max string length of the column basis")
    g.add_argument("--n", type=int, default=20000, help="sample size")
    g.add_argument("--trials", type=int, default=1)
    g.add_argument("--delta", type=float, default=0.05)
    g.add_argument("--rank", type=int, default=None)
    g.add_argument("--exact", action="store_true", help="learn from the model's exact Hankel")
    g.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="hankelspec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    b = sub.add_parser("bounds", parents=[common], help="concentration bound values as CSV")
    b.add_argument("--s1", type=float, help="first moment of the mode-η series")
    b.add_argument("--s2", type=float, help="second moment of the mode-η series")
    b.add_argument("--baseline-m", type=float, help="almost-sure norm bound M for the baseline row")
    b.add_argument("--baseline-d", type=int, help="matrix dimension d for the baseline row")

    e = sub.add_parser("experiment", parents=[common], help="sample, measure ||H_S - H||_2, compare to bounds")
    e.add_argument("--baseline-m", type=float)
    e.add_argument("--baseline-d", type=int)

    ln = sub.add_parser("learn", parents=[common], help="spectral learning; writes model and metrics")
    ln.add_argument("--sample", help="sample file (otherwise sampled from --model)")
    ln.add_argument("--metrics", help="metrics CSV path (default: <out>.metrics.csv)")
    ln.add_argument("--eval-len", type=int, default=6, help="max length for the L1 distance")

    sub.add_parser("sample", parents=[common], help="draw strings from a PFA model")

    h = sub.add_parser("hankel", parents=[common], help="export an empirical Hankel as a coordinate list")
    h.add_argument("--sample", help="sample file (otherwise sampled from --model)")

    m = sub.add_parser("moments", parents=[common], help="exact moments S^(k) of a model")
    m.add_argument("--k", type=int, nargs="+", default=[1, 2, 3])
    return parser


def config_from_args(args) -> ExperimentConfig:
    default_l = 4 if args.l is None else args.l
    return ExperimentConfig(
        model=args.model, mode=args.mode, eta=args.eta,
        l_u=default_l if args.lu is None else args.lu,
        l_v=default_l if args.lv is None else args.lv,
        n=args.n, trials=args.trials, delta=args.delta, seed=args.seed, rank=args.rank, out=args.out,
        exact=args.exact, s1=getattr(args, "s1", None), s2=getattr(args, "s2", None),
        baseline_m=getattr(args, "baseline_m", None), baseline_d=getattr(args, "baseline_d", None),
        sample=getattr(args, "sample", None), metrics=getattr(args, "metrics", None),
        eval_len=getattr(args, "eval_len", 6), moments_k=getattr(args, "k", [1, 2, 3]),
    )


def run(args) -> int:
    cfg = config_from_args(args)
    if args.verb == "bounds":
        text = cmd_bounds(cfg)
    elif args.verb == "experiment":
        text = cmd_experiment(cfg)
    elif args.verb == "learn":
        _, text = cmd_learn(cfg)
        if cfg.out or cfg.metrics:
            text = None
    elif args.verb == "sample":
        strings = cmd_sample(cfg)
        text = None if cfg.out else "".join(" ".join(w) + "\n" for w in strings)
    elif args.verb == "hankel":
        h = cmd_hankel(cfg)
        summary = f"hankel {h.mode} {float(h.eta)!r} {h.shape[0]} {h.shape[1]} {h.sample_size} nnz={h.matrix.nnz}\n"
        text = None if cfg.out else summary
    else:
        text = cmd_moments(cfg)
    if text is not None and not (cfg.out and args.verb in ("bounds", "experiment", "moments")):
        sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = lambda msg, *a, **k: log.warning("%s", msg)
            return run(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"hankelspec: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, OSError, RuntimeError, KeyError) as exc:
        print(f"hankelspec: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
