"""Command-line entry point.

Subcommands: ctim, jtim, intersect, per-seed (experiment protocols, each
driven by a config file) and verify (counterexample fixture suite).  Exit
codes: 0 success, 1 config error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, load_config
from .harness import run_ctim, run_intersections, run_jtim, run_per_seed
from .oracle import check_counterexamples


def _add_common(sub):
    sub.add_argument("--config", required=True, help="experiment config file")
    sub.add_argument("--out", default=None, help="output directory (default from config)")
    sub.add_argument("--threads", type=int, default=1, help="parallel workers")


def build_parser():
    parser = argparse.ArgumentParser(prog="tltim")
    subs = parser.add_subparsers(dest="command", required=True)
    for name in ("ctim", "jtim", "intersect", "per-seed"):
        _add_common(subs.add_parser(name))
    subs.add_parser("verify", help="run the counterexample fixture suite")
    return parser


_RUNNERS = {
    "ctim": run_ctim,
    "jtim": run_jtim,
    "intersect": run_intersections,
    "per-seed": run_per_seed,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        report = check_counterexamples()
        print(report)
        return 0 if report.passed else 2
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 1
    try:
        cfg = load_config(args.config)
        path = _RUNNERS[args.command](cfg, out_dir=args.out, threads=args.threads)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
