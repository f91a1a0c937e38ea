"""Command-line interface.

Exit codes: 0 success, 1 failed validation, 2 configuration/usage error,
3 numeric domain error, 4 no threshold crossing within ``tau_max``.
"""
from __future__ import annotations

import argparse
import logging
import sys

from ..coherence import METHODS
from ..errors import ConfigError, DomainError, NoCrossingError, ScenarioError
from .config import FULL_SCALE_TRIALS, default_config, load_config, with_overrides
from .figures import coherence_for_config, correlation_table, run_figure
from .validation import run_checks

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_DOMAIN, EXIT_NO_CROSSING = 0, 1, 2, 3, 4


def _common():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="scenario TOML file (default: built-in profile)")
    common.add_argument("--seed", type=int, help="Monte Carlo seed (overrides config and $EMCOHERENCE_SEED)")
    common.add_argument("--trials", type=int, help="Monte Carlo trials (overrides config and $EMCOHERENCE_TRIALS)")
    common.add_argument("--paper-scale", action="store_true", help=f"use {FULL_SCALE_TRIALS} trials")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=["csv"], default="csv")
    common.add_argument("--workers", type=int, default=1, help="threads for Monte Carlo trials")
    common.add_argument("-v", "--verbose", action="store_true")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="emcoherence", description="EM coherence time of mobile LoS channels")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("correlate", parents=[common], help="emit the R(tau) curve as CSV")
    p.set_defaults(profile="turning")

    p = sub.add_parser("coherence", parents=[common], help="coherence time of one scenario (key=value lines)")
    p.add_argument("--method", choices=METHODS, help="default: closed form matching the motion type")
    p.set_defaults(profile="turning")

    p = sub.add_parser("figure", parents=[common], help="figure reproduction sweep as CSV")
    p.add_argument("number", choices=["3", "4", "5"])

    sub.add_parser("validate", parents=[common], help="run the built-in invariant checks")
    return parser


def _load(args, profile):
    cfg = load_config(args.config) if args.config else default_config(profile)
    trials = FULL_SCALE_TRIALS if args.paper_scale and args.trials is None else args.trials
    if args.seed is not None and args.seed < 0:
        raise ConfigError("--seed", "must be non-negative")
    if trials is not None and trials < 1:
        raise ConfigError("--trials", "must be >= 1")
    return with_overrides(cfg, seed=args.seed, trials=trials)


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dispatch(args) -> int:
    if args.command == "validate":
        failed = 0
        lines = []
        for name, ok, detail in run_checks(seed=args.seed or 0):
            failed += not ok
            lines.append(f"{'PASS' if ok else 'FAIL'} {name}: {detail}\n")
        _emit("".join(lines), args.out)
        return EXIT_VALIDATION if failed else EXIT_OK

    if args.command == "figure":
        cfg = _load(args, args.number)
        _emit(run_figure(args.number, cfg, args.workers).to_csv(), args.out)
        return EXIT_OK

    cfg = _load(args, args.profile)
    if args.command == "correlate":
        _emit(correlation_table(cfg, args.workers).to_csv(), args.out)
    else:
        result = coherence_for_config(cfg, args.method, args.workers)
        _emit("".join(line + "\n" for line in result.as_lines()), args.out)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NoCrossingError as exc:
        print(f"no crossing: {exc}", file=sys.stderr)
        return EXIT_NO_CROSSING
    except (DomainError, ScenarioError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
