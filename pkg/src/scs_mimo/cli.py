"""Command-line front end.

Subcommands mirror the three experiments plus `validate`. Exit codes:
0 success, 1 configuration error, 2 numerical-contract violation.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .errors import ConfigError, NumericalContractError
from .experiments import (
    ExperimentConfig,
    run_capacity,
    run_eigen_cdf,
    run_moments,
    verify_embedded_hash,
)
from .validation import run_validation

_RUNNERS = {
    "moments": run_moments,
    "eigen-cdf": run_eigen_cdf,
    "capacity": run_capacity,
}
_DEFAULT_OUTPUT = {
    "moments": "moments.csv",
    "eigen-cdf": "eigen_cdf.csv",
    "capacity": "capacity.csv",
}


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON experiment configuration file")
    parser.add_argument("--seed", type=int, help="override the RNG seed")
    parser.add_argument("--trials", type=int, help="override trials per sweep point")
    parser.add_argument("--out", help="output file path")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--threads", type=int, help="worker threads (default: up to 4)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scs-mimo",
        description="Sparse massive-MIMO channel moments, conditioning, and capacity.",
    )
    parser.add_argument("--version", action="version", version=f"scs-mimo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("moments", "simulated vs analytical inner-product moments over (M, d)"),
        ("eigen-cdf", "empirical CDFs of the extreme eigenvalues of G G*"),
        ("capacity", "mean per-user capacity against antenna spacing"),
    ):
        _add_common_flags(sub.add_parser(name, help=help_text))

    validate = sub.add_parser("validate", help="run the fast invariant suite")
    validate.add_argument("--config", help="JSON experiment configuration file")
    validate.add_argument("--seed", type=int, default=0)
    validate.add_argument(
        "--check",
        nargs="*",
        default=(),
        metavar="RESULT_FILE",
        help="also re-derive and verify the config hash embedded in result files",
    )
    return parser


def _load_config(args, experiment: str) -> ExperimentConfig:
    if args.config:
        cfg = ExperimentConfig.from_file(args.config, experiment=experiment)
    else:
        cfg = ExperimentConfig.from_dict({}, experiment=experiment)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.out is not None:
        overrides["output"] = args.out
    if args.threads is not None:
        overrides["threads"] = args.threads
    if overrides:
        from dataclasses import replace

        cfg = replace(cfg, **overrides)
    return cfg


def _run_experiment(args) -> int:
    cfg = _load_config(args, args.command)
    table = _RUNNERS[args.command](cfg)
    out = cfg.output or _DEFAULT_OUTPUT[args.command]
    table.write(out, args.format)
    print(f"{args.command}: wrote {len(table.rows)} rows to {out}")
    return 0


def _run_validate(args) -> int:
    for path in args.check:
        verify_embedded_hash(path)
        print(f"hash ok: {path}")
    results = run_validation(args.seed)
    failed = 0
    for name, ok, detail in results:
        status = "PASS" if ok else "FAIL"
        print(f"[{status}] {name}: {detail}")
        failed += 0 if ok else 1
    if failed:
        raise NumericalContractError(f"{failed} invariant check(s) failed")
    print(f"validate: all {len(results)} checks passed")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            return _run_validate(args)
        return _run_experiment(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except NumericalContractError as exc:
        print(f"numerical contract violation: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
