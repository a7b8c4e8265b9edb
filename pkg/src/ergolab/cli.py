"""Command-line front end.

One experiment per invocation.  Ad-hoc subcommands (build, correlate,
rigidity, ledrapier, cesaro, gauss, poisson) assemble a config from flags;
`experiment <name>` runs a named experiment, optionally from a JSON config
file.  Reports are written atomically; a failed run leaves no partial file.

Exit codes: 0 all checks passed, 1 a statistical or certified check failed,
2 config or schema violation, 3 construction depth exhausted.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .experiments import (
    ConfigError,
    default_config,
    describe_experiments,
    run_experiment,
)
from .reports import write_report_json, write_rows_csv
from .tower import (
    ConstructionExhaustedError,
    GenerationError,
    InsufficientDepthError,
)

_DEPTH_ERRORS = (ConstructionExhaustedError, InsufficientDepthError, GenerationError)


def _int_list(text: str) -> list:
    try:
        return [int(part) for part in text.split(",") if part != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}")


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=None, help="base seed (default 0)")
    sub.add_argument("--out", default=None, help="write the JSON report here")
    sub.add_argument("--csv", default=None, help="also write result rows as CSV")
    sub.add_argument(
        "--jobs", type=int, default=1, help="worker cap for Monte-Carlo batches"
    )


def _add_construction_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--construction",
        choices=["chacon", "odometer", "staircase", "theorem6"],
        default=None,
    )
    sub.add_argument("--r", type=int, default=None, help="odometer branching")
    sub.add_argument("--role", choices=["t", "s"], default=None)
    sub.add_argument(
        "--spec-file", default=None, help="JSON file with explicit stage data"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ergolab",
        description="exact rank-one towers, GF(2) shift events, operator "
        "averages, and suspension simulators",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build tower stages, verify the recurrence")
    _add_construction_flags(p)
    p.add_argument("--depth", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("correlate", help="exact correlation interval for one shift")
    _add_construction_flags(p)
    p.add_argument("--n", type=int, required=True)
    for prefix in ("a", "b"):
        p.add_argument(f"--{prefix}-stage", type=int, default=None)
        p.add_argument(f"--{prefix}-lo", type=int, default=None)
        p.add_argument(f"--{prefix}-hi", type=int, default=None)
    p.add_argument("--depth", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("rigidity", help="classify shifts against a level set")
    _add_construction_flags(p)
    p.add_argument("--a-stage", type=int, default=None)
    p.add_argument("--a-levels", type=_int_list, default=None)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--theta", type=float, default=None)
    _add_common(p)

    p = sub.add_parser("ledrapier", help="exact GF(2) cylinder measure table")
    p.add_argument("--k-max", type=int, default=None)
    p.add_argument("--generic-pairs", type=int, default=None)
    p.add_argument("--generic-seed", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("cesaro", help="conjugation defect against its majorants")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--plane", type=_int_list, default=None, metavar="I,J")
    p.add_argument("--angle", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--vector-seed", type=int, default=None)
    p.add_argument("--ns", type=_int_list, default=None)
    _add_common(p)

    p = sub.add_parser("gauss", help="Hermite correlations of the Gaussian model")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--degrees", type=_int_list, default=None)
    p.add_argument("--shifts", type=_int_list, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--n-batches", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("poisson", help="suspension count covariances vs exact")
    p.add_argument("--window-stage", type=int, default=None)
    p.add_argument("--window-size", type=int, default=None)
    p.add_argument("--depth", type=int, default=None)
    for prefix in ("a", "b"):
        p.add_argument(f"--{prefix}-stage", type=int, default=None)
        p.add_argument(f"--{prefix}-lo", type=int, default=None)
        p.add_argument(f"--{prefix}-hi", type=int, default=None)
    p.add_argument("--ns", type=_int_list, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--n-batches", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("experiment", help="run a named experiment")
    p.add_argument("name")
    p.add_argument("--config", default=None, help="JSON ExperimentConfig file")
    _add_common(p)

    sub.add_parser("list-experiments", help="catalogue of named experiments")

    return parser


_FLAG_PARAMS = {
    "build": ["construction", "r", "role", "depth"],
    "correlate": [
        "construction", "r", "role", "n", "depth",
        "a_stage", "a_lo", "a_hi", "b_stage", "b_lo", "b_hi",
    ],
    "rigidity": [
        "construction", "r", "role", "a_stage", "a_levels",
        "n_max", "depth", "theta",
    ],
    "ledrapier": ["k_max", "generic_pairs", "generic_seed"],
    "cesaro": ["dim", "plane", "angle", "delta", "vector_seed", "ns"],
    "gauss": ["dim", "degrees", "shifts", "samples", "n_batches"],
    "poisson": [
        "window_stage", "window_size", "depth",
        "a_stage", "a_lo", "a_hi", "b_stage", "b_lo", "b_hi",
        "ns", "samples", "n_batches",
    ],
}

_COMMAND_EXPERIMENT = {"rigidity": "rigidity-scan", "cesaro": "eq1-sweep"}


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: {exc}") from None


def _config_from_args(args: argparse.Namespace) -> dict:
    if args.command == "experiment":
        if args.config is not None:
            config = _load_json(args.config)
            if not isinstance(config, dict):
                raise ConfigError("config file must hold a JSON object")
            declared = config.get("experiment")
            if declared is not None and declared != args.name:
                raise ConfigError(
                    f"config declares experiment {declared!r}, "
                    f"command line says {args.name!r}"
                )
            config["experiment"] = args.name
        else:
            config = default_config(args.name)
    else:
        params = {}
        for key in _FLAG_PARAMS[args.command]:
            value = getattr(args, key)
            if value is not None:
                params[key] = value
        if "spec_file" in vars(args) and args.spec_file is not None:
            params.pop("construction", None)
            params["spec"] = _load_json(args.spec_file)
        config = {
            "experiment": _COMMAND_EXPERIMENT.get(args.command, args.command),
            "params": params,
        }
    if args.seed is not None:
        config["seed"] = args.seed
    env_seed = os.environ.get("ERGOLAB_SEED")
    if env_seed is not None:
        try:
            config["seed"] = int(env_seed)
        except ValueError:
            raise ConfigError(f"ERGOLAB_SEED is not an integer: {env_seed!r}")
    return config


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.command == "list-experiments":
        for name, description in describe_experiments():
            print(f"{name:15s} {description}")
        return 0

    try:
        config = _config_from_args(args)
        report = run_experiment(config, jobs=max(1, args.jobs))
    except ConfigError as exc:
        print(f"ergolab: config error: {exc}", file=sys.stderr)
        return 2
    except _DEPTH_ERRORS as exc:
        module = type(exc).__module__
        print(
            f"ergolab: construction exhausted in {module} "
            f"({type(exc).__name__}): {exc}",
            file=sys.stderr,
        )
        return 3

    out_path = args.out or report.config.get("out")
    csv_path = args.csv or report.config.get("csv")
    if out_path:
        write_report_json(report, out_path)
    if csv_path:
        write_rows_csv(report.rows, csv_path)

    print(f"experiment: {report.experiment} (ergolab {report.version})")
    print(f"rows: {len(report.rows)}")
    for entry in report.checks:
        mark = "PASS" if entry["passed"] else "FAIL"
        detail = f"  [{entry['detail']}]" if entry.get("detail") else ""
        print(f"{mark}  {entry['name']}{detail}")
    for note in report.notes:
        print(f"note: {note}")
    if out_path:
        print(f"report written to {out_path}")
    if csv_path:
        print(f"rows written to {csv_path}")
    passed = sum(1 for c in report.checks if c["passed"])
    print(f"result: {'PASS' if report.all_passed else 'FAIL'} "
          f"({passed}/{len(report.checks)} checks)")
    return 0 if report.all_passed else 1


if __name__ == "__main__":
    sys.exit(main())
