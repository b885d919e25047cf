"""Command line entry point: ``seqgini estimate | simulate | oracle``.

Reports go to stdout; the resolved configuration and diagnostics go to
stderr. Exit codes:

    0  success
    2  usage error (bad or unknown flags)
    3  source exhausted before the stopping rule was met
    4  unreadable or invalid input data
    5  Gini index undefined (zero sample mean)
    6  n_max reached without stopping
    7  invalid configuration (bad parameters, missing moments)
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

from .errors import (
    CapExceededError,
    InvalidObservationError,
    MomentExistenceError,
    ParseError,
    SourceExhaustedError,
    UndefinedGiniError,
)
from .harness import ExperimentConfig, ReplicationError, format_report, run_experiment
from .oracle import true_params
from .sequential import DEFAULT_N_MAX, StoppingConfig, run_sequential
from .sources import FAMILIES, REFERENCE_SPECS, DistributionSpec, open_file_source

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_EXHAUSTED = 3
EXIT_DATA = 4
EXIT_UNDEFINED = 5
EXIT_CAP = 6
EXIT_CONFIG = 7


def _echo_config(cfg: dict) -> None:
    print("# config: " + json.dumps(cfg, sort_keys=True), file=sys.stderr)


def _spec(family: str, params) -> DistributionSpec:
    if params:
        return DistributionSpec(family, tuple(params))
    if family not in REFERENCE_SPECS:
        raise ValueError(f"family {family!r} has no default parameters; pass --params")
    return DistributionSpec.reference(family)


def cmd_estimate(args) -> int:
    config = StoppingConfig(args.alpha, args.d, args.n_max)
    _echo_config(
        {
            "command": "estimate",
            "input": args.input,
            "header": args.header,
            "alpha": config.alpha,
            "d": config.d,
            "z": config.z,
            "m": config.m,
            "n_max": config.n_max,
            "trace": args.trace,
            "format": args.format,
        }
    )
    try:
        result = run_sequential(open_file_source(args.input, header=args.header), config, trace=args.trace)
    except SourceExhaustedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"n_reached={exc.n} threshold={exc.threshold}", file=sys.stderr)
        return EXIT_EXHAUSTED

    if args.format == "json":
        out = asdict(result)
        out["trace"] = [asdict(s) for s in result.trace] if result.trace else None
        print(json.dumps(out, indent=2))
    else:
        print(f"N_d     {result.n_final}")
        print(f"gini    {result.gini:.6f}")
        print(f"ci      ({result.ci_low:.6f}, {result.ci_high:.6f})")
        print(f"v_sq    {result.v_sq:.6g}")
        if result.trace:
            print("\n       n          v_sq     threshold")
            for s in result.trace:
                print(f"{s.n:8d}  {s.v_sq:12.6g}  {s.threshold:12.4f}")
    return EXIT_OK


def _experiment_configs(args) -> list[ExperimentConfig]:
    base: dict = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            base = json.load(fh)
    overrides = {
        "alpha": args.alpha,
        "d": args.d,
        "replications": args.reps,
        "master_seed": args.seed,
        "worker_count": args.workers,
        "oracle_budget": args.oracle_budget,
        "oracle_seed": args.oracle_seed,
        "n_max": args.n_max,
    }
    base.update({k: v for k, v in overrides.items() if v is not None})

    config_spec = base.pop("spec", None)
    family = args.family
    if family is None and config_spec is not None:
        specs = [DistributionSpec.from_json(config_spec)]
    elif family in (None, "all"):
        if args.params:
            raise ValueError("--params needs a single --family")
        specs = [DistributionSpec.reference(f) for f in REFERENCE_SPECS]
    else:
        specs = [_spec(family, args.params)]
    return [ExperimentConfig(spec=s, **base) for s in specs]


def cmd_simulate(args) -> int:
    configs = _experiment_configs(args)
    _echo_config({"command": "simulate", "format": args.format, "experiments": [c.to_json() for c in configs]})
    reports = [run_experiment(c) for c in configs]
    text = format_report(reports if len(reports) > 1 else reports[0], args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text, end="" if text.endswith("\n") else "\n")
    return EXIT_OK


def cmd_oracle(args) -> int:
    spec = _spec(args.family, args.params)
    _echo_config(
        {
            "command": "oracle",
            "spec": spec.to_json(),
            "alpha": args.alpha,
            "d": args.d,
            "mc_budget": args.mc_budget,
            "seed": args.seed,
            "sampling": args.sampling,
        }
    )
    params = true_params(spec, args.alpha, args.d, mc_budget=args.mc_budget, seed=args.seed, sampling=args.sampling)
    print(json.dumps(params.to_json(), indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="seqgini", description="Fixed-width sequential interval for the Gini index.")
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="run the stopping rule over a data file")
    est.add_argument("input", help="text/CSV file, one value per row ('-' for stdin)")
    est.add_argument("--alpha", type=float, required=True)
    est.add_argument("--d", type=float, required=True, help="half-width of the interval")
    est.add_argument("--header", action="store_true", help="skip the first line")
    est.add_argument("--trace", action="store_true", help="print every stopping check")
    est.add_argument("--n-max", type=int, default=DEFAULT_N_MAX)
    est.add_argument("--format", choices=("text", "json"), default="text")
    est.set_defaults(func=cmd_estimate)

    sim = sub.add_parser("simulate", help="Monte Carlo study of stopping time and coverage")
    sim.add_argument("--family", choices=(*FAMILIES, "all"), default=None)
    sim.add_argument("--params", type=float, nargs="+", default=None)
    sim.add_argument("--config", help="JSON file with ExperimentConfig fields; flags override it")
    sim.add_argument("--alpha", type=float, default=None, help="default 0.1")
    sim.add_argument("--d", type=float, default=None, help="default 0.01")
    sim.add_argument("--reps", type=int, default=None, help="default 2000")
    sim.add_argument("--seed", type=int, default=None, help="default 42")
    sim.add_argument("--workers", type=int, default=None, help="default 1")
    sim.add_argument("--oracle-budget", type=int, default=None)
    sim.add_argument("--oracle-seed", type=int, default=None)
    sim.add_argument("--n-max", type=int, default=None)
    sim.add_argument("--format", choices=("table", "csv", "json"), default="table")
    sim.add_argument("--output", help="write the report here instead of stdout")
    sim.set_defaults(func=cmd_simulate)

    orc = sub.add_parser("oracle", help="population parameters and optimal sample size")
    orc.add_argument("family", choices=FAMILIES)
    orc.add_argument("params", type=float, nargs="*")
    orc.add_argument("--alpha", type=float, default=0.1)
    orc.add_argument("--d", type=float, default=0.01)
    orc.add_argument("--mc-budget", type=int, default=10**6)
    orc.add_argument("--seed", type=int, default=0)
    orc.add_argument("--sampling", choices=("stratified", "iid"), default="stratified")
    orc.set_defaults(func=cmd_oracle)
    return parser


def _exit_code(exc: BaseException) -> int | None:
    if isinstance(exc, ReplicationError):
        return _exit_code(exc.__cause__)
    for types, code in (
        ((ParseError, InvalidObservationError, OSError), EXIT_DATA),
        ((UndefinedGiniError,), EXIT_UNDEFINED),
        ((CapExceededError,), EXIT_CAP),
        ((SourceExhaustedError,), EXIT_EXHAUSTED),
        ((MomentExistenceError, ValueError), EXIT_CONFIG),
    ):
        if isinstance(exc, types):
            return code
    return None


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        code = _exit_code(exc)
        if code is None:
            raise
        print(f"error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
