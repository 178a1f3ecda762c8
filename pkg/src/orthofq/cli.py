"""Command-line entry point: ``orthofq <subcommand> ...``.

Exit codes: 0 success, 1 identity or verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .constructions import construct_2d, construct_E1, construct_E2, construct_product
from .counting import EXPORT_FORMATS, BudgetExceeded, count_tuples_bruteforce, count_tuples_graph, export_graph
from .discrepancy import l2_bruteforce, l2_closed_form, lemma_bound_check
from .experiments import ConfigError, ExperimentConfig, load_suite_config, run_suite, theorem_check
from .ffield import field_for_order
from .geometry import PointSet, read_point_set, write_point_set

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _add_set_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--set", dest="set_file", help="point-set file ('# q=<q> d=<d>' header)")
    src.add_argument("--full", nargs=2, type=int, metavar=("Q", "D"), help="use all of F_q^d")
    p.add_argument("--no-zero", action="store_true", help="drop the zero vector from --full")


def _load_set(args) -> PointSet:
    if args.set_file:
        try:
            with open(args.set_file) as fh:
                return read_point_set(fh)
        except OSError as exc:
            raise UsageError(str(exc))
    q, d = args.full
    return PointSet.full_space(field_for_order(q), d, include_zero=not args.no_zero)


def cmd_count(args) -> int:
    E = _load_set(args)
    out = {}
    status = EXIT_OK
    if args.method in ("graph", "both"):
        out["graph"] = count_tuples_graph(E, args.k, distinct=args.distinct, n_jobs=args.jobs).to_json()
    if args.method in ("bruteforce", "both"):
        out["bruteforce"] = count_tuples_bruteforce(E, args.k, distinct=args.distinct).to_json()
    if args.method == "both" and out["graph"]["lambda"] != out["bruteforce"]["lambda"]:
        status = EXIT_FAIL
    payload = out[args.method] if args.method != "both" else out
    _emit(payload, args.out)
    return status


def cmd_discrepancy(args) -> int:
    E = _load_set(args)
    closed = l2_closed_form(E, args.k)
    brute = l2_bruteforce(E, args.k)
    closed.bruteforce = brute.bruteforce
    payload = closed.to_json()
    payload["lemma"] = lemma_bound_check(E, args.k).to_json()
    _emit(payload, args.out)
    return EXIT_OK if closed.agree else EXIT_FAIL


def cmd_construct(args) -> int:
    if args.name == "2d":
        if args.q is None:
            raise UsageError("construct 2d needs --q")
        E, report = construct_2d(args.q)
    else:
        if args.p is None:
            raise UsageError(f"construct {args.name} needs --p")
        if args.name == "E1":
            E, report = construct_E1(args.p)
        elif args.d is None:
            raise UsageError(f"construct {args.name} needs --d")
        elif args.name == "E2":
            E, report = construct_E2(args.p, args.d)
        else:
            E, report = construct_product(args.p, args.d)
    if args.out_set:
        with open(args.out_set, "w") as fh:
            write_point_set(E, fh)
    _emit(report.to_json(), args.out)
    return EXIT_OK if report.verified else EXIT_FAIL


def cmd_theorem(args) -> int:
    config = ExperimentConfig(
        q=args.q, d=args.d, k=args.k, m=args.m, trials=args.trials, seed=args.seed,
        include_zero=args.include_zero, method=args.method, n_jobs=args.jobs,
    )
    tc = theorem_check(config)
    if args.csv:
        Path(args.csv).write_text(tc.csv_text())
    _emit(tc.summary(), args.out)
    return EXIT_OK


def cmd_export(args) -> int:
    E = _load_set(args)
    if args.out:
        with open(args.out, "w") as fh:
            export_graph(E, fh, args.format)
    else:
        export_graph(E, sys.stdout, args.format)
    return EXIT_OK


def cmd_suite(args) -> int:
    config = load_suite_config(args.config)
    if args.jobs is not None:
        config["n_jobs"] = args.jobs
    if args.seed is not None:
        config["seed"] = args.seed
    status, results = run_suite(config, args.out_dir)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}")
        for msg in r.failures:
            print(f"    {msg}")
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orthofq", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="count mutually orthogonal k-tuples")
    _add_set_args(p)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--method", choices=("graph", "bruteforce", "both"), default="graph")
    p.add_argument("--distinct", action="store_true", help="only tuples of distinct nonzero vectors")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("discrepancy", help="L2 norm of the discrepancy, both ways, plus the bound")
    _add_set_args(p)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_discrepancy)

    p = sub.add_parser("construct", help="build a set without orthogonal pairs")
    p.add_argument("name", choices=("2d", "E1", "E2", "product"))
    p.add_argument("--q", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--out-set", help="write the point set here")
    p.add_argument("--out", help="write the JSON report here")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("theorem-check", help="Monte Carlo check of the tuple-count estimate")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--include-zero", action="store_true")
    p.add_argument("--method", choices=("graph", "bruteforce"), default="graph")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--csv", help="per-trial CSV path")
    p.add_argument("--out")
    p.set_defaults(func=cmd_theorem)

    p = sub.add_parser("export-graph", help="write the orthogonality graph as an edge list")
    _add_set_args(p)
    p.add_argument("--format", choices=EXPORT_FORMATS, default="edgelist")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("suite", help="run the declared checks from a JSON config")
    p.add_argument("config")
    p.add_argument("--out-dir", default="suite-artifacts")
    p.add_argument("--jobs", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (UsageError, ConfigError, BudgetExceeded, ValueError) as exc:
        print(f"orthofq: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
