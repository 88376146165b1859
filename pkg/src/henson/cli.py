"""Command-line front end.

Subcommands: divides, indep, gamma, oracle, example62, lemma61, fuzz.
Exit codes: 0 the command ran (and any verification passed), 2 input or
precondition error, 3 criterion/oracle mismatch.  All output is JSON on
stdout; report commands can additionally write a PNG figure and a CSV table.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .formula import ConjFormula, FormulaError, InconsistentInstanceError
from .graph import GraphError, graph_to_json, is_kn_free
from .independence import (
    dividing_indep,
    divides_formula,
    divides_formula_t0,
    edge_indep,
    forking_indep,
)
from .oracle import dividing_indep_oracle, divides_oracle, divides_oracle_t0
from .problem import ProblemError, load_problem
from .sequences import dichotomy_scan, gamma, verify_fork_nondivide

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_MISMATCH = 3


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _err(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_INPUT


def _reports(args, report: dict, kind: str) -> None:
    """Optional figure/CSV rendering next to the JSON output."""
    if not (getattr(args, "plot", None) or getattr(args, "csv", None)):
        return
    from . import report as rpt

    if args.plot:
        {
            "dichotomy": rpt.save_dichotomy_figure,
            "example": rpt.save_example_figure,
            "fuzz": rpt.save_fuzz_figure,
        }[kind](report, args.plot)
    if args.csv:
        header, rows = {
            "dichotomy": rpt.dichotomy_csv_rows,
            "example": rpt.example_csv_rows,
            "fuzz": rpt.fuzz_csv_rows,
        }[kind](report)
        rpt.write_csv(args.csv, header, rows)


def cmd_divides(args) -> int:
    problem = load_problem(args.file)
    if problem.formula is None:
        return _err("problem file has no formula")
    b = problem.tuple_named("b")
    if b is None:
        return _err("problem file has no tuple 'b'")
    pg = problem.pointed
    if isinstance(problem.formula, ConjFormula):
        if args.t0:
            verdict = divides_formula_t0(problem.formula, b, pg)
        else:
            verdict = divides_formula(problem.formula, b, pg, problem.n)
    else:
        if args.oracle:
            return _err("the oracle does not decide dividing of disjunctions")
        verdict = divides_formula(problem.formula, b, pg, problem.n)
    out = verdict.to_json()
    code = EXIT_OK
    if args.oracle:
        try:
            if args.t0:
                oracle_verdict = divides_oracle_t0(problem.formula, b, pg, args.lmax or 4)
            else:
                oracle_verdict = divides_oracle(problem.formula, b, pg, problem.n, args.lmax)
            out["oracle"] = oracle_verdict.to_json()
            if oracle_verdict.divides != verdict.divides:
                out["mismatch"] = True
                code = EXIT_MISMATCH
        except InconsistentInstanceError:
            out["oracle"] = None
            out["oracle_skipped"] = "inconsistent-instance"
    _emit(out)
    return code


def cmd_indep(args) -> int:
    problem = load_problem(args.file)
    sets = []
    for name in ("A", "B", "C"):
        got = problem.set_named(name)
        if got is None:
            return _err(f"problem file has no set {name!r}")
        sets.append(got)
    A, B, C = sets
    g = problem.graph
    if args.rel == "R":
        if args.oracle:
            return _err("no oracle is defined for edge independence")
        ok = edge_indep(A, B, C, g)
        _emit({"independent": ok, "violation": None, "relation": "R"})
        return EXIT_OK
    fn = dividing_indep if args.rel == "d" else forking_indep
    ok, violation = fn(A, B, C, g, problem.n)
    out = {
        "independent": ok,
        "violation": violation.to_json() if violation else None,
        "relation": args.rel,
    }
    code = EXIT_OK
    if args.oracle:
        oracle_ok = dividing_indep_oracle(A, B, C, g, problem.n, args.lmax)
        out["oracle"] = oracle_ok
        if oracle_ok != ok:
            out["mismatch"] = True
            code = EXIT_MISMATCH
    _emit(out)
    return code


def cmd_gamma(args) -> int:
    problem = load_problem(args.file)
    b = problem.tuple_named("b")
    if b is None:
        return _err("problem file has no tuple 'b'")
    witness = problem.set_named(args.witness) if args.witness else problem.set_named("B")
    if args.witness and witness is None:
        return _err(f"problem file has no set {args.witness!r}")
    if witness is None:
        witness = frozenset(b)
    window = gamma(problem.base, b, witness, problem.pointed, args.length or problem.n + 1)
    _emit(
        {
            "template": window.template.to_json(),
            "copies": [list(copy) for copy in window.copies],
            "graph": graph_to_json(window.graph),
            "kn_free": is_kn_free(window.graph, problem.n),
        }
    )
    return EXIT_OK


def cmd_oracle(args) -> int:
    problem = load_problem(args.file)
    if not isinstance(problem.formula, ConjFormula):
        return _err("oracle needs a single conjunctive formula")
    b = problem.tuple_named("b")
    if b is None:
        return _err("problem file has no tuple 'b'")
    try:
        if args.t0:
            verdict = divides_oracle_t0(problem.formula, b, problem.pointed, args.lmax or 4)
        else:
            verdict = divides_oracle(problem.formula, b, problem.pointed, problem.n, args.lmax)
    except InconsistentInstanceError as exc:
        return _err(str(exc))
    _emit(verdict.to_json())
    return EXIT_OK


def cmd_example62(args) -> int:
    if args.n < 3:
        return _err(f"n must be >= 3, got {args.n}")
    report = verify_fork_nondivide(args.n, args.lmax or 6)
    _emit(report)
    _reports(args, report, "example")
    return EXIT_OK if report["ok"] else 1


def cmd_lemma61(args) -> int:
    report = dichotomy_scan(args.copies)
    _emit(report)
    _reports(args, report, "dichotomy")
    return EXIT_OK if not report["violations"] else 1


def cmd_fuzz(args) -> int:
    from .fuzz import run_fuzz

    mutate = os.environ.get("HENSON_FUZZ_MUTATE") or args.mutate
    max_extra = max(0, args.max_vertices - args.max_c - args.max_b)
    summary = run_fuzz(
        args.n,
        args.trials,
        args.seed,
        max_c=args.max_c,
        max_b=args.max_b,
        max_extra=max_extra,
        l_max=args.lmax,
        replay_dir=args.replay_dir,
        mutate=mutate,
    )
    _emit(summary)
    _reports(args, summary, "fuzz")
    return EXIT_OK if summary["ok"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="henson",
        description="Dividing and forking independence in generic Kn-free graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("divides", help="decide dividing of a formula instance")
    p.add_argument("file")
    p.add_argument("--t0", action="store_true", help="decide over the random graph instead")
    p.add_argument("--oracle", action="store_true", help="cross-check against the template oracle")
    p.add_argument("--lmax", type=int, default=None)
    p.set_defaults(fn=cmd_divides)

    p = sub.add_parser("indep", help="decide an independence relation on sets")
    p.add_argument("file")
    p.add_argument("--rel", choices=("d", "f", "R"), default="d")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--lmax", type=int, default=None)
    p.set_defaults(fn=cmd_indep)

    p = sub.add_parser("gamma", help="realize the dividing-witness sequence window")
    p.add_argument("file")
    p.add_argument("--witness", default=None, help="name of the witness subset (default: set B, else all of b)")
    p.add_argument("--length", type=int, default=None)
    p.set_defaults(fn=cmd_gamma)

    p = sub.add_parser("oracle", help="run the brute-force dividing oracle directly")
    p.add_argument("file")
    p.add_argument("--t0", action="store_true")
    p.add_argument("--lmax", type=int, default=None)
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("example62", help="verify the forking, non-dividing disjunction")
    p.add_argument("n", type=int)
    p.add_argument("--lmax", type=int, default=None)
    p.add_argument("--plot", default=None)
    p.add_argument("--csv", default=None)
    p.set_defaults(fn=cmd_example62)

    p = sub.add_parser("lemma61", help="scan the 4-column sequence dichotomy")
    p.add_argument("--copies", type=int, default=6)
    p.add_argument("--plot", default=None)
    p.add_argument("--csv", default=None)
    p.set_defaults(fn=cmd_lemma61)

    p = sub.add_parser("fuzz", help="randomized criterion/oracle agreement harness")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-vertices", type=int, default=8)
    p.add_argument("--max-c", type=int, default=3)
    p.add_argument("--max-b", type=int, default=3)
    p.add_argument("--lmax", type=int, default=None)
    p.add_argument("--replay-dir", default=None)
    p.add_argument("--mutate", default=None, help=argparse.SUPPRESS)
    p.add_argument("--plot", default=None)
    p.add_argument("--csv", default=None)
    p.set_defaults(fn=cmd_fuzz)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ProblemError, FormulaError, GraphError, ValueError) as exc:
        return _err(str(exc))


if __name__ == "__main__":
    sys.exit(main())
