"""Problem-file schema: one JSON document describing a decision instance.

A problem file carries the clique bound n, the ambient graph, named vertex
sets (C is required, A and B optional), named tuples (b optional), and an
optional formula or top-level disjunction.  The ambient graph must be
K_n-free; every name must resolve.  Fuzz-harness failure dumps use the same
schema, so any dump can be replayed directly through the CLI.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, Union

from .formula import (
    ConjFormula,
    FormulaError,
    disjunction_from_json,
    disjunction_to_json,
    formula_from_json,
    formula_to_json,
)
from .graph import Graph, GraphError, PointedGraph, graph_from_json, graph_to_json, is_kn_free


class ProblemError(ValueError):
    """Malformed or inconsistent problem file."""


@dataclass
class ProblemFile:
    n: int
    pointed: PointedGraph
    formula: Union[ConjFormula, tuple[ConjFormula, ...], None]

    @property
    def graph(self) -> Graph:
        return self.pointed.graph

    @property
    def base(self) -> frozenset[int]:
        return self.pointed.base

    def set_named(self, name: str) -> Optional[frozenset[int]]:
        return self.pointed.named_sets.get(name)

    def tuple_named(self, name: str) -> Optional[tuple[int, ...]]:
        return self.pointed.named_tuples.get(name)


def problem_from_dict(obj: Mapping) -> ProblemFile:
    if not isinstance(obj, Mapping):
        raise ProblemError("problem file must be a JSON object")
    try:
        n = int(obj["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ProblemError(f"problem file needs an integer 'n': {exc}") from exc
    if n < 3:
        raise ProblemError(f"n must be >= 3, got {n}")
    try:
        graph = graph_from_json(obj["graph"])
    except KeyError as exc:
        raise ProblemError("problem file needs a 'graph' object") from exc
    except GraphError as exc:
        raise ProblemError(f"bad graph: {exc}") from exc
    if not is_kn_free(graph, n):
        raise ProblemError(f"ambient graph contains a K_{n}")

    sets_obj = obj.get("sets", {})
    if "C" not in sets_obj:
        raise ProblemError("problem file needs sets.C (may be empty)")
    named_sets = {}
    for name, vs in sets_obj.items():
        if not isinstance(vs, (list, tuple)):
            raise ProblemError(f"set {name!r} must be a list")
        for v in vs:
            if v not in graph:
                raise ProblemError(f"set {name!r} mentions unknown vertex {v}")
        named_sets[name] = frozenset(vs)

    named_tuples = {}
    for name, t in obj.get("tuples", {}).items():
        if not isinstance(t, (list, tuple)):
            raise ProblemError(f"tuple {name!r} must be a list")
        for v in t:
            if v not in graph:
                raise ProblemError(f"tuple {name!r} mentions unknown vertex {v}")
        if len(set(t)) != len(t):
            raise ProblemError(f"tuple {name!r} has repeated entries")
        named_tuples[name] = tuple(t)

    formula = None
    if "formula" in obj and obj["formula"] is not None:
        raw = obj["formula"]
        try:
            if isinstance(raw, Mapping) and "disjuncts" in raw:
                formula = disjunction_from_json(raw)
            else:
                formula = formula_from_json(raw)
        except FormulaError as exc:
            raise ProblemError(f"bad formula: {exc}") from exc

    pointed = PointedGraph(
        graph,
        base=named_sets["C"],
        named_sets=named_sets,
        named_tuples=named_tuples,
    )
    return ProblemFile(n, pointed, formula)


def problem_to_dict(problem: ProblemFile) -> dict:
    out: dict = {
        "n": problem.n,
        "graph": graph_to_json(problem.graph),
        "sets": {k: sorted(v) for k, v in problem.pointed.named_sets.items()},
        "tuples": {k: list(t) for k, t in problem.pointed.named_tuples.items()},
    }
    f = problem.formula
    if isinstance(f, ConjFormula):
        out["formula"] = formula_to_json(f)
    elif f is not None:
        out["formula"] = disjunction_to_json(f)
    return out


def load_problem(path: Union[str, Path]) -> ProblemFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ProblemError(f"cannot read {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"{path} is not valid JSON: {exc}") from exc
    return problem_from_dict(obj)


def save_problem(problem: ProblemFile, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(problem_to_dict(problem), indent=2, sort_keys=True) + "\n")
