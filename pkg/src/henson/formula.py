"""Conjunctive graph formulas and their consistency via optimal candidates.

A `ConjFormula` is a conjunction of (negated) adjacency literals over two
variable classes x1..xk (solution variables) and y1..ym (parameter slots),
plus constants drawn from a base set, plus optional x=y identifications.
Formulas are stored symmetrically closed: a literal and its mirror image are
the same element, realized here by keeping one canonically ordered pair.

Substituting a concrete parameter tuple for the y-slots produces an
`EdgeConstraints` value: a set of (negated) adjacency requirements between
fresh solution variables and ambient vertices.  Identifications are resolved
eagerly by substitution, so downstream algorithms only ever see pure
adjacency constraints.

Consistency is decided through the *optimal candidate*: the extension of the
ambient graph by one fresh vertex per free variable carrying exactly the
positive literals.  A non-contradictory constraint set is always satisfiable
in the random graph; over the generic K_n-free graph it is satisfiable
exactly when that minimal extension stays K_n-free.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .graph import Graph, PointedGraph, has_clique_through

Term = tuple[str, int]  # ("x", i) | ("y", j) | ("c", vertex)
CTerm = tuple[str, object]  # ("v", name) | ("a", vertex)


class FormulaError(ValueError):
    """Malformed formula: bad arity, forbidden conjunct, unknown constant."""


class InconsistentInstanceError(ValueError):
    """An operation that requires a consistent instance got an inconsistent one."""


class FormulaClass(enum.Enum):
    """Classification of a conjunction by its identification conjuncts."""

    WITH_EQUALITY = "with-equality"  # may identify solution variables with parameters
    EDGE_ONLY = "edge-only"  # adjacency literals only

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


_TERM_RANK = {"x": 0, "y": 1, "c": 2}


def _term_key(t: Term) -> tuple[int, int]:
    return (_TERM_RANK[t[0]], t[1])


def x_var(i: int) -> Term:
    return ("x", i)


def y_var(j: int) -> Term:
    return ("y", j)


def const(v: int) -> Term:
    return ("c", v)


def show_term(t: Term) -> str:
    kind, idx = t
    return f"c:{idx}" if kind == "c" else f"{kind}{idx}"


def show_literal(lit: tuple) -> str:
    kind, a, b = lit
    sym = {"edge": "R", "nonedge": "!R", "eq": "="}[kind]
    return f"{show_term(a)} {sym} {show_term(b)}"


@dataclass(frozen=True)
class ConjFormula:
    """A symmetrically closed conjunction of literals.  Build via `conj`."""

    x_arity: int
    y_arity: int
    constants: frozenset[int]
    conjuncts: frozenset[tuple]

    @property
    def contradictory(self) -> bool:
        """A literal and its negation both present, or a positive self-pair."""
        for kind, a, b in self.conjuncts:
            if kind == "edge" and (a == b or ("nonedge", a, b) in self.conjuncts):
                return True
        return False

    def equality_conjuncts(self) -> list[tuple]:
        return sorted(
            (c for c in self.conjuncts if c[0] == "eq"),
            key=lambda c: (_term_key(c[1]), _term_key(c[2])),
        )

    def sorted_conjuncts(self) -> list[tuple]:
        return sorted(self.conjuncts, key=lambda c: (c[0], _term_key(c[1]), _term_key(c[2])))


def conj(
    x_arity: int,
    y_arity: int,
    conjuncts: Iterable[tuple],
    constants: Iterable[int] = (),
) -> ConjFormula:
    """Build a `ConjFormula`, canonicalizing the symmetric closure.

    Adjacency literals are stored with endpoints in term order, so a literal
    and its mirror collapse to one element.  Trivial self-equalities and
    negated self-pairs are dropped; positive self-pairs are kept (the formula
    is then contradictory).  Out-of-range variable indices are rejected.
    """
    if x_arity < 1:
        raise FormulaError(f"x arity must be >= 1, got {x_arity}")
    if y_arity < 0:
        raise FormulaError(f"y arity must be >= 0, got {y_arity}")
    consts = set(constants)

    def check_term(t) -> Term:
        if not (isinstance(t, tuple) and len(t) == 2 and t[0] in _TERM_RANK):
            raise FormulaError(f"bad term {t!r}")
        kind, idx = t
        if kind == "x" and not (1 <= idx <= x_arity):
            raise FormulaError(f"variable {show_term(t)} outside x arity {x_arity}")
        if kind == "y" and not (1 <= idx <= y_arity):
            raise FormulaError(f"parameter slot {show_term(t)} outside y arity {y_arity}")
        if kind == "c":
            consts.add(idx)
        return (kind, idx)

    out = set()
    for item in conjuncts:
        if not (isinstance(item, tuple) and len(item) == 3):
            raise FormulaError(f"bad conjunct {item!r}")
        kind, a, b = item
        a, b = check_term(a), check_term(b)
        if kind in ("edge", "nonedge"):
            if a == b and kind == "nonedge":
                continue  # irreflexivity makes it vacuous
            lo, hi = sorted((a, b), key=_term_key)
            out.add((kind, lo, hi))
        elif kind == "eq":
            if a == b:
                continue
            lo, hi = sorted((a, b), key=_term_key)
            out.add(("eq", lo, hi))
        else:
            raise FormulaError(f"unknown literal kind {kind!r}")
    return ConjFormula(x_arity, y_arity, frozenset(consts), frozenset(out))


def validate(f: ConjFormula) -> FormulaClass:
    """Classify a conjunction, rejecting forbidden conjuncts.

    Identifications are only allowed between a solution variable and a
    parameter slot.  Variable-variable equalities within one class and
    equalities against constants are errors naming the offending literal.
    """
    has_eq = False
    for litr in f.conjuncts:
        kind, a, b = litr
        if kind != "eq":
            continue
        kinds = {a[0], b[0]}
        if kinds == {"x", "y"}:
            has_eq = True
            continue
        raise FormulaError(f"forbidden conjunct: {show_literal(litr)}")
    return FormulaClass.WITH_EQUALITY if has_eq else FormulaClass.EDGE_ONLY


def is_edge_only(f: ConjFormula) -> bool:
    return validate(f) is FormulaClass.EDGE_ONLY


# -- constraint sets over an ambient graph ---------------------------------


_CTERM_RANK = {"v": 0, "a": 1}


def _cterm_key(t: CTerm):
    return (_CTERM_RANK[t[0]], t[1])


@dataclass(frozen=True)
class EdgeConstraints:
    """Adjacency requirements between fresh variables and ambient vertices.

    `free` lists the variables that still need a solution vertex;
    `assigned` records variables identified with ambient vertices during
    substitution.  Literals are canonically ordered pairs over ("v", name)
    and ("a", vertex) endpoints; requirements between two ambient vertices
    are evaluated against the ambient graph at build time, so a surviving
    literal always mentions a free variable.  `contradictory` is set when a
    literal and its negation coexist, identifications conflict, or an
    ambient requirement fails.
    """

    free: tuple[str, ...]
    assigned: tuple[tuple[str, int], ...]
    literals: frozenset[tuple[bool, CTerm, CTerm]]
    contradictory: bool

    def positive(self) -> list[tuple[CTerm, CTerm]]:
        return sorted(
            ((a, b) for pos, a, b in self.literals if pos),
            key=lambda p: (_cterm_key(p[0]), _cterm_key(p[1])),
        )

    def negative(self) -> list[tuple[CTerm, CTerm]]:
        return sorted(
            ((a, b) for pos, a, b in self.literals if not pos),
            key=lambda p: (_cterm_key(p[0]), _cterm_key(p[1])),
        )


def edge_constraints(
    fresh: Sequence[str],
    literals: Iterable[tuple[bool, CTerm, CTerm]],
    graph: Graph,
    assignment: Iterable[tuple[str, int]] = (),
) -> EdgeConstraints:
    """Normalize raw requirements against an ambient graph.

    Applies the identification map to every endpoint, evaluates
    ambient-ambient requirements, and folds violations into the
    `contradictory` flag rather than raising: inconsistent instances are
    first-class values here.
    """
    contradictory = False
    assign: dict[str, int] = {}
    for name, vertex in assignment:
        if name in assign and assign[name] != vertex:
            contradictory = True
        else:
            assign[name] = vertex

    def resolve(t: CTerm) -> CTerm:
        if t[0] == "v" and t[1] in assign:
            return ("a", assign[t[1]])
        return t

    lits: set[tuple[bool, CTerm, CTerm]] = set()
    for pos, a, b in literals:
        a, b = resolve(a), resolve(b)
        if a == b:
            if pos:
                contradictory = True  # positive self-pair can never hold
            continue
        if a[0] == "a" and b[0] == "a":
            if graph.has_edge(a[1], b[1]) != pos:
                contradictory = True
            continue
        lo, hi = sorted((a, b), key=_cterm_key)
        lits.add((pos, lo, hi))
    for pos, a, b in lits:
        if pos and (False, a, b) in lits:
            contradictory = True
            break
    free = tuple(n for n in fresh if n not in assign)
    assigned = tuple(sorted(assign.items()))
    return EdgeConstraints(free, assigned, frozenset(lits), contradictory)


def union_constraints(
    parts: Iterable[EdgeConstraints],
    graph: Graph,
) -> EdgeConstraints:
    """Union of constraint sets sharing one variable name space.

    Identifications from one part are re-applied to every other part, so a
    conflict between parts (the same variable forced to two vertices, or a
    requirement clashing with another part's requirement) surfaces as a
    contradictory union.
    """
    fresh: list[str] = []
    seen = set()
    raw_assign: list[tuple[str, int]] = []
    raw_lits: list[tuple[bool, CTerm, CTerm]] = []
    contradictory = False
    for p in parts:
        contradictory = contradictory or p.contradictory
        for name in p.free:
            if name not in seen:
                seen.add(name)
                fresh.append(name)
        for name, vertex in p.assigned:
            raw_assign.append((name, vertex))
            if name not in seen:
                seen.add(name)
                fresh.append(name)
        raw_lits.extend(p.literals)
    merged = edge_constraints(fresh, raw_lits, graph, raw_assign)
    if contradictory and not merged.contradictory:
        merged = EdgeConstraints(merged.free, merged.assigned, merged.literals, True)
    return merged


def instantiate(f: ConjFormula, b: Sequence[int], g: PointedGraph) -> EdgeConstraints:
    """Substitute the parameter tuple `b` for the y-slots of `f`.

    Identification conjuncts x_i = y_j become assignments x_i := b_j and are
    eliminated by substitution; conflicting identifications mark the result
    contradictory.  Entries of `b` must lie outside the base set (fold such
    vertices into constants instead) and must be pairwise distinct.
    """
    validate(f)
    if len(b) != f.y_arity:
        raise FormulaError(f"parameter tuple has length {len(b)}, y arity is {f.y_arity}")
    if len(set(b)) != len(b):
        raise FormulaError(f"parameter tuple has repeated entries: {tuple(b)}")
    graph = g.graph
    for v in b:
        graph._index(v)
    overlap = set(b) & g.base
    if overlap:
        raise FormulaError(
            f"parameters {sorted(overlap)} lie in the base set; "
            "fold them into constants of the formula instead"
        )
    missing = f.constants - g.base
    if missing:
        raise FormulaError(f"constants {sorted(missing)} are not in the base set")

    def to_cterm(t: Term) -> CTerm:
        kind, idx = t
        if kind == "x":
            return ("v", f"x{idx}")
        if kind == "y":
            return ("a", b[idx - 1])
        return ("a", idx)

    assignment = []
    raw = []
    for kind, t1, t2 in f.conjuncts:
        if kind == "eq":
            xt, yt = (t1, t2) if t1[0] == "x" else (t2, t1)
            assignment.append((f"x{xt[1]}", b[yt[1] - 1]))
        else:
            raw.append((kind == "edge", to_cterm(t1), to_cterm(t2)))
    names = tuple(f"x{i}" for i in range(1, f.x_arity + 1))
    return edge_constraints(names, raw, graph, assignment)


@dataclass(frozen=True)
class OptimalCandidate:
    """The minimal-edge realization attempt for a constraint set.

    One fresh vertex per free variable; edges among new vertices and from
    new vertices into the ambient graph are exactly the positive literals.
    `assignment` maps free variables to their new vertices; identified
    variables keep the ambient vertices recorded on the constraint set.
    """

    extension: Graph
    assignment: tuple[tuple[str, int], ...]

    def new_vertices(self) -> tuple[int, ...]:
        return tuple(v for _, v in self.assignment)


def optimal_candidate(p: EdgeConstraints, g: PointedGraph) -> OptimalCandidate:
    """Build the extension graph carrying exactly the positive literals."""
    if p.contradictory:
        raise InconsistentInstanceError("constraint set is contradictory")
    graph = g.graph
    fresh_ids = graph.fresh_vertex_ids(len(p.free))
    where = dict(zip(p.free, fresh_ids))

    def vertex_of(t: CTerm) -> int:
        return where[t[1]] if t[0] == "v" else t[1]

    new_edges = [
        (vertex_of(a), vertex_of(b)) for pos, a, b in sorted(p.literals) if pos
    ]
    ext = graph.extended(fresh_ids, new_edges)
    return OptimalCandidate(ext, tuple((name, where[name]) for name in p.free))


def is_consistent(p: EdgeConstraints, g: PointedGraph, n: int, mode: str = "Tn") -> bool:
    """Satisfiability of a constraint set over the ambient graph.

    mode "T0" (random graph): any non-contradictory set is satisfiable.
    mode "Tn": additionally the optimal candidate extension must stay
    K_n-free; the ambient graph itself is assumed K_n-free, so only cliques
    through the new vertices are searched.
    """
    if mode not in ("T0", "Tn"):
        raise ValueError(f"mode must be 'T0' or 'Tn', got {mode!r}")
    if p.contradictory:
        return False
    if mode == "T0":
        return True
    cand = optimal_candidate(p, g)
    return not has_clique_through(cand.extension, cand.new_vertices(), n)


def positive_edge_support(
    f: ConjFormula,
    b: Sequence[int],
    g: PointedGraph,
) -> tuple[frozenset[int], frozenset[str]]:
    """Parameters and variables mentioned in positive variable-parameter literals.

    Returns the set of concrete vertices (constants and entries of `b`)
    appearing in some positive adjacency conjunct against a solution
    variable, together with the set of solution variables so mentioned.
    Only defined for edge-only formulas.
    """
    if validate(f) is not FormulaClass.EDGE_ONLY:
        raise FormulaError("positive edge support requires an edge-only formula")
    if len(b) != f.y_arity:
        raise FormulaError(f"parameter tuple has length {len(b)}, y arity is {f.y_arity}")
    verts: set[int] = set()
    xs: set[str] = set()
    for kind, t1, t2 in f.conjuncts:
        if kind != "edge":
            continue
        sides = {t1[0], t2[0]}
        if "x" not in sides or sides == {"x"}:
            continue
        xt, other = (t1, t2) if t1[0] == "x" else (t2, t1)
        verts.add(b[other[1] - 1] if other[0] == "y" else other[1])
        xs.add(f"x{xt[1]}")
    return frozenset(verts), frozenset(xs)


# -- JSON wire format -------------------------------------------------------


def _term_to_str(t: Term) -> str:
    return show_term(t)


def _term_from_str(s: str) -> Term:
    if not isinstance(s, str) or not s:
        raise FormulaError(f"bad term string {s!r}")
    if s.startswith("c:"):
        return ("c", int(s[2:]))
    kind, idx = s[0], s[1:]
    if kind not in ("x", "y") or not idx.isdigit():
        raise FormulaError(f"bad term string {s!r}")
    return (kind, int(idx))


def formula_to_json(f: ConjFormula) -> dict:
    return {
        "x_arity": f.x_arity,
        "y_arity": f.y_arity,
        "conjuncts": [
            {"kind": kind, "lhs": _term_to_str(a), "rhs": _term_to_str(b)}
            for kind, a, b in f.sorted_conjuncts()
        ],
    }


def formula_from_json(obj: Mapping) -> ConjFormula:
    try:
        x_arity = int(obj["x_arity"])
        y_arity = int(obj["y_arity"])
        raw = list(obj["conjuncts"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormulaError(f"formula object needs x_arity, y_arity, conjuncts: {exc}") from exc
    conjuncts = []
    for entry in raw:
        try:
            kind = entry["kind"]
            lhs = _term_from_str(entry["lhs"])
            rhs = _term_from_str(entry["rhs"])
        except (KeyError, TypeError) as exc:
            raise FormulaError(f"bad conjunct entry {entry!r}") from exc
        conjuncts.append((kind, lhs, rhs))
    return conj(x_arity, y_arity, conjuncts)


def disjunction_to_json(disjuncts: Sequence[ConjFormula]) -> dict:
    return {"disjuncts": [formula_to_json(d) for d in disjuncts]}


def disjunction_from_json(obj: Mapping) -> tuple[ConjFormula, ...]:
    try:
        raw = list(obj["disjuncts"])
    except (KeyError, TypeError) as exc:
        raise FormulaError(f"disjunction object needs 'disjuncts': {exc}") from exc
    return tuple(formula_from_json(d) for d in raw)
