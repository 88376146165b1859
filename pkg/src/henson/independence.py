"""Dividing and forking independence over generic K_n-free graphs.

The central combinatorial notion: a set B is *n-bound* to a disjoint set C
when some n-element subset of B and C meets both sides and is one B-internal
edge set away from being a complete graph (the C-part is a clique joined
completely to the B-part).  A consistent edge-only formula instance divides
over the base exactly when some small subset of its parameter tuple is not
n-bound to the base alone but becomes n-bound once a solution is adjoined;
by optimality it suffices to adjoin the minimal-edge solution.

On sets, dividing independence of A from B over C reduces to: A and B meet
only inside C, and no subset of B outside C gains an n-bound witness from
A's presence.  Forking coincides with dividing for complete types here, so
the forking relation simply delegates.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence, Union

from .formula import (
    ConjFormula,
    FormulaClass,
    FormulaError,
    InconsistentInstanceError,
    instantiate,
    is_consistent,
    optimal_candidate,
    validate,
)
from .graph import Graph, PointedGraph


@dataclass(frozen=True)
class BoundWitness:
    """An n-element set certifying that B is n-bound to C.

    Meets both B and C; its C-part is a clique; every B-part vertex is
    adjacent to every C-part vertex.  Edges inside the B-part are
    unconstrained.
    """

    b0: frozenset[int]

    def sorted_members(self) -> tuple[int, ...]:
        return tuple(sorted(self.b0))


@dataclass(frozen=True)
class FormulaBoundWitness:
    """Certificate that a formula instance divides over the base.

    `subset` is a nonempty part of the parameter tuple, of size below n,
    that is not n-bound to the base on its own but is n-bound to the base
    plus the optimal solution; `against_optimal` is that latter witness.
    """

    subset: tuple[int, ...]
    against_optimal: BoundWitness
    solution: tuple[tuple[str, int], ...]

    def to_json(self) -> dict:
        return {
            "subset": list(self.subset),
            "bound_witness": list(self.against_optimal.sorted_members()),
            "optimal_solution": {name: v for name, v in self.solution},
        }


@dataclass(frozen=True)
class Violation:
    """Why an independence check failed."""

    kind: str  # "shared-vertex" | "bound-subset"
    vertices: tuple[int, ...]

    def to_json(self) -> dict:
        return {"kind": self.kind, "vertices": list(self.vertices)}


@dataclass(frozen=True)
class DividesVerdict:
    divides: bool
    reason: str  # "inconsistent" | "equality-conjunct" | "kn-phi-bound" | "none"
    witness: Optional[object] = None

    def to_json(self) -> dict:
        w = None
        if isinstance(self.witness, FormulaBoundWitness):
            w = self.witness.to_json()
        elif self.witness is not None:
            w = self.witness
        return {"divides": self.divides, "reason": self.reason, "witness": w}


def kn_bound(
    B: Iterable[int],
    C: Iterable[int],
    g: Graph,
    n: int,
) -> Optional[BoundWitness]:
    """Lexicographically least witness that B is n-bound to C, if any.

    B and C must be disjoint.  An empty C (or empty B) admits no witness
    since a witness must meet both sides.
    """
    bset, cset = frozenset(B), frozenset(C)
    shared = bset & cset
    if shared:
        raise ValueError(f"B and C must be disjoint, both contain {sorted(shared)}")
    if not bset or not cset:
        return None
    universe = sorted(bset | cset)
    if len(universe) < n:
        return None
    bit = {v: g.bit_of(v) for v in universe}
    rows = {v: g.adjacency_row(v) for v in universe}
    for combo in combinations(universe, n):
        members_mask = 0
        for v in combo:
            members_mask |= bit[v]
        c_part = [v for v in combo if v in cset]
        if not c_part or len(c_part) == n:
            continue
        # every C-part vertex must be adjacent to all other members
        if all(rows[c] & (members_mask ^ bit[c]) == members_mask ^ bit[c] for c in c_part):
            return BoundWitness(frozenset(combo))
    return None


def formula_kn_bound(
    f: ConjFormula,
    b: Sequence[int],
    g: PointedGraph,
    n: int,
) -> Optional[FormulaBoundWitness]:
    """Search parameter subsets certifying that the instance divides.

    Builds the optimal solution of f(x, b), then scans subsets S of b with
    0 < |S| < n, in size-then-lexicographic order, for: S not n-bound to the
    base, but n-bound to the base plus the solution.  Checking the optimal
    solution alone is complete: any other solution carries at least its
    edges on the relevant pairs.
    """
    if validate(f) is not FormulaClass.EDGE_ONLY:
        raise FormulaError("bound search requires an edge-only formula")
    p = instantiate(f, b, g)
    if not is_consistent(p, g, n, "Tn"):
        raise InconsistentInstanceError("formula instance is inconsistent")
    cand = optimal_candidate(p, g)
    ext = cand.extension
    solution = set(cand.new_vertices())
    base = set(g.base)
    params = sorted(set(b))
    for size in range(1, n):
        for subset in combinations(params, size):
            if kn_bound(subset, base, ext, n) is not None:
                continue
            witness = kn_bound(subset, base | solution, ext, n)
            if witness is not None:
                return FormulaBoundWitness(subset, witness, cand.assignment)
    return None


Disjunction = Union[Sequence[ConjFormula], tuple]


def divides_formula(
    f: Union[ConjFormula, Sequence[ConjFormula]],
    b: Sequence[int],
    g: PointedGraph,
    n: int,
) -> DividesVerdict:
    """Decide whether a formula instance divides over the base.

    An inconsistent instance divides trivially.  A consistent instance
    divides exactly when it identifies a solution variable with a parameter,
    or (edge-only case) some parameter subset certifies the bound criterion.
    Disjunctions are reported as undetermined: single-formula dividing of a
    disjunction is outside this criterion's scope.
    """
    overlap = set(b) & g.base
    if overlap:
        raise ValueError(f"parameters {sorted(overlap)} lie in the base set")
    if not isinstance(f, ConjFormula):
        return DividesVerdict(False, "none")
    p = instantiate(f, b, g)
    if not is_consistent(p, g, n, "Tn"):
        return DividesVerdict(True, "inconsistent")
    eqs = f.equality_conjuncts()
    if eqs:
        kind, t1, t2 = eqs[0]
        return DividesVerdict(
            True,
            "equality-conjunct",
            {"kind": kind, "lhs": f"{t1[0]}{t1[1]}", "rhs": f"{t2[0]}{t2[1]}"},
        )
    witness = formula_kn_bound(f, b, g, n)
    if witness is not None:
        return DividesVerdict(True, "kn-phi-bound", witness)
    return DividesVerdict(False, "none")


def divides_formula_t0(
    f: ConjFormula,
    b: Sequence[int],
    g: PointedGraph,
) -> DividesVerdict:
    """Dividing over the random graph: only identifications divide."""
    overlap = set(b) & g.base
    if overlap:
        raise ValueError(f"parameters {sorted(overlap)} lie in the base set")
    p = instantiate(f, b, g)
    if not is_consistent(p, g, 3, "T0"):
        return DividesVerdict(True, "inconsistent")
    eqs = f.equality_conjuncts()
    if eqs:
        kind, t1, t2 = eqs[0]
        return DividesVerdict(
            True,
            "equality-conjunct",
            {"kind": kind, "lhs": f"{t1[0]}{t1[1]}", "rhs": f"{t2[0]}{t2[1]}"},
        )
    return DividesVerdict(False, "none")


def dividing_indep(
    A: Iterable[int],
    B: Iterable[int],
    C: Iterable[int],
    g: Graph,
    n: int,
) -> tuple[bool, Optional[Violation]]:
    """Dividing independence of A from B over C, with a violation witness.

    Checks (i) A and B meet only inside C, and (ii) every subset S of B\\C
    with 1 <= |S| <= n-1 that is n-bound to A united with C is already
    n-bound to C.  The size cap loses nothing: a bound witness meets the
    non-S side, so it touches at most n-1 vertices of S, and restricting S
    to those vertices preserves both sides of the implication.
    """
    aset, bset, cset = frozenset(A), frozenset(B), frozenset(C)
    shared = sorted((aset & bset) - cset)
    if shared:
        return False, Violation("shared-vertex", tuple(shared))
    outside = sorted(bset - cset)
    ac = aset | cset
    for size in range(1, n):
        for subset in combinations(outside, size):
            if kn_bound(subset, ac, g, n) is None:
                continue
            if kn_bound(subset, cset, g, n) is None:
                return False, Violation("bound-subset", subset)
    return True, None


def forking_indep(
    A: Iterable[int],
    B: Iterable[int],
    C: Iterable[int],
    g: Graph,
    n: int,
) -> tuple[bool, Optional[Violation]]:
    """Forking independence; coincides with dividing independence on sets."""
    return dividing_indep(A, B, C, g, n)


def edge_indep(
    A: Iterable[int],
    B: Iterable[int],
    C: Iterable[int],
    g: Graph,
) -> bool:
    """A and B meet only inside C, with no edge between A\\C and B\\C."""
    aset, bset, cset = frozenset(A), frozenset(B), frozenset(C)
    if (aset & bset) - cset:
        return False
    a_out = aset - cset
    b_out = bset - cset
    for u in a_out:
        for v in b_out:
            if g.has_edge(u, v):
                return False
    return True


def full_existence(
    A: Iterable[int],
    B: Iterable[int],
    C: Iterable[int],
    g: Graph,
    n: int,
) -> tuple[Graph, tuple[int, ...]]:
    """A copy of A over C that is edge-independent from B over C.

    Every vertex of A outside C is replaced by a fresh vertex; internal
    edges of A and edges into C are copied, and the fresh vertices get no
    other edges (in particular none into B outside C).  Returns the extended
    graph and the copy tuple, aligned with sorted(A): shared C-vertices map
    to themselves.  The extension of a K_n-free graph stays K_n-free since
    the copied part together with C is isomorphic to A united with C.
    """
    aset, cset = frozenset(A), frozenset(C)
    moved = sorted(aset - cset)
    fresh = g.fresh_vertex_ids(len(moved))
    copy_of = dict(zip(moved, fresh))
    new_edges = []
    for i, a in enumerate(moved):
        for a2 in moved[i + 1:]:
            if g.has_edge(a, a2):
                new_edges.append((copy_of[a], copy_of[a2]))
        for c in sorted(cset):
            if g.has_edge(a, c):
                new_edges.append((copy_of[a], c))
    ext = g.extended(fresh, new_edges)
    copy_tuple = tuple(copy_of.get(a, a) for a in sorted(aset))
    return ext, copy_tuple


def forks_disjunction(
    disjuncts: Sequence[ConjFormula],
    b: Sequence[int],
    g: PointedGraph,
    n: int,
) -> tuple[bool, tuple[DividesVerdict, ...]]:
    """Sufficient forking test: every disjunct divides over the base.

    True means the disjunction forks.  False only means this criterion did
    not determine forking; it never asserts non-forking.
    """
    verdicts = tuple(divides_formula(d, b, g, n) for d in disjuncts)
    return bool(verdicts) and all(v.divides for v in verdicts), verdicts
