"""Uniform sequence templates: realization, validity, and scan machinery.

A *template* is a finite blueprint for an order-indexed sequence of copies
of a parameter tuple over a base set C.  It records the tuple's atomic type
over C (internal edges plus edges into C), which positions repeat the same
vertex in every copy, and one cross pattern: an ordered position pair (i, j)
in the pattern means the position-i vertex of every earlier copy is adjacent
to the position-j vertex of every later copy.

In a binary graph language the type of several copies over C is determined
by the per-copy type plus the pairwise copy-to-copy pattern, so a uniform
sequence built this way is C-indiscernible, and every C-indiscernible
sequence of distinct-vertex tuples is reproduced by some template (copy-wise
repeated vertices become constant positions).  A template is realizable
inside a generic K_n-free graph exactly when its windows are K_n-free, and
the window of length n decides this: a complete subgraph meets at most one
vertex per copy per column, hence at most n copies, and the edge rule
depends only on the relative order of copies.

The explicit pattern that witnesses dividing is also built here: given a
subset B of the tuple, connect position i of an earlier copy to position j
of a later copy exactly when i < j and both positions lie in B.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Optional, Sequence

from .formula import (
    ConjFormula,
    conj,
    edge_constraints,
    instantiate,
    is_consistent,
    union_constraints,
)
from .graph import Graph, PointedGraph, find_clique, is_kn_free
from .independence import forks_disjunction


@dataclass(frozen=True)
class BaseType:
    """Atomic type of a parameter tuple over a base set.

    `edges` holds position pairs (i, j) with i < j that are adjacent inside
    the tuple; `anchors` holds (position, base-vertex) adjacencies.
    Positions are 1-based.
    """

    edges: frozenset[tuple[int, int]]
    anchors: frozenset[tuple[int, int]]


def base_type_of(g: Graph, b: Sequence[int], C: Iterable[int]) -> BaseType:
    edges = frozenset(
        (i, j)
        for i, j in combinations(range(1, len(b) + 1), 2)
        if g.has_edge(b[i - 1], b[j - 1])
    )
    anchors = frozenset(
        (i, c)
        for i in range(1, len(b) + 1)
        for c in sorted(C)
        if g.has_edge(b[i - 1], c)
    )
    return BaseType(edges, anchors)


@dataclass(frozen=True)
class SequenceTemplate:
    positions: int
    base: BaseType
    constant_positions: frozenset[int]
    cross: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        rng = range(1, self.positions + 1)
        for p in self.constant_positions:
            if p not in rng:
                raise ValueError(f"constant position {p} out of range")
        for i, j in self.cross:
            if i not in rng or j not in rng:
                raise ValueError(f"cross pair ({i}, {j}) out of range")
            if i in self.constant_positions or j in self.constant_positions:
                raise ValueError(f"cross pair ({i}, {j}) touches a constant position")

    def to_json(self) -> dict:
        return {
            "positions": self.positions,
            "constant": sorted(self.constant_positions),
            "cross": sorted([i, j] for i, j in self.cross),
            "base_edges": sorted([i, j] for i, j in self.base.edges),
            "base_anchors": sorted([i, c] for i, c in self.base.anchors),
        }


def template_from_json(obj: dict) -> SequenceTemplate:
    return SequenceTemplate(
        positions=int(obj["positions"]),
        base=BaseType(
            frozenset((i, j) for i, j in obj.get("base_edges", [])),
            frozenset((i, c) for i, c in obj.get("base_anchors", [])),
        ),
        constant_positions=frozenset(obj.get("constant", [])),
        cross=frozenset((i, j) for i, j in obj.get("cross", [])),
    )


@dataclass(frozen=True)
class SequenceWindow:
    """A realized finite window: C plus L copies under a template."""

    graph: Graph
    base: frozenset[int]
    copies: tuple[tuple[int, ...], ...]
    template: SequenceTemplate

    def column(self, position: int) -> tuple[int, ...]:
        """Distinct vertices occupying one position across all copies."""
        seen: list[int] = []
        for copy in self.copies:
            v = copy[position - 1]
            if v not in seen:
                seen.append(v)
        return tuple(seen)


def realize_template(
    t: SequenceTemplate,
    C: Iterable[int],
    g: Graph,
    L: int,
) -> SequenceWindow:
    """Materialize L copies; the window graph contains exactly C and the copies.

    Fresh vertices are numbered copy-major above every vertex of `g`;
    constant positions allocate once and are shared by all copies.
    """
    if L < 0:
        raise ValueError(f"window length must be >= 0, got {L}")
    base = frozenset(C)
    next_id = g.vertices[-1] + 1 if g.vertices else 0
    k = t.positions
    verts: list[list[int]] = []
    for l in range(L):
        row = []
        for i in range(1, k + 1):
            if i in t.constant_positions and l > 0:
                row.append(verts[0][i - 1])
            else:
                row.append(next_id)
                next_id += 1
        verts.append(row)

    base_sorted = sorted(base)
    edges: set[tuple[int, int]] = set()
    for u, v in combinations(base_sorted, 2):
        if g.has_edge(u, v):
            edges.add((u, v))

    def add(u: int, v: int) -> None:
        if u != v:
            edges.add((min(u, v), max(u, v)))

    for l in range(L):
        row = verts[l]
        for i, j in t.base.edges:
            add(row[i - 1], row[j - 1])
        for i, c in t.base.anchors:
            add(row[i - 1], c)
    for l in range(L):
        for m in range(l + 1, L):
            for i, j in t.cross:
                add(verts[l][i - 1], verts[m][j - 1])

    all_vertices = list(base_sorted)
    seen = set(base_sorted)
    for row in verts:
        for v in row:
            if v not in seen:
                seen.add(v)
                all_vertices.append(v)
    window = Graph(all_vertices, edges)
    return SequenceWindow(window, base, tuple(tuple(r) for r in verts), t)


def gamma_template(
    g: Graph,
    b: Sequence[int],
    C: Iterable[int],
    B: Iterable[int],
) -> SequenceTemplate:
    """Template of the dividing-witness sequence for the subset B of b.

    Cross edges run from position i of an earlier copy to position j of a
    later copy exactly when i < j and both tuple entries lie in B; there are
    no constant positions.
    """
    bset = frozenset(B)
    extra = bset - set(b)
    if extra:
        raise ValueError(f"witness set contains non-parameters {sorted(extra)}")
    k = len(b)
    cross = frozenset(
        (i, j)
        for i, j in combinations(range(1, k + 1), 2)
        if b[i - 1] in bset and b[j - 1] in bset
    )
    return SequenceTemplate(k, base_type_of(g, b, C), frozenset(), cross)


def gamma(
    C: Iterable[int],
    b: Sequence[int],
    B: Iterable[int],
    g: PointedGraph,
    L: int,
) -> SequenceWindow:
    """Realized window of the dividing-witness sequence."""
    base = frozenset(C)
    if set(b) & base:
        raise ValueError("parameter tuple must be disjoint from the base set")
    t = gamma_template(g.graph, b, base, B)
    return realize_template(t, base, g.graph, L)


def is_template_valid(
    t: SequenceTemplate,
    C: Iterable[int],
    g: Graph,
    n: int,
) -> bool:
    """Realizability over the generic K_n-free graph: the length-n window is K_n-free."""
    w = realize_template(t, C, g, n)
    return is_kn_free(w.graph, n)


def check_k_inconsistent(
    f: ConjFormula,
    w: SequenceWindow,
    k: int,
    n: int,
    mode: str = "Tn",
) -> bool:
    """Whether the union of the first k instances over the window is unsatisfiable."""
    if not (0 <= k <= len(w.copies)):
        raise ValueError(f"k must lie in 0..{len(w.copies)}, got {k}")
    if k == 0:
        return False
    pg = PointedGraph(w.graph, base=w.base)
    parts = [instantiate(f, w.copies[l], pg) for l in range(k)]
    merged = union_constraints(parts, w.graph)
    return not is_consistent(merged, pg, n, mode)


def enumerate_templates(
    base: BaseType,
    positions: int,
    C: Iterable[int],
    g: Graph,
    n: int,
    *,
    require_kn_free: bool = True,
    max_positions: int = 6,
    max_base: int = 4,
) -> Iterator[SequenceTemplate]:
    """Every template over the given base type, in a fixed deterministic order.

    Constant sets are enumerated by size then lexicographically; for each,
    cross patterns run through all subsets of ordered non-constant position
    pairs in bitmask order.  With `require_kn_free` (the default) templates
    whose length-n window contains a K_n are filtered out.  The caps bound
    the 2^(positions^2) growth and can be raised explicitly.
    """
    base_set = frozenset(C)
    if positions > max_positions:
        raise ValueError(
            f"{positions} positions exceeds cap {max_positions}; raise max_positions to override"
        )
    if len(base_set) > max_base:
        raise ValueError(
            f"base of size {len(base_set)} exceeds cap {max_base}; raise max_base to override"
        )
    all_positions = range(1, positions + 1)
    for size in range(positions + 1):
        for const_combo in combinations(all_positions, size):
            const = frozenset(const_combo)
            noncon = [p for p in all_positions if p not in const]
            pairs = [(i, j) for i in noncon for j in noncon]
            for bits in range(1 << len(pairs)):
                cross = frozenset(pairs[t] for t in range(len(pairs)) if bits >> t & 1)
                tmpl = SequenceTemplate(positions, base, const, cross)
                if require_kn_free and not is_template_valid(tmpl, base_set, g, n):
                    continue
                yield tmpl


# -- the four-column dichotomy scan ----------------------------------------


def _jointly_edge_free_pair(w: SequenceWindow) -> Optional[tuple[int, int]]:
    """First position pair whose two columns span no edge at all."""
    g = w.graph
    for i, j in combinations(range(1, w.template.positions + 1), 2):
        col = set(w.column(i)) | set(w.column(j))
        mask = g.mask_of(col)
        if all(g.adjacency_row(v) & mask == 0 for v in col):
            return (i, j)
    return None


def dichotomy_scan(copies: int = 6) -> dict:
    """Exhaustive check of the edge-free-pair-or-triangle dichotomy.

    Over every 4-position template with an edge-free base (all constant-set
    choices, all cross patterns), a realized window must either contain a
    position pair whose columns span no edge, or contain a triangle.
    Patterns are classified into the first branch that applies; a pattern
    matching neither is a violation and the scan exists to show there are
    none.
    """
    positions = 4
    empty = Graph([])
    base = BaseType(frozenset(), frozenset())
    per_constant = []
    total = 0
    n_pair = 0
    n_triangle = 0
    violations: list[dict] = []
    for size in range(positions + 1):
        for const_combo in combinations(range(1, positions + 1), size):
            const = frozenset(const_combo)
            noncon = [p for p in range(1, positions + 1) if p not in const]
            pairs = [(i, j) for i in noncon for j in noncon]
            row = {"constant": sorted(const), "patterns": 0, "edge_free_pair": 0, "triangle": 0}
            for bits in range(1 << len(pairs)):
                cross = frozenset(pairs[t] for t in range(len(pairs)) if bits >> t & 1)
                tmpl = SequenceTemplate(positions, base, const, cross)
                w = realize_template(tmpl, (), empty, copies)
                row["patterns"] += 1
                if _jointly_edge_free_pair(w) is not None:
                    row["edge_free_pair"] += 1
                elif find_clique(w.graph, 3) is not None:
                    row["triangle"] += 1
                else:
                    violations.append(tmpl.to_json())
            total += row["patterns"]
            n_pair += row["edge_free_pair"]
            n_triangle += row["triangle"]
            per_constant.append(row)
    return {
        "copies": copies,
        "positions": positions,
        "total_patterns": total,
        "edge_free_pair": n_pair,
        "triangle": n_triangle,
        "violations": violations,
        "per_constant_set": per_constant,
    }


# -- the forking, non-dividing disjunction ----------------------------------


def build_fork_nondivide_example(
    n: int,
) -> tuple[PointedGraph, tuple[int, ...], tuple[ConjFormula, ...]]:
    """The canonical disjunction that forks but does not divide.

    The base is a clique on n-3 vertices (empty for n=3); the parameter
    tuple is four pairwise non-adjacent vertices, each adjacent to all of
    the base.  The disjuncts assert adjacency to the base and to one pair of
    parameters.  The ambient graph is K_n-free: its largest cliques have
    n-2 vertices.
    """
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    c_verts = list(range(n - 3))
    b_verts = list(range(n - 3, n + 1))
    edges = [(u, v) for u, v in combinations(c_verts, 2)]
    edges += [(c, b) for c in c_verts for b in b_verts]
    graph = Graph(c_verts + b_verts, edges)
    pg = PointedGraph(
        graph,
        base=frozenset(c_verts),
        named_sets={"C": frozenset(c_verts)},
        named_tuples={"b": tuple(b_verts)},
    )
    x1 = ("x", 1)
    disjuncts = []
    for i, j in combinations(range(1, 5), 2):
        lits = [("edge", x1, ("y", i)), ("edge", x1, ("y", j))]
        lits += [("edge", x1, ("c", c)) for c in c_verts]
        disjuncts.append(conj(1, 4, lits, c_verts))
    return pg, tuple(b_verts), tuple(disjuncts)


def verify_fork_nondivide_instance(
    pg: PointedGraph,
    b: Sequence[int],
    disjuncts: Sequence[ConjFormula],
    n: int,
    l_max: int = 6,
) -> dict:
    """Check forking and complete non-dividing for a built example instance.

    Refuses (raises) when the instance does not have the required shape.
    Forking: every disjunct must divide over the base.  Non-dividing: for
    every valid template over the 4-position base type, the realized window
    must contain a jointly edge-free column pair, and one new vertex adjacent
    to the base plus both columns must be consistent -- a single solution
    then satisfies one disjunct at every index, so no uniform sequence can
    make the disjunction inconsistent.
    """
    g = pg.graph
    C = sorted(pg.base)
    if len(C) != n - 3:
        raise ValueError(f"base must have {n - 3} vertices, found {len(C)}")
    if any(not g.has_edge(u, v) for u, v in combinations(C, 2)):
        raise ValueError("base must be a clique; refusing to verify a tampered instance")
    if len(b) != 4 or len(set(b)) != 4:
        raise ValueError("parameter tuple must be 4 distinct vertices")
    if any(g.has_edge(u, v) for u, v in combinations(b, 2)):
        raise ValueError("parameters must be pairwise non-adjacent; refusing tampered instance")
    if any(not g.has_edge(v, c) for v in b for c in C):
        raise ValueError("every parameter must be adjacent to the whole base")
    if not is_kn_free(g, n):
        raise ValueError(f"ambient graph contains a K_{n}")

    forks, verdicts = forks_disjunction(disjuncts, b, pg, n)

    base = base_type_of(g, b, pg.base)
    checked = 0
    violations: list[dict] = []
    for tmpl in enumerate_templates(base, 4, pg.base, g, n):
        checked += 1
        w = realize_template(tmpl, pg.base, g, l_max)
        pair = _jointly_edge_free_pair(w)
        if pair is None:
            violations.append({"template": tmpl.to_json(), "missing": "edge-free-pair"})
            continue
        i, j = pair
        targets = sorted(set(C) | set(w.column(i)) | set(w.column(j)))
        joint = edge_constraints(
            ("x1",),
            [(True, ("v", "x1"), ("a", v)) for v in targets],
            w.graph,
        )
        if not is_consistent(joint, PointedGraph(w.graph, base=pg.base), n, "Tn"):
            violations.append({"template": tmpl.to_json(), "missing": "joint-realization"})
    return {
        "n": n,
        "l_max": l_max,
        "forks": forks,
        "disjunct_verdicts": [v.to_json() for v in verdicts],
        "templates_checked": checked,
        "violations": violations,
        "ok": forks and not violations,
    }


def verify_fork_nondivide(n: int, l_max: int = 6) -> dict:
    """Build and verify the forking, non-dividing example for a given n."""
    pg, b, disjuncts = build_fork_nondivide_example(n)
    return verify_fork_nondivide_instance(pg, b, disjuncts, n, l_max)
