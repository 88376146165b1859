"""Definition-level dividing oracle via exhaustive template enumeration.

The criterion module decides dividing through a combinatorial bound witness.
This module decides it straight from the definition instead: enumerate every
uniform sequence blueprint whose per-copy type matches the parameter tuple's
type over the base, realize a finite window, and ask whether the union of
the instances along the first k copies becomes unsatisfiable for some k up
to a limit.  Whenever dividing holds at all, the explicit witness pattern is
itself one of the enumerated templates and fails at width n-1, so a width
limit of at least n-1 makes the search complete; the default keeps a margin.

Dividing verdicts carry a certificate (template plus width) that is
re-validated through the object-level consistency path before being
returned, so a positive answer never rests on the fast evaluator alone.

The set-level oracle reduces type dividing to one formula: the full atomic
diagram of A over the base and parameters is the strongest formula of the
type, and dividing transfers along instance-wise implication over the same
parameter sequence, so the type divides exactly when that single conjunction
does.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .formula import (
    ConjFormula,
    InconsistentInstanceError,
    conj,
    instantiate,
    is_consistent,
)
from .graph import Graph, PointedGraph, find_clique_in_mask
from .sequences import (
    SequenceTemplate,
    SequenceWindow,
    base_type_of,
    check_k_inconsistent,
    enumerate_templates,
    is_template_valid,
    realize_template,
)


@dataclass(frozen=True)
class OracleVerdict:
    divides: bool
    template: Optional[SequenceTemplate]
    k: Optional[int]
    l_max: int

    def to_json(self) -> dict:
        return {
            "divides": self.divides,
            "template": self.template.to_json() if self.template else None,
            "k": self.k,
            "l_max": self.l_max,
        }


@dataclass(frozen=True)
class _Compiled:
    """Literal lists of a formula, split by endpoint classes."""

    x_count: int
    eq: tuple[tuple[int, int], ...]
    pos_xx: tuple[tuple[int, int], ...]
    neg_xx: tuple[tuple[int, int], ...]
    pos_xy: tuple[tuple[int, int], ...]
    neg_xy: tuple[tuple[int, int], ...]
    pos_xc: tuple[tuple[int, int], ...]
    neg_xc: tuple[tuple[int, int], ...]
    pos_amb: tuple[tuple, ...]  # y-y, y-c, c-c pairs, endpoints as terms
    neg_amb: tuple[tuple, ...]


@lru_cache(maxsize=65536)
def _compile(f: ConjFormula) -> _Compiled:
    eq, pxx, nxx, pxy, nxy, pxc, nxc, pamb, namb = [], [], [], [], [], [], [], [], []
    for kind, a, b in f.sorted_conjuncts():
        if kind == "eq":
            xt, yt = (a, b) if a[0] == "x" else (b, a)
            eq.append((xt[1], yt[1]))
            continue
        pos = kind == "edge"
        ka, kb = a[0], b[0]
        if ka == "x" and kb == "x":
            (pxx if pos else nxx).append((a[1], b[1]))
        elif ka == "x" and kb == "y":
            (pxy if pos else nxy).append((a[1], b[1]))
        elif ka == "x" and kb == "c":
            (pxc if pos else nxc).append((a[1], b[1]))
        else:
            (pamb if pos else namb).append((a, b))
    return _Compiled(
        f.x_arity,
        tuple(eq),
        tuple(pxx), tuple(nxx),
        tuple(pxy), tuple(nxy),
        tuple(pxc), tuple(nxc),
        tuple(pamb), tuple(namb),
    )


@dataclass
class _Entry:
    template: SequenceTemplate
    window: SequenceWindow
    rows: list[int]
    vbit: dict[int, int]


class TemplateSpace:
    """All candidate templates for one (graph, base, tuple) cell, realized once.

    Building the space is the expensive part of an oracle call; grid runners
    construct one space per cell and evaluate many formulas against it.
    """

    def __init__(
        self,
        g: PointedGraph,
        b: Sequence[int],
        n: int,
        l_max: int,
        mode: str = "Tn",
    ):
        if mode not in ("T0", "Tn"):
            raise ValueError(f"mode must be 'T0' or 'Tn', got {mode!r}")
        if l_max < 2:
            raise ValueError(f"l_max must be >= 2, got {l_max}")
        self.pointed = g
        self.b = tuple(b)
        self.n = n
        self.l_max = l_max
        self.mode = mode
        base = base_type_of(g.graph, self.b, g.base)
        self.entries: list[_Entry] = []
        for tmpl in enumerate_templates(
            base,
            len(self.b),
            g.base,
            g.graph,
            n,
            require_kn_free=(mode == "Tn"),
        ):
            w = realize_template(tmpl, g.base, g.graph, l_max)
            wg = w.graph
            self.entries.append(
                _Entry(tmpl, w, wg.adjacency_rows(), {v: wg.bit_of(v) for v in wg.vertices})
            )


def _union_inconsistent(entry: _Entry, comp: _Compiled, k: int, n: int, mode: str) -> bool:
    """Unsatisfiability of the union of the first k instances over the window.

    Works directly on the window's bitmasks; observably equivalent to
    instantiating each copy, merging, and running the consistency check.
    """
    copies = entry.window.copies
    graph = entry.window.graph
    vbit = entry.vbit

    assigned: dict[int, int] = {}
    for i, j in comp.eq:
        for l in range(k):
            v = copies[l][j - 1]
            prev = assigned.setdefault(i, v)
            if prev != v:
                return True  # one variable forced to two distinct vertices

    reqp = [0] * (comp.x_count + 1)
    reqn = [0] * (comp.x_count + 1)

    def require(i: int, vertex: int, pos: bool) -> Optional[str]:
        if i in assigned:
            u = assigned[i]
            if u == vertex:
                return "loop" if pos else None
            return None if graph.has_edge(u, vertex) == pos else "broken"
        if pos:
            reqp[i] |= vbit[vertex]
        else:
            reqn[i] |= vbit[vertex]
        return None

    for l in range(k):
        row = copies[l]
        for i, j in comp.pos_xy:
            if require(i, row[j - 1], True):
                return True
        for i, j in comp.neg_xy:
            if require(i, row[j - 1], False):
                return True
        for a, b in comp.pos_amb:
            u = row[a[1] - 1] if a[0] == "y" else a[1]
            v = row[b[1] - 1] if b[0] == "y" else b[1]
            if u == v or not graph.has_edge(u, v):
                return True
        for a, b in comp.neg_amb:
            u = row[a[1] - 1] if a[0] == "y" else a[1]
            v = row[b[1] - 1] if b[0] == "y" else b[1]
            if u != v and graph.has_edge(u, v):
                return True
    for i, c in comp.pos_xc:
        if require(i, c, True):
            return True
    for i, c in comp.neg_xc:
        if require(i, c, False):
            return True

    xx_pos = set()
    for i, i2 in comp.pos_xx:
        ai, ai2 = i in assigned, i2 in assigned
        if ai and ai2:
            u, v = assigned[i], assigned[i2]
            if u == v or not graph.has_edge(u, v):
                return True
        elif ai:
            reqp[i2] |= vbit[assigned[i]]
        elif ai2:
            reqp[i] |= vbit[assigned[i2]]
        else:
            xx_pos.add((min(i, i2), max(i, i2)))
    xx_neg = set()
    for i, i2 in comp.neg_xx:
        ai, ai2 = i in assigned, i2 in assigned
        if ai and ai2:
            if assigned[i] != assigned[i2] and graph.has_edge(assigned[i], assigned[i2]):
                return True
        elif ai:
            reqn[i2] |= vbit[assigned[i]]
        elif ai2:
            reqn[i] |= vbit[assigned[i2]]
        else:
            xx_neg.add((min(i, i2), max(i, i2)))

    free = [i for i in range(1, comp.x_count + 1) if i not in assigned]
    for i in free:
        if reqp[i] & reqn[i]:
            return True
    if xx_pos & xx_neg:
        return True
    if mode == "T0":
        return False

    # A clique completing the window to a K_n must pass through the fresh
    # solution vertices; try every positively-linked subset of them.
    rows = entry.rows
    for r in range(1, len(free) + 1):
        for subset in combinations(free, r):
            if any((min(p), max(p)) not in xx_pos for p in combinations(subset, 2)):
                continue
            if r >= n:
                return True  # the fresh vertices alone already stack a K_n
            common = -1
            for i in subset:
                common &= reqp[i]
            if find_clique_in_mask(rows, common, n - r) is not None:
                return True
    return False


def _search(space: TemplateSpace, f: ConjFormula, n: int) -> OracleVerdict:
    comp = _compile(f)
    mode = space.mode
    l_max = space.l_max
    for entry in space.entries:
        if not _union_inconsistent(entry, comp, l_max, n, mode):
            continue
        k = next(
            k for k in range(2, l_max + 1) if _union_inconsistent(entry, comp, k, n, mode)
        )
        _revalidate(space, entry, f, k, n)
        return OracleVerdict(True, entry.template, k, l_max)
    return OracleVerdict(False, None, None, l_max)


def _revalidate(space: TemplateSpace, entry: _Entry, f: ConjFormula, k: int, n: int) -> None:
    """Re-check a positive certificate through the object-level path."""
    if not check_k_inconsistent(f, entry.window, k, n, space.mode):
        raise RuntimeError(
            "oracle certificate failed object-level re-validation "
            f"(template {entry.template.to_json()}, k={k})"
        )
    if space.mode == "Tn" and not is_template_valid(
        entry.template, space.pointed.base, space.pointed.graph, n
    ):
        raise RuntimeError("oracle certificate template is not realizable")


def _check_instance(f: ConjFormula, b: Sequence[int], g: PointedGraph, n: int, mode: str) -> None:
    overlap = set(b) & g.base
    if overlap:
        raise ValueError(f"parameters {sorted(overlap)} lie in the base set")
    p0 = instantiate(f, b, g)
    if not is_consistent(p0, g, n, mode):
        raise InconsistentInstanceError("formula instance is inconsistent; nothing to decide")


def divides_oracle(
    f: ConjFormula,
    b: Sequence[int],
    g: PointedGraph,
    n: int,
    l_max: Optional[int] = None,
) -> OracleVerdict:
    """Brute-force dividing decision over the generic K_n-free graph.

    Complete relative to the criterion for l_max >= n-1; defaults to n+1.
    Equality conjuncts are handled by substitution, so the full atomic
    diagram of a set is acceptable input.
    """
    if l_max is None:
        l_max = n + 1
    _check_instance(f, b, g, n, "Tn")
    space = TemplateSpace(g, b, n, l_max, "Tn")
    return _search(space, f, n)


def divides_oracle_t0(
    f: ConjFormula,
    b: Sequence[int],
    g: PointedGraph,
    l_max: int = 4,
) -> OracleVerdict:
    """Brute-force dividing decision over the random graph.

    Same enumeration without the K_n realizability filter (vertical cross
    edges are allowed there) and with plain satisfiability as consistency.
    """
    _check_instance(f, b, g, 3, "T0")
    space = TemplateSpace(g, b, 3, l_max, "T0")
    return _search(space, f, 3)


def full_diagram_formula(
    A: Iterable[int],
    B: Iterable[int],
    C: Iterable[int],
    g: Graph,
) -> Optional[tuple[ConjFormula, tuple[int, ...]]]:
    """The strongest formula of the type of A over C and B\\C.

    One solution variable per vertex of A outside C (vertices of A inside C
    are folded into constants), one parameter slot per vertex of B outside C;
    a shared vertex becomes an identification conjunct.  Returns None when
    either side is empty, in which case the type cannot divide.
    """
    aset, bset, cset = frozenset(A), frozenset(B), frozenset(C)
    a_out = sorted(aset - cset)
    b_out = sorted(bset - cset)
    if not a_out or not b_out:
        return None
    conjuncts: list[tuple] = []
    for i, a in enumerate(a_out):
        xt = ("x", i + 1)
        for i2 in range(i + 1, len(a_out)):
            a2 = a_out[i2]
            kind = "edge" if g.has_edge(a, a2) else "nonedge"
            conjuncts.append((kind, xt, ("x", i2 + 1)))
        for j, bv in enumerate(b_out):
            if a == bv:
                conjuncts.append(("eq", xt, ("y", j + 1)))
            else:
                kind = "edge" if g.has_edge(a, bv) else "nonedge"
                conjuncts.append((kind, xt, ("y", j + 1)))
        for c in sorted(cset):
            kind = "edge" if g.has_edge(a, c) else "nonedge"
            conjuncts.append((kind, xt, ("c", c)))
    return conj(len(a_out), len(b_out), conjuncts, cset), tuple(b_out)


def dividing_indep_oracle(
    A: Iterable[int],
    B: Iterable[int],
    C: Iterable[int],
    g: Graph,
    n: int,
    l_max: Optional[int] = None,
) -> bool:
    """Dividing independence decided through the single-formula reduction."""
    built = full_diagram_formula(A, B, C, g)
    if built is None:
        return True
    f_full, b_out = built
    pg = PointedGraph(g, base=frozenset(C))
    verdict = divides_oracle(f_full, b_out, pg, n, l_max)
    return not verdict.divides
