"""Exhaustive and randomized agreement runs between criterion and oracle.

The exhaustive grid enumerates, for each arity cell, every K_n-free ambient
graph on the base-plus-parameters vertex set and every positive conjunct set
over the variable-involving literal universe, deduplicated up to canonical
form under base relabeling, parameter-position relabeling, and solution
variable relabeling.  Negated literals are omitted from the enumeration on
purpose: for a consistent instance they are inert on both sides of the
comparison.  The minimal-edge candidate realizes exactly the positive
literals, so negatives never change consistency or the bound search; and in
a union along a uniform sequence a positive and a negative requirement can
only collide on the same variable-parameter pair, which would make the
instance itself contradictory.  A property test backs this reduction by
injecting random non-contradicting negatives and checking both verdicts are
unchanged.

The random-graph baseline grid adds identification states to the
variable-parameter pairs.  There the comparison outcome is provably
independent of the ambient edges (edges only decide which instances are
consistent), so each cell runs over three representative ambients: empty,
complete, and one seeded random graph.

Every run reports zero-tolerance violation lists rather than booleans, so a
failure pinpoints the offending instance.
"""

from __future__ import annotations

import random
import time
from itertools import combinations, permutations, product
from typing import Optional, Sequence

from .formula import (
    ConjFormula,
    conj,
    formula_to_json,
    instantiate,
    is_consistent,
    positive_edge_support,
)
from .graph import (
    Graph,
    PointedGraph,
    find_clique_in_mask,
    graph_to_json,
    is_kn_free,
    qf_type_equal_over,
    random_kn_free,
)
from .independence import (
    dividing_indep,
    divides_formula,
    divides_formula_t0,
    edge_indep,
    full_existence,
)
from .oracle import TemplateSpace, _search, dividing_indep_oracle
from .sequences import check_k_inconsistent, gamma_template, is_template_valid, realize_template

ABSENT, EDGE, NONEDGE, IDENT = 0, 1, 2, 3


# -- labeled graph enumeration ----------------------------------------------


def _vertex_pairs(v: int) -> list[tuple[int, int]]:
    return list(combinations(range(v), 2))


def kn_free_masks(v: int, n: Optional[int]) -> list[int]:
    """Edge bitmasks of all labeled graphs on 0..v-1; K_n-free ones if n is set."""
    pairs = _vertex_pairs(v)
    out = []
    for mask in range(1 << len(pairs)):
        if n is not None:
            adj = [0] * v
            for t in range(len(pairs)):
                if mask >> t & 1:
                    a, b = pairs[t]
                    adj[a] |= 1 << b
                    adj[b] |= 1 << a
            if find_clique_in_mask(adj, (1 << v) - 1, n) is not None:
                continue
        out.append(mask)
    return out


def _group_elements(c: int, k: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All (base-vertex permutation, position permutation) pairs."""
    return [
        (sc, sb)
        for sc in permutations(range(c))
        for sb in permutations(range(1, k + 1))
    ]


def _mask_relabel_tables(c: int, k: int) -> list[list[int]]:
    """Per group element, the induced permutation of vertex-pair indices."""
    v = c + k
    pairs = _vertex_pairs(v)
    index = {p: t for t, p in enumerate(pairs)}
    tables = []
    for sc, sb in _group_elements(c, k):
        vperm = list(range(v))
        for old in range(c):
            vperm[old] = sc[old]
        for pos in range(k):
            vperm[c + pos] = c + sb[pos] - 1
        table = []
        for a, b in pairs:
            na, nb = vperm[a], vperm[b]
            table.append(index[(min(na, nb), max(na, nb))])
        tables.append(table)
    return tables


def _relabel_mask(mask: int, table: list[int]) -> int:
    out = 0
    t = 0
    while mask:
        if mask & 1:
            out |= 1 << table[t]
        mask >>= 1
        t += 1
    return out


def graph_orbit_reps(
    c: int,
    k: int,
    masks: Sequence[int],
) -> list[tuple[int, list[int]]]:
    """Orbit representatives with the indices of their stabilizing group elements."""
    tables = _mask_relabel_tables(c, k)
    reps = []
    for mask in masks:
        images = [_relabel_mask(mask, tb) for tb in tables]
        if mask == min(images):
            stab = [gi for gi, img in enumerate(images) if img == mask]
            reps.append((mask, stab))
    return reps


# -- formula-state enumeration ----------------------------------------------


def _formula_pairs(c: int, k: int, x: int):
    xx = list(combinations(range(1, x + 1), 2))
    xy = [(i, j) for i in range(1, x + 1) for j in range(1, k + 1)]
    xc = [(i, cv) for i in range(1, x + 1) for cv in range(c)]
    return xx, xy, xc


def _state_relabel_tables(c: int, k: int, x: int) -> list[list[int]]:
    """Permutations of the literal-slot order under (base, position, variable) relabeling."""
    xx, xy, xc = _formula_pairs(c, k, x)
    index: dict[tuple, int] = {}
    for t, p in enumerate(xx):
        index[("xx",) + p] = t
    off = len(xx)
    for t, p in enumerate(xy):
        index[("xy",) + p] = off + t
    off += len(xy)
    for t, p in enumerate(xc):
        index[("xc",) + p] = off + t
    tables = []
    for sc, sb in _group_elements(c, k):
        for sx in permutations(range(1, x + 1)):
            table = []
            for i, i2 in xx:
                a, b = sorted((sx[i - 1], sx[i2 - 1]))
                table.append(index[("xx", a, b)])
            for i, j in xy:
                table.append(index[("xy", sx[i - 1], sb[j - 1])])
            for i, cv in xc:
                table.append(index[("xc", sx[i - 1], sc[cv])])
            tables.append(table)
    return tables


def _stab_state_tables(c: int, k: int, x: int, stab: list[int]) -> list[list[int]]:
    """State tables restricted to the graph stabilizer (crossed with variable perms)."""
    all_tables = _state_relabel_tables(c, k, x)
    n_sx = 1
    for i in range(2, x + 1):
        n_sx *= i
    keep = []
    for gi in stab:
        keep.extend(all_tables[gi * n_sx: (gi + 1) * n_sx])
    return keep


def _states_canonical(states: tuple[int, ...], tables: list[list[int]]) -> bool:
    for tb in tables:
        img = [0] * len(states)
        for idx, st in enumerate(states):
            img[tb[idx]] = st
        if tuple(img) < states:
            return False
    return True


def _formula_of_states(
    states: tuple[int, ...],
    c: int,
    k: int,
    x: int,
) -> ConjFormula:
    xx, xy, xc = _formula_pairs(c, k, x)
    conjuncts = []
    idx = 0
    for i, i2 in xx:
        st = states[idx]
        idx += 1
        if st == EDGE:
            conjuncts.append(("edge", ("x", i), ("x", i2)))
        elif st == NONEDGE:
            conjuncts.append(("nonedge", ("x", i), ("x", i2)))
    for i, j in xy:
        st = states[idx]
        idx += 1
        if st == EDGE:
            conjuncts.append(("edge", ("x", i), ("y", j)))
        elif st == NONEDGE:
            conjuncts.append(("nonedge", ("x", i), ("y", j)))
        elif st == IDENT:
            conjuncts.append(("eq", ("x", i), ("y", j)))
    for i, cv in xc:
        st = states[idx]
        idx += 1
        if st == EDGE:
            conjuncts.append(("edge", ("x", i), ("c", cv)))
        elif st == NONEDGE:
            conjuncts.append(("nonedge", ("x", i), ("c", cv)))
    return conj(x, k, conjuncts, range(c))


def _instance_json(pg: PointedGraph, b: tuple[int, ...], f: ConjFormula, n: int) -> dict:
    return {
        "n": n,
        "graph": graph_to_json(pg.graph),
        "sets": {"C": sorted(pg.base)},
        "tuples": {"b": list(b)},
        "formula": formula_to_json(f),
    }


# -- gamma / necessary-condition side checks --------------------------------


def _side_checks(
    report: dict,
    f: ConjFormula,
    b: tuple[int, ...],
    pg: PointedGraph,
    n: int,
    verdict,
    instance: dict,
) -> None:
    """Witness-pattern and support checks applied to every dividing verdict."""
    verts, xs = positive_edge_support(f, b, pg)
    if not (len(verts) + len(xs) >= n and len(set(b) & verts) > 1):
        report["support_violations"].append(instance)
    if not any(kind == "edge" and {a[0], b2[0]} == {"x", "y"} for kind, a, b2 in f.conjuncts):
        report["no_positive_xy_violations"].append(instance)
    witness = verdict.witness
    report["gamma_checked"] += 1
    tmpl = gamma_template(pg.graph, b, pg.base, witness.subset)
    if not is_template_valid(tmpl, pg.base, pg.graph, n):
        report["gamma_violations"].append({"instance": instance, "failed": "kn-free"})
        return
    window = realize_template(tmpl, pg.base, pg.graph, n - 1)
    if not check_k_inconsistent(f, window, n - 1, n):
        report["gamma_violations"].append({"instance": instance, "failed": "width"})


def _blank_report(n: int, l_max: int) -> dict:
    return {
        "n": n,
        "l_max": l_max,
        "cells": [],
        "instances": 0,
        "consistent": 0,
        "inconsistent": 0,
        "dividing": 0,
        "mismatches": [],
        "support_violations": [],
        "no_positive_xy_violations": [],
        "gamma_checked": 0,
        "gamma_violations": [],
        "elapsed_s": 0.0,
    }


# -- the exhaustive criterion/oracle grid ------------------------------------


def run_formula_grid(
    n: int = 3,
    c_sizes: Sequence[int] = (0, 1, 2),
    b_sizes: Sequence[int] = (1, 2, 3),
    x_sizes: Sequence[int] = (1, 2),
    l_max: int = 4,
    side_checks: bool = True,
) -> dict:
    """Exhaustive agreement run: bound criterion against the template oracle."""
    t0 = time.monotonic()
    report = _blank_report(n, l_max)
    for c in c_sizes:
        for k in b_sizes:
            masks = kn_free_masks(c + k, n)
            reps = graph_orbit_reps(c, k, masks)
            cell_instances = 0
            for mask, stab in reps:
                pairs = _vertex_pairs(c + k)
                edges = [pairs[t] for t in range(len(pairs)) if mask >> t & 1]
                graph = Graph(range(c + k), edges)
                b = tuple(range(c, c + k))
                pg = PointedGraph(graph, base=frozenset(range(c)))
                space = TemplateSpace(pg, b, n, l_max, "Tn")
                for x in x_sizes:
                    tables = _stab_state_tables(c, k, x, stab)
                    n_pairs = sum(len(g) for g in _formula_pairs(c, k, x))
                    for states in product((ABSENT, EDGE), repeat=n_pairs):
                        if not _states_canonical(states, tables):
                            continue
                        f = _formula_of_states(states, c, k, x)
                        cell_instances += 1
                        report["instances"] += 1
                        _evaluate_tn_instance(report, space, f, b, pg, n, side_checks)
            report["cells"].append(
                {"c": c, "k": k, "graph_reps": len(reps), "instances": cell_instances}
            )
    report["elapsed_s"] = round(time.monotonic() - t0, 2)
    return report


def _evaluate_tn_instance(report, space, f, b, pg, n, side_checks) -> None:
    p0 = instantiate(f, b, pg)
    if not is_consistent(p0, pg, n, "Tn"):
        report["inconsistent"] += 1
        v = divides_formula(f, b, pg, n)
        if not (v.divides and v.reason == "inconsistent"):
            report["mismatches"].append(_instance_json(pg, b, f, n))
        return
    report["consistent"] += 1
    crit = divides_formula(f, b, pg, n)
    orc = _search(space, f, n)
    if crit.divides != orc.divides:
        report["mismatches"].append(_instance_json(pg, b, f, n))
        return
    if crit.divides:
        report["dividing"] += 1
        if side_checks:
            _side_checks(report, f, b, pg, n, crit, _instance_json(pg, b, f, n))


# -- the random-graph baseline grid ------------------------------------------


def run_t0_grid(
    c_sizes: Sequence[int] = (0, 1, 2),
    b_sizes: Sequence[int] = (1, 2, 3),
    x_sizes: Sequence[int] = (1, 2),
    l_max: int = 4,
    seed: int = 1729,
) -> dict:
    """Baseline agreement run over the random graph, identification states included."""
    t0 = time.monotonic()
    report = _blank_report(0, l_max)
    del report["gamma_checked"], report["gamma_violations"]
    del report["support_violations"], report["no_positive_xy_violations"]
    rng = random.Random(seed)
    for c in c_sizes:
        for k in b_sizes:
            pairs = _vertex_pairs(c + k)
            full = (1 << len(pairs)) - 1
            ambients = [0, full, rng.randrange(1 << len(pairs))]
            cell_instances = 0
            for mask in dict.fromkeys(ambients):
                stab = _mask_stabilizer(c, k, mask)
                edges = [pairs[t] for t in range(len(pairs)) if mask >> t & 1]
                graph = Graph(range(c + k), edges)
                b = tuple(range(c, c + k))
                pg = PointedGraph(graph, base=frozenset(range(c)))
                space = TemplateSpace(pg, b, 3, l_max, "T0")
                for x in x_sizes:
                    tables = _stab_state_tables(c, k, x, stab)
                    xx, xy, xc = _formula_pairs(c, k, x)
                    slots = (
                        [(ABSENT, EDGE)] * len(xx)
                        + [(ABSENT, EDGE, IDENT)] * len(xy)
                        + [(ABSENT, EDGE)] * len(xc)
                    )
                    for states in product(*slots):
                        if not _states_canonical(states, tables):
                            continue
                        f = _formula_of_states(states, c, k, x)
                        cell_instances += 1
                        report["instances"] += 1
                        p0 = instantiate(f, b, pg)
                        if not is_consistent(p0, pg, 3, "T0"):
                            report["inconsistent"] += 1
                            v = divides_formula_t0(f, b, pg)
                            if not (v.divides and v.reason == "inconsistent"):
                                report["mismatches"].append(_instance_json(pg, b, f, 0))
                            continue
                        report["consistent"] += 1
                        crit = divides_formula_t0(f, b, pg)
                        orc = _search(space, f, 3)
                        if crit.divides != orc.divides:
                            report["mismatches"].append(_instance_json(pg, b, f, 0))
                        elif crit.divides:
                            report["dividing"] += 1
            report["cells"].append({"c": c, "k": k, "instances": cell_instances})
    report["elapsed_s"] = round(time.monotonic() - t0, 2)
    return report


def _mask_stabilizer(c: int, k: int, mask: int) -> list[int]:
    tables = _mask_relabel_tables(c, k)
    return [gi for gi, tb in enumerate(tables) if _relabel_mask(mask, tb) == mask]


# -- randomized agreement and invariant runs ---------------------------------


def random_formula_instance(
    rng: random.Random,
    n: int,
    max_c: int = 3,
    max_b: int = 3,
    max_x: int = 2,
    max_extra: int = 2,
) -> tuple[PointedGraph, tuple[int, ...], ConjFormula]:
    """A seeded random ambient, base, parameter tuple, and mixed-sign formula."""
    c_size = rng.randint(0, max_c)
    b_size = rng.randint(1, max_b)
    x_ar = rng.randint(1, max_x)
    size = c_size + b_size + rng.randint(0, max_extra)
    g = random_kn_free(n, size, rng.uniform(0.15, 0.6), rng.randrange(1 << 30))
    verts = list(g.vertices)
    rng.shuffle(verts)
    C = frozenset(verts[:c_size])
    b = tuple(verts[c_size:c_size + b_size])
    xx, xy, xc = _formula_pairs(0, b_size, x_ar)
    conjuncts = []

    def pick() -> int:
        r = rng.random()
        return ABSENT if r < 0.45 else EDGE if r < 0.8 else NONEDGE

    for i, i2 in xx:
        st = pick()
        if st != ABSENT:
            conjuncts.append(("edge" if st == EDGE else "nonedge", ("x", i), ("x", i2)))
    for i, j in xy:
        st = pick()
        if st != ABSENT:
            conjuncts.append(("edge" if st == EDGE else "nonedge", ("x", i), ("y", j)))
    for i in range(1, x_ar + 1):
        for cv in sorted(C):
            st = pick()
            if st != ABSENT:
                conjuncts.append(("edge" if st == EDGE else "nonedge", ("x", i), ("c", cv)))
    f = conj(x_ar, b_size, conjuncts, C)
    return PointedGraph(g, base=C), b, f


def run_random_agreement(
    n: int,
    trials: int,
    seed: int,
    max_c: int = 3,
    max_b: int = 3,
    max_x: int = 2,
    l_max: Optional[int] = None,
    side_checks: bool = True,
) -> dict:
    """Seeded random criterion/oracle agreement (negative literals included)."""
    if l_max is None:
        l_max = n + 1
    t0 = time.monotonic()
    report = _blank_report(n, l_max)
    rng = random.Random(seed)
    for _ in range(trials):
        pg, b, f = random_formula_instance(rng, n, max_c, max_b, max_x)
        report["instances"] += 1
        space = TemplateSpace(pg, b, n, l_max, "Tn")
        _evaluate_tn_instance(report, space, f, b, pg, n, side_checks)
    report["elapsed_s"] = round(time.monotonic() - t0, 2)
    return report


def run_indep_agreement(
    n: int = 3,
    samples: int = 10_000,
    seed: int = 7,
    max_vertices: int = 7,
    max_a: int = 3,
    max_b: int = 3,
    max_c: int = 2,
    l_max: Optional[int] = None,
) -> dict:
    """Set-level dividing independence against the single-formula oracle."""
    t0 = time.monotonic()
    rng = random.Random(seed)
    mismatches = []
    independent = 0
    for _ in range(samples):
        size = rng.randint(1, max_vertices)
        g = random_kn_free(n, size, rng.uniform(0.15, 0.65), rng.randrange(1 << 30))
        verts = list(g.vertices)
        A = rng.sample(verts, min(rng.randint(0, max_a), len(verts)))
        B = rng.sample(verts, min(rng.randint(0, max_b), len(verts)))
        C = rng.sample(verts, min(rng.randint(0, max_c), len(verts)))
        crit, _viol = dividing_indep(A, B, C, g, n)
        orc = dividing_indep_oracle(A, B, C, g, n, l_max)
        if crit != orc:
            mismatches.append(
                {
                    "graph": graph_to_json(g),
                    "A": sorted(A),
                    "B": sorted(B),
                    "C": sorted(C),
                    "criterion": crit,
                    "oracle": orc,
                }
            )
        elif crit:
            independent += 1
    return {
        "n": n,
        "samples": samples,
        "independent": independent,
        "mismatches": mismatches,
        "elapsed_s": round(time.monotonic() - t0, 2),
    }


def run_full_existence_trials(
    trials: int = 1000,
    seed: int = 11,
    ns: Sequence[int] = (3, 4),
    max_vertices: int = 10,
) -> dict:
    """Randomized postcondition checks for the independent-copy construction."""
    rng = random.Random(seed)
    violations = []
    for t in range(trials):
        n = rng.choice(list(ns))
        size = rng.randint(1, max_vertices)
        g = random_kn_free(n, size, rng.uniform(0.2, 0.7), rng.randrange(1 << 30))
        verts = list(g.vertices)
        A = rng.sample(verts, min(rng.randint(1, 4), len(verts)))
        B = rng.sample(verts, min(rng.randint(0, 4), len(verts)))
        C = rng.sample(verts, min(rng.randint(0, 3), len(verts)))
        ext, copy = full_existence(A, B, C, g, n)
        ok = (
            is_kn_free(ext, n)
            and qf_type_equal_over(ext, copy, tuple(sorted(set(A))), C)
            and edge_indep(copy, B, C, ext)
        )
        if not ok:
            violations.append(
                {"trial": t, "graph": graph_to_json(g), "A": sorted(A), "B": sorted(B), "C": sorted(C)}
            )
    return {"trials": trials, "violations": violations}


def run_forking_extension_trials(
    trials: int = 1000,
    seed: int = 13,
    n: int = 3,
    max_vertices: int = 8,
    max_attempts_factor: int = 200,
) -> dict:
    """The forking-equals-dividing mechanism on random independent instances.

    Samples instances with the independence criterion already true, extends
    the right-hand side by a random superset, moves A to an edge-independent
    copy over the enlarged base, and checks independence from the enlarged
    side still holds.
    """
    rng = random.Random(seed)
    violations = []
    done = 0
    attempts = 0
    while done < trials and attempts < trials * max_attempts_factor:
        attempts += 1
        size = rng.randint(2, max_vertices)
        g = random_kn_free(n, size, rng.uniform(0.2, 0.7), rng.randrange(1 << 30))
        verts = list(g.vertices)
        A = rng.sample(verts, min(rng.randint(1, 3), len(verts)))
        B = rng.sample(verts, min(rng.randint(1, 3), len(verts)))
        C = rng.sample(verts, min(rng.randint(0, 2), len(verts)))
        ok, _ = dividing_indep(A, B, C, g, n)
        if not ok:
            continue
        done += 1
        extra = rng.sample(verts, min(rng.randint(0, 3), len(verts)))
        D = sorted(set(B) | set(extra))
        bc = set(B) | set(C)
        ext, copy = full_existence(A, D, bc, g, n)
        a_prime = set(copy)
        good, viol = dividing_indep(a_prime, set(B) | set(D), C, ext, n)
        if not good:
            violations.append(
                {
                    "graph": graph_to_json(g),
                    "A": sorted(A),
                    "B": sorted(B),
                    "C": sorted(C),
                    "D": D,
                    "violation": viol.to_json() if viol else None,
                }
            )
    return {"trials": done, "attempts": attempts, "violations": violations}
