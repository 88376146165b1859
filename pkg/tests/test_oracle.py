"""Template oracle: worked examples, fast-path equivalence, set-level reduction."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from henson.formula import InconsistentInstanceError, conj, instantiate, is_consistent
from henson.graph import Graph, PointedGraph, random_kn_free
from henson.grids import random_formula_instance
from henson.independence import dividing_indep, divides_formula, divides_formula_t0
from henson.oracle import (
    TemplateSpace,
    _compile,
    _union_inconsistent,
    dividing_indep_oracle,
    divides_oracle,
    divides_oracle_t0,
    full_diagram_formula,
)
from henson.sequences import check_k_inconsistent

X1 = ("x", 1)
Y1, Y2 = ("y", 1), ("y", 2)


def pair_instance():
    g = Graph([10, 11])
    pg = PointedGraph(g)
    f = conj(1, 2, [("edge", X1, Y1), ("edge", X1, Y2)])
    return pg, (10, 11), f


def test_pair_instance_divides_via_the_witness_template():
    pg, b, f = pair_instance()
    verdict = divides_oracle(f, b, pg, 3, 4)
    assert verdict.divides and verdict.k == 2
    assert verdict.template.cross == {(1, 2)}
    assert verdict.template.constant_positions == frozenset()


def test_negative_only_formula_does_not_divide():
    pg = PointedGraph(Graph([10, 11]))
    f = conj(1, 2, [("nonedge", X1, Y1), ("nonedge", X1, Y2)])
    assert not divides_oracle(f, (10, 11), pg, 3, 4).divides


def test_anchored_pair_does_not_divide():
    g = Graph([5, 10, 11], [(5, 10), (5, 11)])
    pg = PointedGraph(g, base={5})
    f = conj(1, 2, [("edge", X1, Y1), ("edge", X1, Y2)])
    assert not divides_oracle(f, (10, 11), pg, 3, 4).divides


def test_oracle_rejects_inconsistent_instances():
    g = Graph([10, 11], [(10, 11)])
    pg = PointedGraph(g)
    f = conj(1, 2, [("edge", X1, Y1), ("edge", X1, Y2)])
    with pytest.raises(InconsistentInstanceError):
        divides_oracle(f, (10, 11), pg, 3)


def test_random_graph_oracle_baseline():
    pg = PointedGraph(Graph([7, 8]))
    assert not divides_oracle_t0(conj(1, 1, [("edge", X1, Y1)]), (7,), pg).divides
    v = divides_oracle_t0(conj(1, 1, [("eq", X1, Y1)]), (7,), pg)
    assert v.divides and v.k == 2


def test_verdict_json_shape():
    pg, b, f = pair_instance()
    out = divides_oracle(f, b, pg, 3, 4).to_json()
    assert set(out) == {"divides", "template", "k", "l_max"}
    assert out["template"]["cross"] == [[1, 2]]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_fast_evaluator_matches_object_level_path(seed):
    rng = random.Random(seed)
    n = rng.choice([3, 4])
    pg, b, f = random_formula_instance(rng, n, max_c=2, max_b=2, max_x=2, max_extra=1)
    if rng.random() < 0.5:
        # inject an identification so the substitution path is exercised too
        extra = ("eq", ("x", rng.randint(1, f.x_arity)), ("y", rng.randint(1, f.y_arity)))
        f = conj(f.x_arity, f.y_arity, list(f.sorted_conjuncts()) + [extra], f.constants)
    p0 = instantiate(f, b, pg)
    if not is_consistent(p0, pg, n, "Tn"):
        return
    space = TemplateSpace(pg, b, n, n + 1, "Tn")
    comp = _compile(f)
    for entry in space.entries[:40]:
        for k in range(1, n + 2):
            for mode in ("Tn", "T0"):
                fast = _union_inconsistent(entry, comp, k, n, mode)
                slow = check_k_inconsistent(f, entry.window, k, n, mode)
                assert fast == slow


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_oracle_agrees_with_criterion_on_random_instances(seed):
    rng = random.Random(seed)
    pg, b, f = random_formula_instance(rng, 3, max_c=2, max_b=2, max_x=2, max_extra=1)
    p0 = instantiate(f, b, pg)
    if not is_consistent(p0, pg, 3, "Tn"):
        return
    crit = divides_formula(f, b, pg, 3)
    orc = divides_oracle(f, b, pg, 3, 4)
    assert crit.divides == orc.divides


# -- set-level reduction --------------------------------------------------------


def test_diagram_formula_records_shared_vertices_as_identifications():
    g = Graph(range(3), [(0, 1)])
    built = full_diagram_formula({0, 1}, {1, 2}, set(), g)
    f, b = built
    assert b == (1, 2)
    assert any(kind == "eq" for kind, _, _ in f.conjuncts)


def test_diagram_formula_empty_sides():
    g = Graph(range(3))
    assert full_diagram_formula(set(), {1}, set(), g) is None
    assert full_diagram_formula({1}, {1}, {1}, g) is None


def test_set_oracle_on_shared_vertex():
    g = Graph(range(3))
    assert not dividing_indep_oracle({0, 1}, {1, 2}, set(), g, 3)


def test_set_oracle_on_bound_violation():
    g = Graph(range(3), [(0, 1), (0, 2)])
    assert not dividing_indep_oracle({0}, {1, 2}, set(), g, 3)


def test_set_oracle_on_independent_instance():
    g = Graph(range(4), [(0, 1), (2, 3)])
    assert dividing_indep_oracle({0, 1}, {2, 3}, set(), g, 3)
    assert dividing_indep_oracle({0}, {1}, {0, 1}, g, 3)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_set_oracle_agrees_with_criterion(seed):
    rng = random.Random(seed)
    g = random_kn_free(3, rng.randint(1, 6), 0.45, seed)
    verts = list(g.vertices)
    A = set(rng.sample(verts, min(rng.randint(0, 3), len(verts))))
    B = set(rng.sample(verts, min(rng.randint(0, 3), len(verts))))
    C = set(rng.sample(verts, min(rng.randint(0, 2), len(verts))))
    assert dividing_indep(A, B, C, g, 3)[0] == dividing_indep_oracle(A, B, C, g, 3)


def test_t0_baseline_agreement_spot_checks():
    rng = random.Random(12)
    for _ in range(40):
        pg, b, f = random_formula_instance(rng, 3, max_c=1, max_b=2, max_x=1, max_extra=1)
        p0 = instantiate(f, b, pg)
        if not is_consistent(p0, pg, 3, "T0"):
            continue
        assert divides_formula_t0(f, b, pg).divides == divides_oracle_t0(f, b, pg).divides
