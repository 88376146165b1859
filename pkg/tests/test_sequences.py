"""Templates: realization, the witness construction, validity, scans."""

import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from henson.formula import conj
from henson.graph import Graph, PointedGraph, all_cliques_brute, is_kn_free, random_kn_free
from henson.sequences import (
    BaseType,
    SequenceTemplate,
    base_type_of,
    build_fork_nondivide_example,
    check_k_inconsistent,
    enumerate_templates,
    gamma,
    gamma_template,
    is_template_valid,
    realize_template,
    template_from_json,
    verify_fork_nondivide_instance,
)

X1 = ("x", 1)
Y1, Y2 = ("y", 1), ("y", 2)


def pair_instance():
    """Two non-adjacent parameters, empty base, adjacency-pair formula."""
    g = Graph([10, 11])
    pg = PointedGraph(g)
    f = conj(1, 2, [("edge", X1, Y1), ("edge", X1, Y2)])
    return pg, (10, 11), f


# -- the witness construction -------------------------------------------------


def test_empty_witness_set_gives_disconnected_copies():
    pg, b, _ = pair_instance()
    w = gamma(set(), b, set(), pg, 3)
    assert w.graph.edge_count() == 0


def test_witness_window_structure_for_the_pair():
    pg, b, _ = pair_instance()
    w = gamma(set(), b, set(b), pg, 3)
    copies = w.copies
    # cross edges exactly: earlier position 1 to later position 2
    expected = {
        (copies[l][0], copies[m][1]) for l in range(3) for m in range(3) if l < m
    }
    got = {tuple(e) for e in w.graph.edge_list()}
    normalized = {(min(e), max(e)) for e in expected}
    assert got == normalized
    assert is_kn_free(w.graph, 3)


def test_witness_window_has_no_vertical_edges():
    pg, b, _ = pair_instance()
    w = gamma(set(), b, set(b), pg, 4)
    for pos in (1, 2):
        col = w.column(pos)
        for u, v in combinations(col, 2):
            assert not w.graph.has_edge(u, v)


def test_gamma_template_round_trips_through_realization():
    pg, b, _ = pair_instance()
    t = gamma_template(pg.graph, b, set(), set(b))
    direct = gamma(set(), b, set(b), pg, 3)
    again = realize_template(t, set(), pg.graph, 3)
    assert direct.graph == again.graph and direct.copies == again.copies


def test_gamma_rejects_foreign_witness_vertices():
    pg, b, _ = pair_instance()
    with pytest.raises(ValueError):
        gamma(set(), b, {99}, pg, 2)


# -- realization ----------------------------------------------------------------


def test_all_constant_template_repeats_one_copy():
    g = Graph([0, 5], [(0, 5)])
    base = base_type_of(g, (5,), {0})
    t = SequenceTemplate(1, base, frozenset({1}), frozenset())
    w = realize_template(t, {0}, g, 4)
    assert len(set(w.copies)) == 1
    assert len(w.graph) == 2  # base vertex plus the single shared copy vertex


def test_window_of_length_one_is_the_base_copy():
    g = Graph([0, 5], [(0, 5)])
    base = base_type_of(g, (5,), {0})
    t = SequenceTemplate(1, base, frozenset(), frozenset())
    w = realize_template(t, {0}, g, 1)
    assert len(w.copies) == 1
    assert w.graph.has_edge(0, w.copies[0][0])


def test_copies_inherit_the_base_type():
    rng = random.Random(4)
    g = random_kn_free(3, 7, 0.4, 4)
    C = {0, 1}
    b = (3, 5, 6)
    base = base_type_of(g, b, C)
    t = SequenceTemplate(3, base, frozenset({2}), frozenset({(1, 3)}))
    w = realize_template(t, C, g, 4)
    from henson.graph import qf_type_equal_over

    merged = w.graph.extended(g.vertices, g.edge_list())
    for copy in w.copies:
        assert qf_type_equal_over(merged, copy, b, C)


def test_cross_pairs_on_constant_positions_rejected():
    with pytest.raises(ValueError):
        SequenceTemplate(2, BaseType(frozenset(), frozenset()), frozenset({1}), frozenset({(1, 2)}))


# -- validity ---------------------------------------------------------------------


def test_vertical_cross_edge_invalidates_a_single_column():
    g = Graph([9])
    base = base_type_of(g, (9,), set())
    t = SequenceTemplate(1, base, frozenset(), frozenset({(1, 1)}))
    assert not is_template_valid(t, set(), g, 3)


def test_witness_template_of_a_dividing_instance_is_valid():
    pg, b, _ = pair_instance()
    t = gamma_template(pg.graph, b, set(), set(b))
    assert is_template_valid(t, set(), pg.graph, 3)


def test_base_clique_against_base_invalidates():
    g = Graph([0, 1, 9], [(0, 1), (0, 9), (1, 9)])
    # the base type alone already carries a triangle
    base = base_type_of(g, (9,), {0, 1})
    t = SequenceTemplate(1, base, frozenset(), frozenset())
    assert not is_template_valid(t, {0, 1}, g, 3)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(3, 4))
def test_window_freeness_is_decided_at_length_n(seed, n):
    rng = random.Random(seed)
    g = random_kn_free(n, rng.randint(1, 5), 0.5, seed)
    verts = list(g.vertices)
    k = rng.randint(1, 3)
    b = tuple(rng.sample(verts, min(k, len(verts))))
    if not b:
        return
    C = set(rng.sample([v for v in verts if v not in b], min(rng.randint(0, 2), len(verts) - len(b))))
    positions = len(b)
    const = frozenset(p for p in range(1, positions + 1) if rng.random() < 0.2)
    noncon = [p for p in range(1, positions + 1) if p not in const]
    cross = frozenset((i, j) for i in noncon for j in noncon if rng.random() < 0.3)
    t = SequenceTemplate(positions, base_type_of(g, b, C), const, cross)
    at_n = is_kn_free(realize_template(t, C, g, n).graph, n)
    for L in (n + 1, 2 * n, 3 * n):
        assert is_kn_free(realize_template(t, C, g, L).graph, n) == at_n


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_short_tuples_give_smaller_clique_free_windows(seed):
    # with fewer than n-1 positions, a valid template's window avoids K_{n-1}
    rng = random.Random(seed)
    n = rng.choice([4, 5])
    k = rng.randint(1, n - 2)
    g = random_kn_free(n, k + 2, 0.5, seed)
    verts = list(g.vertices)
    b = tuple(rng.sample(verts, k))
    base = base_type_of(g, b, set())
    cross = frozenset(
        (i, j) for i in range(1, k + 1) for j in range(1, k + 1) if rng.random() < 0.4
    )
    t = SequenceTemplate(k, base, frozenset(), cross)
    if is_template_valid(t, set(), g, n):
        w = realize_template(t, set(), g, 2 * n)
        assert is_kn_free(w.graph, n - 1)


# -- joint inconsistency along a window ----------------------------------------------


def test_pair_instance_is_two_inconsistent_on_its_witness_window():
    pg, b, f = pair_instance()
    w = gamma(set(), b, set(b), pg, 4)
    assert not check_k_inconsistent(f, w, 1, 3)
    assert check_k_inconsistent(f, w, 2, 3)


def test_disconnected_window_stays_consistent():
    pg, b, _ = pair_instance()
    f = conj(1, 2, [("edge", X1, Y1)])
    w = gamma(set(), b, set(), pg, 4)
    for k in range(5):
        assert not check_k_inconsistent(f, w, k, 3)
    # cross-check: adjoining one vertex to an independent column never
    # builds a triangle; verify on the explicit extension
    col = [copy[0] for copy in w.copies]
    nv = w.graph.fresh_vertex_ids(1)[0]
    ext = w.graph.extended([nv], [(nv, u) for u in col])
    assert not all_cliques_brute(ext, 3)


def test_width_bounds_are_enforced():
    pg, b, f = pair_instance()
    w = gamma(set(), b, set(b), pg, 3)
    with pytest.raises(ValueError):
        check_k_inconsistent(f, w, 9, 3)


# -- template enumeration --------------------------------------------------------------


def test_single_position_enumeration_is_the_hand_count():
    g = Graph([9])
    base = base_type_of(g, (9,), set())
    templates = list(enumerate_templates(base, 1, set(), g, 3))
    shapes = {(tuple(t.constant_positions), tuple(sorted(t.cross))) for t in templates}
    assert shapes == {((), ()), ((1,), ())}


def test_enumeration_contains_the_witness_pattern():
    pg, b, _ = pair_instance()
    base = base_type_of(pg.graph, b, set())
    want = gamma_template(pg.graph, b, set(), set(b))
    assert want in list(enumerate_templates(base, 2, set(), pg.graph, 3))


def test_enumeration_is_deterministic():
    pg, b, _ = pair_instance()
    base = base_type_of(pg.graph, b, set())
    one = list(enumerate_templates(base, 2, set(), pg.graph, 3))
    two = list(enumerate_templates(base, 2, set(), pg.graph, 3))
    assert one == two


def test_template_json_round_trip():
    g = Graph([0, 5, 6], [(0, 5), (5, 6)])
    t = SequenceTemplate(
        2,
        base_type_of(g, (5, 6), {0}),
        frozenset({2}),
        frozenset({(1, 1)}),
    )
    assert template_from_json(t.to_json()) == t


def test_enumeration_caps_are_enforced_but_overridable():
    g = Graph(range(8))
    base = BaseType(frozenset(), frozenset())
    with pytest.raises(ValueError):
        next(enumerate_templates(base, 7, set(), g, 3))
    with pytest.raises(ValueError):
        next(enumerate_templates(base, 1, {0, 1, 2, 3, 4}, g, 3))
    got = enumerate_templates(base, 1, {0, 1, 2, 3, 4}, g, 3, max_base=5)
    assert next(got) is not None


# -- dichotomy patterns -----------------------------------------------------------------


def test_empty_pattern_has_an_edge_free_pair():
    base = BaseType(frozenset(), frozenset())
    t = SequenceTemplate(4, base, frozenset(), frozenset())
    w = realize_template(t, set(), Graph([]), 6)
    col = set(w.column(1)) | set(w.column(2))
    assert all(not w.graph.has_edge(u, v) for u, v in combinations(sorted(col), 2))


def test_dense_symmetric_pattern_contains_the_stacked_triangle():
    base = BaseType(frozenset(), frozenset())
    cross = frozenset(
        p for i, j in combinations(range(1, 5), 2) for p in ((i, j), (j, i))
    )
    t = SequenceTemplate(4, base, frozenset(), cross)
    w = realize_template(t, set(), Graph([]), 6)
    a = w.copies[0][0]
    b = w.copies[1][1]
    c = w.copies[2][2]
    assert w.graph.has_edge(a, b) and w.graph.has_edge(b, c) and w.graph.has_edge(a, c)


# -- the forking example -------------------------------------------------------------------


@pytest.mark.parametrize("n", [3, 4, 5])
def test_example_builder_structure(n):
    pg, b, disjuncts = build_fork_nondivide_example(n)
    g = pg.graph
    C = sorted(pg.base)
    assert len(C) == n - 3 and len(b) == 4 and len(disjuncts) == 6
    assert all(g.has_edge(u, v) for u, v in combinations(C, 2))
    assert all(g.has_edge(v, c) for v in b for c in C)
    assert all(not g.has_edge(u, v) for u, v in combinations(b, 2))
    assert is_kn_free(g, n)


def test_example_builder_rejects_small_n():
    with pytest.raises(ValueError):
        build_fork_nondivide_example(2)


def test_verification_refuses_tampered_instances():
    pg, b, disjuncts = build_fork_nondivide_example(3)
    tampered = pg.graph.extended([], [(b[0], b[1])])
    bad = PointedGraph(tampered, base=pg.base)
    with pytest.raises(ValueError):
        verify_fork_nondivide_instance(bad, b, disjuncts, 3, 4)
