"""Seeded fuzz harness: criterion-oracle agreement plus module invariants.

Every trial draws a random K_n-free ambient, a base set, a parameter tuple,
and a mixed-sign formula, all from one seeded generator, then checks that
the bound criterion and the template oracle agree and that the structural
side conditions of dividing verdicts hold.  A failing trial is dumped as a
replayable problem file; re-running the CLI on the dump reproduces the
disagreement.

The `mutate` hook exists to prove the harness can catch a broken criterion:
it deliberately corrupts the criterion verdict before comparison, so a
mutated run must fail and produce replay files.
"""

from __future__ import annotations

import random
from pathlib import Path
from typing import Optional

from .formula import instantiate, is_consistent, positive_edge_support
from .graph import PointedGraph, is_kn_free, qf_type_equal_over
from .grids import random_formula_instance
from .independence import dividing_indep, divides_formula, edge_indep, full_existence
from .oracle import TemplateSpace, _search
from .problem import ProblemFile, save_problem

MUTATE_FLIP_DIVIDES = "flip-divides"


def run_fuzz(
    n: int,
    trials: int,
    seed: int,
    *,
    max_c: int = 3,
    max_b: int = 3,
    max_x: int = 2,
    max_extra: int = 2,
    l_max: Optional[int] = None,
    replay_dir: Optional[str] = None,
    mutate: Optional[str] = None,
) -> dict:
    """Run `trials` seeded agreement/invariant checks; returns a summary dict."""
    if l_max is None:
        l_max = n + 1
    rng = random.Random(seed)
    summary = {
        "n": n,
        "trials": trials,
        "seed": seed,
        "l_max": l_max,
        "consistent": 0,
        "inconsistent": 0,
        "dividing": 0,
        "invariant_checks": 0,
        "failures": [],
        "replay_files": [],
        "mutate": mutate,
    }
    for trial in range(trials):
        pg, b, f = random_formula_instance(rng, n, max_c, max_b, max_x, max_extra)

        def fail(kind: str) -> None:
            summary["failures"].append({"trial": trial, "kind": kind})
            if replay_dir is not None:
                path = Path(replay_dir) / f"replay_{trial:05d}_{kind}.json"
                path.parent.mkdir(parents=True, exist_ok=True)
                save_problem(ProblemFile(n, _with_names(pg, b), f), path)
                summary["replay_files"].append(str(path))

        p0 = instantiate(f, b, pg)
        if not is_consistent(p0, pg, n, "Tn"):
            summary["inconsistent"] += 1
            v = divides_formula(f, b, pg, n)
            if not (v.divides and v.reason == "inconsistent"):
                fail("inconsistent-verdict")
            continue
        summary["consistent"] += 1
        crit = divides_formula(f, b, pg, n)
        crit_divides = crit.divides
        if mutate == MUTATE_FLIP_DIVIDES:
            crit_divides = not crit_divides
        space = TemplateSpace(pg, b, n, l_max, "Tn")
        orc = _search(space, f, n)
        if crit_divides != orc.divides:
            fail("criterion-oracle-mismatch")
            continue
        if crit.divides:
            summary["dividing"] += 1
            verts, xs = positive_edge_support(f, b, pg)
            if not (len(verts) + len(xs) >= n and len(set(b) & verts) > 1):
                fail("support-condition")
            if not any(
                kind == "edge" and {t1[0], t2[0]} == {"x", "y"}
                for kind, t1, t2 in f.conjuncts
            ):
                fail("no-positive-xy-dividing")
        if trial % 7 == 0:
            summary["invariant_checks"] += 1
            _structure_invariants(rng, pg, n, fail)
    summary["ok"] = not summary["failures"]
    return summary


def _with_names(pg: PointedGraph, b: tuple[int, ...]) -> PointedGraph:
    return PointedGraph(
        pg.graph,
        base=pg.base,
        named_sets={"C": pg.base},
        named_tuples={"b": b},
    )


def _structure_invariants(rng: random.Random, pg: PointedGraph, n: int, fail) -> None:
    """Rotating extra checks on the same ambient graph."""
    g = pg.graph
    verts = list(g.vertices)
    if not verts:
        return
    A = rng.sample(verts, min(rng.randint(1, 3), len(verts)))
    B = rng.sample(verts, min(rng.randint(0, 3), len(verts)))
    C = rng.sample(verts, min(rng.randint(0, 2), len(verts)))
    ext, copy = full_existence(A, B, C, g, n)
    if not is_kn_free(ext, n):
        fail("full-existence-freeness")
    elif not qf_type_equal_over(ext, copy, tuple(sorted(set(A))), C):
        fail("full-existence-type")
    elif not edge_indep(copy, B, C, ext):
        fail("full-existence-edge-indep")
    if edge_indep(A, B, C, g) and not dividing_indep(A, B, C, g, n)[0]:
        fail("edge-indep-refinement")
