"""Finite simple graphs with bitset adjacency and deterministic clique search.

Vertices are opaque non-negative integers.  Adjacency is stored as one Python
int per vertex (a bitmask over the sorted vertex order), which keeps the
exhaustive searches in this package fast at desk scale.  Graphs above a
configurable vertex bound (default 4096, overridable through the
HENSON_MAX_VERTICES environment variable) are rejected: everything here is
meant for small instances that can be searched completely.

All search results are deterministic: witnesses are reported as the
lexicographically least choice under ascending vertex identifiers.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Optional, Sequence

DEFAULT_MAX_VERTICES = 4096
MAX_VERTICES_ENV = "HENSON_MAX_VERTICES"


class GraphError(ValueError):
    """Raised for malformed graph inputs (loops, unknown vertices, size bound)."""


def max_vertex_bound() -> int:
    """Current vertex-count bound, honouring HENSON_MAX_VERTICES."""
    raw = os.environ.get(MAX_VERTICES_ENV)
    if raw is None:
        return DEFAULT_MAX_VERTICES
    try:
        value = int(raw)
    except ValueError as exc:
        raise GraphError(f"{MAX_VERTICES_ENV} must be an integer, got {raw!r}") from exc
    if value < 0:
        raise GraphError(f"{MAX_VERTICES_ENV} must be non-negative, got {value}")
    return value


class Graph:
    """An immutable finite simple graph (symmetric, irreflexive edge set).

    Edges may be supplied in either orientation and with repetitions; they are
    stored unordered.  Self-loops are rejected.
    """

    __slots__ = ("vertices", "_pos", "_adj")

    def __init__(self, vertices: Iterable[int], edges: Iterable[tuple[int, int]] = ()):
        verts = sorted(set(vertices))
        bound = max_vertex_bound()
        if len(verts) > bound:
            raise GraphError(f"graph has {len(verts)} vertices, bound is {bound}")
        self.vertices: tuple[int, ...] = tuple(verts)
        self._pos: dict[int, int] = {v: i for i, v in enumerate(verts)}
        adj = [0] * len(verts)
        pos = self._pos
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            try:
                iu, iv = pos[u], pos[v]
            except KeyError as exc:
                raise GraphError(f"edge ({u}, {v}) mentions unknown vertex") from exc
            adj[iu] |= 1 << iv
            adj[iv] |= 1 << iu
        self._adj = adj

    # -- basic queries -------------------------------------------------

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v: int) -> bool:
        return v in self._pos

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        return bool(self._adj[self._index(u)] >> self._index(v) & 1)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.vertices_of_mask(self._adj[self._index(v)])

    def degree(self, v: int) -> int:
        return self._adj[self._index(v)].bit_count()

    def edge_list(self) -> list[tuple[int, int]]:
        """All edges, each once, as (min, max) pairs in ascending order."""
        out = []
        verts = self.vertices
        for i, row in enumerate(self._adj):
            higher = row >> (i + 1)
            j = i + 1
            while higher:
                if higher & 1:
                    out.append((verts[i], verts[j]))
                higher >>= 1
                j += 1
        return out

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self._adj) // 2

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self.vertices, tuple(self._adj)))

    def __repr__(self) -> str:
        return f"Graph({len(self.vertices)} vertices, {self.edge_count()} edges)"

    # -- bitmask plumbing ----------------------------------------------
    #
    # The mask helpers expose the internal indexing so that the search
    # modules can run entirely on ints.  Bit i corresponds to
    # self.vertices[i].

    def _index(self, v: int) -> int:
        try:
            return self._pos[v]
        except KeyError as exc:
            raise GraphError(f"vertex {v} not in graph") from exc

    def bit_of(self, v: int) -> int:
        return 1 << self._index(v)

    def mask_of(self, vs: Iterable[int]) -> int:
        m = 0
        for v in vs:
            m |= 1 << self._index(v)
        return m

    def adjacency_row(self, v: int) -> int:
        return self._adj[self._index(v)]

    def adjacency_rows(self) -> list[int]:
        return list(self._adj)

    def vertices_of_mask(self, mask: int) -> tuple[int, ...]:
        verts = self.vertices
        out = []
        while mask:
            low = mask & -mask
            out.append(verts[low.bit_length() - 1])
            mask ^= low
        return tuple(out)

    # -- derived graphs --------------------------------------------------

    def induced(self, vs: Iterable[int]) -> "Graph":
        keep = sorted(set(vs))
        for v in keep:
            self._index(v)
        kept = set(keep)
        edges = [(u, v) for u, v in self.edge_list() if u in kept and v in kept]
        return Graph(keep, edges)

    def extended(
        self,
        new_vertices: Iterable[int],
        new_edges: Iterable[tuple[int, int]],
    ) -> "Graph":
        """A copy with extra vertices and extra edges."""
        verts = list(self.vertices) + [v for v in new_vertices if v not in self._pos]
        edges = self.edge_list() + list(new_edges)
        return Graph(verts, edges)

    def fresh_vertex_ids(self, count: int) -> list[int]:
        """`count` consecutive identifiers above every existing vertex."""
        start = self.vertices[-1] + 1 if self.vertices else 0
        return list(range(start, start + count))


@dataclass(frozen=True)
class CliqueWitness:
    """A set of pairwise adjacent vertices found by `find_clique`."""

    members: frozenset[int]

    def sorted_members(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))


@dataclass
class PointedGraph:
    """A graph together with a designated base set and named sets/tuples.

    `base` plays the role of the parameter set the independence machinery
    works over.  Named tuples must have pairwise-distinct entries; all names
    must resolve to vertices of `graph`.
    """

    graph: Graph
    base: frozenset[int] = frozenset()
    named_sets: dict[str, frozenset[int]] = field(default_factory=dict)
    named_tuples: dict[str, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.base = frozenset(self.base)
        g = self.graph
        for v in self.base:
            g._index(v)
        self.named_sets = {k: frozenset(vs) for k, vs in self.named_sets.items()}
        for name, vs in self.named_sets.items():
            for v in vs:
                g._index(v)
        self.named_tuples = {k: tuple(t) for k, t in self.named_tuples.items()}
        for name, t in self.named_tuples.items():
            if len(set(t)) != len(t):
                raise GraphError(f"tuple {name!r} has repeated entries: {t}")
            for v in t:
                g._index(v)


# -- clique search ------------------------------------------------------


def _greedy_color_count(adj: Sequence[int], mask: int) -> int:
    """Number of greedy colour classes of the subgraph induced by `mask`.

    An upper bound for the largest clique inside `mask`.
    """
    classes: list[int] = []
    m = mask
    while m:
        low = m & -m
        m ^= low
        row = adj[low.bit_length() - 1]
        for i, cm in enumerate(classes):
            if not (row & cm):
                classes[i] = cm | low
                break
        else:
            classes.append(low)
    return len(classes)


def find_clique_in_mask(adj: Sequence[int], mask: int, size: int) -> Optional[int]:
    """Lexicographically least `size`-clique inside `mask`, as a bitmask.

    Low-level helper shared by the consistency and witness searches.  `adj`
    is a list of adjacency bitmasks; returns None when no clique exists.
    Depth-first search in ascending bit order guarantees that the first
    complete branch is the lexicographically least witness; the greedy
    colouring bound only discards subtrees that cannot reach `size`.
    """
    if size <= 0:
        return 0
    if mask.bit_count() < size:
        return None

    def rec(chosen: int, cand: int, need: int) -> Optional[int]:
        if need == 0:
            return chosen
        while cand:
            if cand.bit_count() < need:
                return None
            low = cand & -cand
            cand ^= low
            rest = cand & adj[low.bit_length() - 1]
            if need > 1:
                if rest.bit_count() < need - 1:
                    continue
                if need > 2 and _greedy_color_count(adj, rest) < need - 1:
                    continue
            got = rec(chosen | low, rest, need - 1)
            if got is not None:
                return got
        return None

    return rec(0, mask, size)


def find_clique(g: Graph, m: int) -> Optional[CliqueWitness]:
    """The lexicographically least clique on exactly `m` vertices, if any."""
    if m < 1:
        raise ValueError(f"clique size must be >= 1, got {m}")
    n = len(g.vertices)
    if m > n:
        return None
    got = find_clique_in_mask(g._adj, (1 << n) - 1, m)
    if got is None:
        return None
    return CliqueWitness(frozenset(g.vertices_of_mask(got)))


def is_kn_free(g: Graph, n: int) -> bool:
    """True when `g` contains no complete subgraph on `n` vertices."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return find_clique(g, n) is None


def has_clique_through(g: Graph, vertices: Iterable[int], n: int) -> bool:
    """True when some K_n of `g` meets the given vertex set.

    Used to decide K_n-freeness of a one-step extension of a graph already
    known to be K_n-free: any new K_n must pass through a new vertex.
    """
    adj = g._adj
    for v in vertices:
        nbhd = g.adjacency_row(v)
        if find_clique_in_mask(adj, nbhd, n - 1) is not None:
            return True
    return False


# -- quantifier-free type comparison -------------------------------------


def qf_type_equal_over(
    g: Graph,
    t1: Sequence[int],
    t2: Sequence[int],
    base: Iterable[int],
) -> bool:
    """Whether two tuples realize the same atomic diagram over `base`.

    Compares the equality pattern and edge pattern inside each tuple, and
    equality/adjacency against every base vertex.  In a binary graph language
    with equality this determines the quantifier-free type.
    """
    if len(t1) != len(t2):
        raise GraphError(f"tuple lengths differ: {len(t1)} vs {len(t2)}")
    k = len(t1)
    for i in range(k):
        g._index(t1[i])
        g._index(t2[i])
    for i in range(k):
        for j in range(i + 1, k):
            if (t1[i] == t1[j]) != (t2[i] == t2[j]):
                return False
            if g.has_edge(t1[i], t1[j]) != g.has_edge(t2[i], t2[j]):
                return False
    for c in base:
        for i in range(k):
            if (t1[i] == c) != (t2[i] == c):
                return False
            if g.has_edge(t1[i], c) != g.has_edge(t2[i], c):
                return False
    return True


# -- random instance generation ------------------------------------------


def random_kn_free(n: int, size: int, density: float, seed: int) -> Graph:
    """A random K_n-free graph on vertices 0..size-1, deterministic per seed.

    Each pair is proposed once, in ascending order, with probability
    `density`; a proposed edge is rejected when it would complete a K_n.
    The random draw happens for every pair regardless of acceptance, so the
    output depends only on (n, size, density, seed).
    """
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    if size < 0:
        raise ValueError(f"size must be >= 0, got {size}")
    rng = random.Random(seed)
    adj = [0] * size
    edges: list[tuple[int, int]] = []
    for i in range(size):
        for j in range(i + 1, size):
            if rng.random() >= density:
                continue
            common = adj[i] & adj[j]
            # (i, j) completes a K_n exactly when n-2 common neighbours
            # already form a clique.
            if find_clique_in_mask(adj, common, n - 2) is not None:
                continue
            adj[i] |= 1 << j
            adj[j] |= 1 << i
            edges.append((i, j))
    return Graph(range(size), edges)


# -- JSON wire format ------------------------------------------------------


def graph_to_json(g: Graph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [list(e) for e in g.edge_list()],
    }


def graph_from_json(obj: Mapping) -> Graph:
    """Parse {"vertices": [...], "edges": [[u, v], ...]}.

    Each unordered pair may be listed once only; loops and duplicates are
    rejected.
    """
    try:
        vertices = list(obj["vertices"])
        raw_edges = list(obj["edges"])
    except (KeyError, TypeError) as exc:
        raise GraphError(f"graph object needs 'vertices' and 'edges': {exc}") from exc
    if len(set(vertices)) != len(vertices):
        raise GraphError("duplicate vertex identifiers")
    seen = set()
    edges = []
    for e in raw_edges:
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise GraphError(f"edge entries must be pairs, got {e!r}")
        u, v = e
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphError(f"duplicate edge {key}")
        seen.add(key)
        edges.append((u, v))
    return Graph(vertices, edges)


def all_cliques_brute(g: Graph, m: int) -> list[frozenset[int]]:
    """Every m-clique by subset enumeration.  Test oracle, small graphs only."""
    out = []
    for combo in combinations(g.vertices, m):
        if all(g.has_edge(u, v) for u, v in combinations(combo, 2)):
            out.append(frozenset(combo))
    return out


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low
