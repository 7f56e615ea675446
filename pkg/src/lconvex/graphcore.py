"""Undirected graphs, exact shortest-path metrics and modularity predicates.

Vertices are the integers ``0..n-1``.  Edge lengths are exact rationals
(default 1); the median/modular predicates and orientation search assume
unit lengths.
"""

from __future__ import annotations

import heapq
import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator, Optional

from ._rational import format_rational, parse_rational

TRIPLE_CAP = 10_000


class GraphError(ValueError):
    pass


def _key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]
    lengths: tuple[Fraction, ...] = ()
    _adj: tuple[frozenset[int], ...] = field(default=(), repr=False, compare=False)

    def __init__(self, n: int, edges: Iterable, lengths: Optional[Iterable] = None):
        norm: dict[tuple[int, int], Fraction] = {}
        edges = [tuple(e) for e in edges]
        lens = [Fraction(1)] * len(edges) if lengths is None else [parse_rational(x) for x in lengths]
        if len(lens) != len(edges):
            raise GraphError("lengths must parallel edges")
        for (u, v), ln in zip(edges, lens):
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range")
            if u == v:
                raise GraphError("self-loops are not allowed")
            if ln <= 0:
                raise GraphError("edge lengths must be positive")
            k = _key(u, v)
            if k in norm:
                raise GraphError(f"parallel edge {k}")
            norm[k] = ln
        keys = tuple(sorted(norm))
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in keys:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", keys)
        object.__setattr__(self, "lengths", tuple(norm[k] for k in keys))
        object.__setattr__(self, "_adj", tuple(frozenset(a) for a in adj))

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def length(self, u: int, v: int) -> Fraction:
        return self.lengths[self.edges.index(_key(u, v))]

    @property
    def unit(self) -> bool:
        return all(ln == 1 for ln in self.lengths)

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        return len(bfs_distances(self, 0)) == self.n

    def is_tree(self) -> bool:
        return self.is_connected() and len(self.edges) == self.n - 1

    # -- JSON ---------------------------------------------------------------
    def to_json(self) -> dict:
        out: dict = {"n": self.n, "edges": [list(e) for e in self.edges]}
        if not self.unit:
            out["lengths"] = [format_rational(x) for x in self.lengths]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        try:
            return cls(int(data["n"]), data["edges"], data.get("lengths"))
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed graph JSON: {exc}") from exc


# -- constructors -------------------------------------------------------------

def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """Vertex ``(x, y)`` is numbered ``x * h.n + y``."""
    edges = []
    for x in range(g.n):
        for u, v in h.edges:
            edges.append((x * h.n + u, x * h.n + v))
    for y in range(h.n):
        for u, v in g.edges:
            edges.append((u * h.n + y, v * h.n + y))
    return Graph(g.n * h.n, edges)


def hypercube(dim: int) -> Graph:
    g = Graph(1, [])
    for _ in range(dim):
        g = cartesian_product(g, path_graph(2))
    return g


def random_tree(n: int, rng) -> Graph:
    return Graph(n, [(rng.randrange(i), i) for i in range(1, n)])


# -- metrics ------------------------------------------------------------------

def bfs_distances(g: Graph, source: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in g.neighbors(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def metric(g: Graph) -> dict[tuple[int, int], Fraction]:
    """All-pairs shortest-path distances (edge-length weighted, exact)."""
    if not g.is_connected():
        raise GraphError("metric requires a connected graph")
    out: dict[tuple[int, int], Fraction] = {}
    weight = dict(zip(g.edges, g.lengths))
    for s in range(g.n):
        dist = {s: Fraction(0)}
        heap = [(Fraction(0), s)]
        done = set()
        while heap:
            d, u = heapq.heappop(heap)
            if u in done:
                continue
            done.add(u)
            for v in g.neighbors(u):
                nd = d + weight[_key(u, v)]
                if v not in dist or nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        for t, d in dist.items():
            out[(s, t)] = d
    return out


def hop_matrix(g: Graph) -> list[list[int]]:
    if not g.is_connected():
        raise GraphError("graph is disconnected")
    rows = []
    for s in range(g.n):
        d = bfs_distances(g, s)
        rows.append([d[t] for t in range(g.n)])
    return rows


def diameter(g: Graph) -> int:
    return max(max(row) for row in hop_matrix(g)) if g.n else 0


# -- medians and modularity -----------------------------------------------------

def medians(g: Graph, x1: int, x2: int, x3: int, dist=None) -> set[int]:
    d = hop_matrix(g) if dist is None else dist
    xs = (x1, x2, x3)
    return {
        y
        for y in range(g.n)
        if all(d[a][b] == d[a][y] + d[y][b] for a, b in itertools.combinations(xs, 2))
    }


def _triples(g: Graph, force: bool) -> Iterator[tuple[int, int, int]]:
    count = comb(g.n + 2, 3)
    if count > TRIPLE_CAP and not force:
        raise GraphError(f"{count} triples exceed the cap {TRIPLE_CAP}; pass force=True")
    return itertools.combinations_with_replacement(range(g.n), 3)


def is_median_graph(g: Graph, force: bool = False) -> bool:
    if not g.is_connected():
        return False
    d = hop_matrix(g)
    return all(len(medians(g, *t, dist=d)) == 1 for t in _triples(g, force))


def is_modular_graph(g: Graph, force: bool = False) -> bool:
    if not g.is_connected():
        return False
    d = hop_matrix(g)
    return all(medians(g, *t, dist=d) for t in _triples(g, force))


# -- admissible orientations ----------------------------------------------------

def four_cycles(g: Graph) -> list[tuple[int, int, int, int]]:
    """Each 4-cycle once, as a vertex sequence ``(x1, x2, x3, x4)``."""
    seen = set()
    out = []
    for a, c in itertools.combinations(range(g.n), 2):
        common = sorted(g.neighbors(a) & g.neighbors(c))
        for b, d in itertools.combinations(common, 2):
            key = frozenset((_key(a, b), _key(b, c), _key(c, d), _key(d, a)))
            if key not in seen:
                seen.add(key)
                out.append((a, b, c, d))
    return out


@dataclass(frozen=True)
class Orientation:
    """Arcs ``(a, b)`` meaning ``a -> b``; the induced order puts ``a`` below ``b``."""

    arcs: frozenset[tuple[int, int]]

    def points(self, u: int, v: int) -> bool:
        return (u, v) in self.arcs

    def successors(self, n: int) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(n)]
        for a, b in sorted(self.arcs):
            out[a].append(b)
        return out


def is_acyclic(n: int, arcs: Iterable[tuple[int, int]]) -> bool:
    indeg = [0] * n
    succ: list[list[int]] = [[] for _ in range(n)]
    for a, b in arcs:
        succ[a].append(b)
        indeg[b] += 1
    queue = deque(v for v in range(n) if indeg[v] == 0)
    seen = 0
    while queue:
        u = queue.popleft()
        seen += 1
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    return seen == n


def check_orientation(g: Graph, orient: Orientation) -> bool:
    """4-cycle rule plus acyclicity, checked directly from the arcs."""
    if len(orient.arcs) != len(g.edges):
        return False
    for u, v in g.edges:
        if orient.points(u, v) == orient.points(v, u):
            return False
    for x1, x2, x3, x4 in four_cycles(g):
        if orient.points(x1, x2) != orient.points(x4, x3):
            return False
        if orient.points(x2, x3) != orient.points(x1, x4):
            return False
    return is_acyclic(g.n, orient.arcs)


class _ParityUnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))
        self.parity = [0] * size

    def find(self, x: int) -> tuple[int, int]:
        p = 0
        root = x
        while self.parent[root] != root:
            p ^= self.parity[root]
            root = self.parent[root]
        # path compression
        cur, acc = x, p
        while self.parent[cur] != root:
            nxt, par = self.parent[cur], self.parity[cur]
            self.parent[cur], self.parity[cur] = root, acc
            acc ^= par
            cur = nxt
        return root, p

    def union(self, a: int, b: int, rel: int) -> bool:
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return (pa ^ pb) == rel
        self.parent[rb] = ra
        self.parity[rb] = pa ^ pb ^ rel
        return True


def orientation_classes(g: Graph) -> Optional[list[tuple[int, list[tuple[int, int]]]]]:
    """Parity classes of edges forced together by the 4-cycle rule.

    Returns, per class, its member edges with a relative bit: edge ``(u, v)``
    (``u < v``) with relative bit ``r`` is oriented ``u -> v`` when the class
    bit XOR ``r`` is 0.  ``None`` if the parity system is contradictory.
    """
    index = {e: i for i, e in enumerate(g.edges)}
    uf = _ParityUnionFind(len(g.edges))

    def flip(a: int, b: int) -> int:
        return 1 if a > b else 0

    for x1, x2, x3, x4 in four_cycles(g):
        for (a, b), (c, d) in (((x1, x2), (x4, x3)), ((x2, x3), (x1, x4))):
            rel = flip(a, b) ^ flip(c, d)
            if not uf.union(index[_key(a, b)], index[_key(c, d)], rel):
                return None
    classes: dict[int, list[tuple[int, int]]] = {}
    order: list[int] = []
    for i in range(len(g.edges)):
        root, p = uf.find(i)
        if root not in classes:
            classes[root] = []
            order.append(root)
        classes[root].append((i, p))
    out = []
    for root in order:
        members = classes[root]
        base = members[0][1]
        out.append((members[0][0], [(i, p ^ base) for i, p in members]))
    return out


def _orientation_from_bits(g: Graph, classes, bits) -> Orientation:
    arcs = set()
    for bit, (_, members) in zip(bits, classes):
        for i, rel in members:
            u, v = g.edges[i]
            arcs.add((u, v) if (bit ^ rel) == 0 else (v, u))
    return Orientation(frozenset(arcs))


def iter_admissible_orientations(g: Graph, max_classes: int = 20) -> Iterator[Orientation]:
    """All admissible acyclic orientations in lexicographic order of class bits."""
    classes = orientation_classes(g)
    if classes is None:
        return
    if len(classes) > max_classes:
        raise GraphError(f"{len(classes)} orientation classes exceed the search cap")
    for bits in itertools.product((0, 1), repeat=len(classes)):
        orient = _orientation_from_bits(g, classes, bits)
        if is_acyclic(g.n, orient.arcs):
            yield orient


def find_admissible_orientation(g: Graph) -> Optional[Orientation]:
    """Lexicographically least admissible acyclic orientation, or ``None``.

    Lexicographic order compares edges in sorted order, ``u -> v`` (``u < v``)
    counting as the smaller choice.
    """
    return next(iter_admissible_orientations(g), None)
