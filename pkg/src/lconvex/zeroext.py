"""Minimum 0-extension on small graphs: objective, exhaustive search and SDA.

An instance places ``n`` facilities on the vertices of a connected graph G and
pays ``b[i, v] * d(x_i, v)`` for every vertex and ``c[i, j] * d(x_i, x_j)``
for every facility pair.  When G is orientable modular the objective is
L-convex on the oriented product G^n, so steepest descent over principal
ideals and filters reaches the optimum.  Other graphs are rejected: the
problem is NP-hard there.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ._rational import format_rational, parse_rational
from .graphcore import Graph, GraphError, Orientation, hop_matrix, is_modular_graph, iter_admissible_orientations
from .gridconvex import SDAError, sda_minimize
from .semilattice import FinitePoset, FiniteSemilattice, ProductSemilattice, brute_force_minimize, is_submodular

SEARCH_CAP = 2_000_000


class ZeroExtError(ValueError):
    pass


class Rejected(ZeroExtError):
    """The graph is outside the tractable class."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


NP_HARD_REASON = (
    "graph is not orientable modular; minimum 0-extension on such a graph is NP-hard, "
    "so no exact polynomial method applies"
)


@dataclass(frozen=True)
class ZeroExtInstance:
    graph: Graph
    n: int
    b: dict = field(default_factory=dict)  # (i, v) -> weight
    c: dict = field(default_factory=dict)  # (i, j) with i < j -> weight

    def __post_init__(self):
        if self.n < 1:
            raise ZeroExtError("need at least one variable")
        if not self.graph.unit:
            raise ZeroExtError("graph must have unit edge lengths")
        if not self.graph.is_connected():
            raise ZeroExtError("graph must be connected")
        b, c = {}, {}
        for (i, v), w in self.b.items():
            w = parse_rational(w)
            if not (0 <= i < self.n and 0 <= v < self.graph.n):
                raise ZeroExtError(f"b index ({i},{v}) out of range")
            if w < 0 or w == float("inf"):
                raise ZeroExtError(f"b weight {w} is not a nonnegative rational")
            b[(i, v)] = b.get((i, v), Fraction(0)) + w
        for (i, j), w in self.c.items():
            w = parse_rational(w)
            if i == j or not (0 <= i < self.n and 0 <= j < self.n):
                raise ZeroExtError(f"c index ({i},{j}) invalid")
            if w < 0 or w == float("inf"):
                raise ZeroExtError(f"c weight {w} is not a nonnegative rational")
            key = (min(i, j), max(i, j))
            c[key] = c.get(key, Fraction(0)) + w
        object.__setattr__(self, "b", {k: v for k, v in sorted(b.items()) if v})
        object.__setattr__(self, "c", {k: v for k, v in sorted(c.items()) if v})
        object.__setattr__(self, "_dist", hop_matrix(self.graph))

    def dist(self, u: int, v: int) -> int:
        return self._dist[u][v]

    def to_json(self) -> dict:
        return {
            "graph": self.graph.to_json(),
            "n": self.n,
            "b": [[i, v, format_rational(w)] for (i, v), w in self.b.items()],
            "c": [[i, j, format_rational(w)] for (i, j), w in self.c.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ZeroExtInstance":
        try:
            graph = Graph.from_json(data["graph"])
            b = {}
            for i, v, w in data.get("b", []):
                b[(int(i), int(v))] = b.get((int(i), int(v)), Fraction(0)) + parse_rational(w)
            c = {}
            for i, j, w in data.get("c", []):
                c[(int(i), int(j))] = c.get((int(i), int(j)), Fraction(0)) + parse_rational(w)
            return cls(graph, int(data["n"]), b, c)
        except (KeyError, TypeError, ValueError, GraphError) as exc:
            if isinstance(exc, ZeroExtError):
                raise
            raise ZeroExtError(f"malformed instance JSON: {exc}") from exc


def objective(inst: ZeroExtInstance, x: Sequence[int]) -> Fraction:
    if len(x) != inst.n or any(not 0 <= v < inst.graph.n for v in x):
        raise ZeroExtError(f"{tuple(x)} is not a point of G^{inst.n}")
    d = inst._dist
    total = Fraction(0)
    for (i, v), w in inst.b.items():
        total += w * d[x[i]][v]
    for (i, j), w in inst.c.items():
        total += w * d[x[i]][x[j]]
    return total


def brute_force_solve(inst: ZeroExtInstance, cap: int = SEARCH_CAP) -> tuple[tuple[int, ...], Fraction]:
    """Exact optimum; the lexicographically least minimizer wins ties."""
    if inst.graph.n ** inst.n > cap:
        raise ZeroExtError(f"{inst.graph.n}^{inst.n} assignments exceed the cap {cap}")
    best, arg = None, None
    for x in itertools.product(range(inst.graph.n), repeat=inst.n):
        v = objective(inst, x)
        if best is None or v < best:
            best, arg = v, x
    return arg, best


# -- orientation and order ------------------------------------------------------------

def orientation_poset(g: Graph, orient: Orientation) -> FinitePoset:
    return FinitePoset(g.n, orient.arcs)


def _atomistic(P: FinitePoset, lo: int, hi: int) -> bool:
    inside = P.filter(lo) & P.ideal(hi)
    atoms = [a for a in inside if a != lo and not any(b != lo and b != a and P.leq(b, a) for b in inside)]
    for u in inside:
        below = [a for a in atoms if P.leq(a, u)]
        uppers = [v for v in inside if all(P.leq(a, v) for a in below)]
        # u must be the least upper bound of its atoms inside the interval
        if not all(P.leq(u, v) for v in uppers):
            return False
    return True


def is_well_oriented(g: Graph, orient: Orientation) -> bool:
    """Every interval [p, q] is a complemented modular lattice.

    Intervals of an admissibly oriented modular graph are modular lattices, and
    a modular lattice is complemented exactly when it is atomistic.
    """
    P = orientation_poset(g, orient)
    for p in range(g.n):
        for q in P.filter(p):
            if q != p and not _atomistic(P, p, q):
                return False
    return True


def well_oriented_orientations(g: Graph):
    for orient in iter_admissible_orientations(g):
        if is_well_oriented(g, orient):
            yield orient


def accept_graph(g: Graph) -> Orientation:
    """First well-oriented admissible orientation, or raise :class:`Rejected`."""
    if not g.is_connected():
        raise Rejected("graph is disconnected")
    if not is_modular_graph(g, force=True) or next(iter_admissible_orientations(g), None) is None:
        raise Rejected(NP_HARD_REASON)
    orient = next(well_oriented_orientations(g), None)
    if orient is None:
        raise Rejected("graph is orientable modular but has no well-oriented admissible orientation; unsupported")
    return orient


class OrientedProduct:
    """G^n ordered componentwise by an admissible orientation of G."""

    def __init__(self, g: Graph, n: int, orient: Orientation):
        self.graph = g
        self.n = n
        self.orientation = orient
        self.poset = orientation_poset(g, orient)
        self._ideal = [sorted(self.poset.ideal(v)) for v in range(g.n)]
        self._filter = [sorted(self.poset.filter(v)) for v in range(g.n)]
        self._delta = _delta_distances(self.poset)

    def check_point(self, x) -> tuple[int, ...]:
        x = tuple(int(v) for v in x)
        if len(x) != self.n or any(not 0 <= v < self.graph.n for v in x):
            raise ZeroExtError(f"{x} is not a point of G^{self.n}")
        return x

    def filter(self, x) -> list[tuple[int, ...]]:
        return [tuple(p) for p in itertools.product(*(self._filter[v] for v in x))]

    def ideal(self, x) -> list[tuple[int, ...]]:
        return [tuple(p) for p in itertools.product(*(self._ideal[v] for v in x))]

    def d_delta(self, x, y) -> int:
        """Distance in the graph adding pq whenever both meet and join exist."""
        return max((self._delta[a][b] for a, b in zip(x, y)), default=0)


def _delta_distances(P: FinitePoset) -> list[list[int]]:
    n = P.size
    adj = [[q for q in range(n) if q != p and P.glb(p, q) is not None and P.lub(p, q) is not None] for p in range(n)]
    out = []
    for s in range(n):
        dist = [-1] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        out.append(dist)
    return out


# -- solving -------------------------------------------------------------------------

def initial_point(inst: ZeroExtInstance) -> tuple[int, ...]:
    """All variables at the vertex of least total attraction weight (lowest index on ties)."""
    weight = [sum((w for (i, u), w in inst.b.items() if u == v), Fraction(0)) for v in range(inst.graph.n)]
    v0 = min(range(inst.graph.n), key=lambda v: (weight[v], v))
    return (v0,) * inst.n


@dataclass(frozen=True)
class SDAResult:
    argmin: tuple[int, ...]
    value: Fraction
    iterations: int
    trace: tuple
    orientation: Orientation

    def to_json(self) -> dict:
        return {
            "argmin": list(self.argmin),
            "value": format_rational(self.value),
            "iterations": self.iterations,
            "trace": [list(x) for x in self.trace],
            "orientation": sorted([list(a) for a in self.orientation.arcs]),
        }


def sda_solve(inst: ZeroExtInstance, orientation: Optional[Orientation] = None, start=None, cap: int = SEARCH_CAP) -> SDAResult:
    """Steepest descent on G^n with exhaustive local steps.

    Every iteration minimizes the objective over the principal ideal and the
    principal filter of the current point; ties prefer the filter.
    """
    orient = orientation if orientation is not None else accept_graph(inst.graph)
    space = OrientedProduct(inst.graph, inst.n, orient)
    x0 = space.check_point(start) if start is not None else initial_point(inst)

    def local(points, fn):
        return brute_force_minimize(points, fn, cap)

    try:
        x, trace = sda_minimize(space, lambda y: objective(inst, y), x0, local_oracle=local)
    except SDAError as exc:  # pragma: no cover - an L-convex objective cannot trigger this
        raise ZeroExtError(str(exc)) from exc
    return SDAResult(x, objective(inst, x), len(trace), tuple(trace), orient)


def distance_localizations_submodular(g: Graph, orient: Orientation) -> bool:
    """Check that d(x, y) restricted to F_x x F_y and I_x x I_y is submodular for every x, y."""
    P = orientation_poset(g, orient)
    d = hop_matrix(g)
    arcs = sorted(orient.arcs)

    def local(members, reverse):
        index = {v: i for i, v in enumerate(members)}
        hasse = [(index[b], index[a]) if reverse else (index[a], index[b]) for a, b in arcs if a in index and b in index]
        return FiniteSemilattice(len(members), hasse, labels=members)

    for reverse, region in ((False, P.filter), (True, P.ideal)):
        locals_ = [local(sorted(region(v)), reverse) for v in range(g.n)]
        for x in range(g.n):
            for y in range(g.n):
                L = ProductSemilattice([locals_[x], locals_[y]])
                lx, ly = locals_[x].labels, locals_[y].labels
                if not is_submodular(L, lambda p: d[lx[p[0]]][ly[p[1]]]):
                    return False
    return True


def random_instance(rng, graph: Graph, n: int, max_weight: int = 3, density: float = 0.5) -> ZeroExtInstance:
    b, c = {}, {}
    for i in range(n):
        for v in range(graph.n):
            if rng.random() < density:
                b[(i, v)] = Fraction(rng.randint(1, max_weight))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                c[(i, j)] = Fraction(rng.randint(1, max_weight))
    return ZeroExtInstance(graph, n, b, c)
