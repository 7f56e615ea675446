"""Tree-grids, twisted tree-grids and L-convex functions on them.

A grid is the n-fold product of a finite *base* graph with a partial order
(a zigzag-oriented tree, or the twisted product of two trees).  Points are
tuples of base vertex ids.  Bases supply the per-coordinate midpoint pair,
the principal ideal/filter charts onto S_k or S_{k,l}, and the coordinate
distance used by the Delta-graph.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import kernels
from ._rational import INF, common_scale, format_rational, parse_rational
from .graphcore import Graph, GraphError
from .semilattice import brute_force_minimize, is_k_submodular, is_kl_submodular

STATE_CAP = 50_000_000


class GridError(ValueError):
    pass


class NotMidpointClosed(GridError):
    pass


class OutsideSafeInterior(GridError):
    pass


def _two_coloring(g: Graph, root: int) -> list[int]:
    color = [-1] * g.n
    color[root] = 0
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in g.neighbors(u):
            if color[v] < 0:
                color[v] = 1 - color[u]
                queue.append(v)
    return color


class _TreePaths:
    """All-pairs paths in a small tree via per-source parent arrays."""

    def __init__(self, tree: Graph):
        if not tree.is_tree():
            raise GraphError("base graph must be a tree")
        self.tree = tree
        self._parent: list[list[int]] = []
        self.dist: list[list[int]] = []
        for s in range(tree.n):
            par = [-1] * tree.n
            dist = [-1] * tree.n
            dist[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for v in sorted(tree.neighbors(u)):
                    if dist[v] < 0:
                        dist[v] = dist[u] + 1
                        par[v] = u
                        queue.append(v)
            self._parent.append(par)
            self.dist.append(dist)

    def path(self, u: int, v: int) -> list[int]:
        par = self._parent[u]
        out = [v]
        while out[-1] != u:
            out.append(par[out[-1]])
        out.reverse()
        return out


# -- zigzag trees ---------------------------------------------------------------

class ZigzagTree:
    """A tree with bipartition (B, W); ``v <= u`` for every edge with v in B."""

    def __init__(self, tree: Graph, black: int = 0):
        self.tree = tree
        self._paths = _TreePaths(tree)
        self.color = _two_coloring(tree, black)  # 0 = B, 1 = W
        self.size = tree.n

    def is_black(self, v: int) -> bool:
        return self.color[v] == 0

    def dist(self, u: int, v: int) -> int:
        return self._paths.dist[u][v]

    def path(self, u: int, v: int) -> list[int]:
        return self._paths.path(u, v)

    def leq(self, u: int, v: int) -> bool:
        return u == v or (self.color[u] == 0 and self.tree.has_edge(u, v))

    def midpoint_pair(self, u: int, v: int) -> tuple[int, int]:
        p = self.path(u, v)
        d = len(p) - 1
        return (p[d // 2], p[d // 2]) if d % 2 == 0 else (p[d // 2], p[d // 2 + 1])

    def midpoint(self, u: int, v: int) -> tuple[int, int]:
        a, b = self.midpoint_pair(u, v)
        return (a, b) if self.leq(a, b) else (b, a)

    def upper(self, v: int) -> list[int]:
        return sorted(self.tree.neighbors(v)) if self.color[v] == 0 else []

    def lower(self, v: int) -> list[int]:
        return sorted(self.tree.neighbors(v)) if self.color[v] == 1 else []

    # charts: semilattice label -> base vertex
    def filter_chart(self, v: int) -> tuple[tuple, dict]:
        ups = self.upper(v)
        chart = {0: v}
        chart.update({a: w for a, w in enumerate(ups, start=1)})
        return ("S", len(ups)), chart

    def ideal_chart(self, v: int) -> tuple[tuple, dict]:
        downs = self.lower(v)
        chart = {0: v}
        chart.update({a: w for a, w in enumerate(downs, start=1)})
        return ("S", len(downs)), chart

    def coord_delta(self, u: int, v: int) -> int:
        return self.dist(u, v)

    def is_safe(self, v: int) -> bool:
        return True

    def label(self, v: int):
        return v

    def to_json(self) -> dict:
        return {"kind": "tree", "tree": self.tree.to_json(), "black": self.color.index(0)}


def tree_midpoint_pair(t: ZigzagTree, u: int, v: int) -> tuple[int, int]:
    """The pair (a, b) splitting the u-v path into equal ends with d(a, b) <= 1."""
    return t.midpoint_pair(u, v)


# -- twisted product G (x) H ------------------------------------------------------

def _zmid(a: int, b: int) -> tuple[int, int]:
    """Midpoint pair on Z with the even integers below their odd neighbours."""
    s = a + b
    if s % 2 == 0:
        return s // 2, s // 2
    m = (s - 1) // 2
    return (m, m + 1) if m % 2 == 0 else (m + 1, m)


class TwistedBase:
    """G (x) H: originals of G x H plus one square vertex per 4-cycle.

    Vertex ids: original (g, h) is ``g * |H| + h``; square vertices follow,
    one per (edge of G, edge of H) pair in sorted order.  The order is
    B <= square <= W where B holds the originals of even colour sum.
    """

    def __init__(self, G: Graph, H: Graph, margin: int = 2):
        self.G, self.H = G, H
        self._pg, self._ph = _TreePaths(G), _TreePaths(H)
        self.cg, self.ch = _two_coloring(G, 0), _two_coloring(H, 0)
        self.margin = margin
        self.n_orig = G.n * H.n
        self.squares = [(eg, eh) for eg in G.edges for eh in H.edges]
        self._square_id = {sq: self.n_orig + i for i, sq in enumerate(self.squares)}
        self.size = self.n_orig + len(self.squares)
        leaves_g = [v for v in range(G.n) if G.degree(v) <= 1]
        leaves_h = [v for v in range(H.n) if H.degree(v) <= 1]
        self._safe_g = [all(self._pg.dist[v][x] >= margin for x in leaves_g) for v in range(G.n)]
        self._safe_h = [all(self._ph.dist[v][x] >= margin for x in leaves_h) for v in range(H.n)]
        self._adj: list[list[int]] = [[] for _ in range(self.size)]
        for (eg, eh), sid in self._square_id.items():
            for g in eg:
                for h in eh:
                    self._adj[sid].append(self.orig(g, h))
                    self._adj[self.orig(g, h)].append(sid)
        self._mid_cache: dict[tuple[int, int], tuple[int, int]] = {}

    # identification
    def orig(self, g: int, h: int) -> int:
        return g * self.H.n + h

    def square(self, eg: tuple[int, int], eh: tuple[int, int]) -> int:
        return self._square_id[(tuple(sorted(eg)), tuple(sorted(eh)))]

    def is_square(self, v: int) -> bool:
        return v >= self.n_orig

    def decode(self, v: int):
        if v < self.n_orig:
            return divmod(v, self.H.n)
        return self.squares[v - self.n_orig]

    def label(self, v: int):
        if v < self.n_orig:
            return list(divmod(v, self.H.n))
        eg, eh = self.squares[v - self.n_orig]
        return [list(eg), list(eh)]

    def is_black(self, v: int) -> bool:
        if self.is_square(v):
            return False
        g, h = self.decode(v)
        return (self.cg[g] + self.ch[h]) % 2 == 0

    def is_white(self, v: int) -> bool:
        return not self.is_square(v) and not self.is_black(v)

    def neighbors(self, v: int) -> list[int]:
        return sorted(self._adj[v])

    def leq(self, u: int, v: int) -> bool:
        if u == v:
            return True
        if self.is_black(u):
            if self.is_square(v):
                return v in self._adj[u]
            if self.is_white(v):
                return any(s in self._adj[v] for s in self._adj[u])
            return False
        if self.is_square(u):
            return self.is_white(v) and v in self._adj[u]
        return False

    def is_safe(self, v: int) -> bool:
        if self.is_square(v):
            (g1, g2), (h1, h2) = self.decode(v)
            return self._safe_g[g1] and self._safe_g[g2] and self._safe_h[h1] and self._safe_h[h2]
        g, h = self.decode(v)
        return self._safe_g[g] and self._safe_h[h]

    def _projections(self, v: int) -> tuple[list[int], list[int]]:
        if self.is_square(v):
            eg, eh = self.decode(v)
            return list(eg), list(eh)
        g, h = self.decode(v)
        return [g], [h]

    @staticmethod
    def _covering_path(paths: _TreePaths, tree: Graph, pts: Sequence[int], ext: tuple[int, int]) -> list[int]:
        pts = sorted(set(pts))
        a, b = max(itertools.combinations_with_replacement(pts, 2), key=lambda ab: paths.dist[ab[0]][ab[1]])
        p = paths.path(a, b)
        if not set(pts) <= set(p):
            raise GridError("projections do not lie on a common path")
        # extend one step beyond each end; ext selects among the available neighbours
        for end, choice in ((0, ext[0]), (1, ext[1])):
            tip = p[0] if end == 0 else p[-1]
            inner = set(p[1:2]) if end == 0 else set(p[-2:-1])
            opts = [w for w in sorted(tree.neighbors(tip)) if w not in inner and w not in p]
            if opts:
                w = opts[choice % len(opts)]
                p = [w] + p if end == 0 else p + [w]
        return p

    def _embed(self, x: int, y: int, ext: tuple[int, int, int, int]):
        gx, hx = self._projections(x)
        gy, hy = self._projections(y)
        P = self._covering_path(self._pg, self.G, gx + gy, ext[:2])
        Q = self._covering_path(self._ph, self.H, hx + hy, ext[2:])
        return P, Q

    def _rot(self, v: int, P, Q):
        ip = {g: i for i, g in enumerate(P)}
        iq = {h: j for j, h in enumerate(Q)}
        c0 = (self.cg[P[0]] + self.ch[Q[0]]) % 2
        if self.is_square(v):
            eg, eh = self.decode(v)
            i, j = min(ip[g] for g in eg), min(iq[h] for h in eh)
            return i + j + 1 + c0, i - j + c0
        g, h = self.decode(v)
        i, j = ip[g], iq[h]
        return i + j + c0, i - j + c0

    def _unrot(self, u: int, w: int, P, Q) -> int:
        c0 = (self.cg[P[0]] + self.ch[Q[0]]) % 2
        X, Y = u + w - 2 * c0, u - w
        if X % 2 == 0:
            i, j = X // 2, Y // 2
            if not (0 <= i < len(P) and 0 <= j < len(Q)):
                raise OutsideSafeInterior("midpoint leaves the embedded patch")
            return self.orig(P[i], Q[j])
        i, j = (X - 1) // 2, (Y - 1) // 2
        if not (0 <= i < len(P) - 1 and 0 <= j < len(Q) - 1):
            raise OutsideSafeInterior("midpoint leaves the embedded patch")
        return self.square((P[i], P[i + 1]), (Q[j], Q[j + 1]))

    def _midpoint_in(self, x: int, y: int, ext) -> tuple[int, int]:
        P, Q = self._embed(x, y, ext)
        ux, vx = self._rot(x, P, Q)
        uy, vy = self._rot(y, P, Q)
        ul, uh = _zmid(ux, uy)
        vl, vh = _zmid(vx, vy)
        return self._unrot(ul, vl, P, Q), self._unrot(uh, vh, P, Q)

    def midpoint(self, x: int, y: int) -> tuple[int, int]:
        key = (x, y)
        if key not in self._mid_cache:
            if not (self.is_safe(x) and self.is_safe(y)):
                raise OutsideSafeInterior(f"vertices {self.label(x)}, {self.label(y)} outside the safe interior")
            self._mid_cache[key] = self._midpoint_in(x, y, (0, 0, 0, 0))
        return self._mid_cache[key]

    def midpoints_all_embeddings(self, x: int, y: int) -> set[tuple[int, int]]:
        """Midpoints under every choice of path extension (should be one pair)."""
        out = set()
        for ext in itertools.product(range(3), repeat=4):
            out.add(self._midpoint_in(x, y, ext))
        return out

    def coord_delta(self, x: int, y: int) -> int:
        P, Q = self._embed(x, y, (0, 0, 0, 0))
        ux, vx = self._rot(x, P, Q)
        uy, vy = self._rot(y, P, Q)
        return max(abs(ux - uy), abs(vx - vy))

    def _kl_chart(self, v: int, up: bool) -> tuple[tuple, dict]:
        if self.is_square(v):
            corners = [w for w in self.neighbors(v) if (self.is_white(w) if up else self.is_black(w))]
            chart = {(0, 0): v}
            chart.update({(0, b): w for b, w in enumerate(corners, start=1)})
            return ("SKL", 0, len(corners)), chart
        if (up and self.is_white(v)) or (not up and self.is_black(v)):
            return ("SKL", 0, 0), {(0, 0): v}
        g, h = self.decode(v)
        ng, nh = sorted(self.G.neighbors(g)), sorted(self.H.neighbors(h))
        chart = {(0, 0): v}
        for a, ga in enumerate(ng, start=1):
            chart[(a, 0)] = self.orig(ga, h)
        for b, hb in enumerate(nh, start=1):
            chart[(0, b)] = self.orig(g, hb)
        for a, ga in enumerate(ng, start=1):
            for b, hb in enumerate(nh, start=1):
                chart[(a, b)] = self.square((g, ga), (h, hb))
        return ("SKL", len(ng), len(nh)), chart

    def filter_chart(self, v: int):
        return self._kl_chart(v, True)

    def ideal_chart(self, v: int):
        return self._kl_chart(v, False)

    def upper(self, v: int) -> list[int]:
        _, chart = self.filter_chart(v)
        return sorted(w for w in chart.values() if w != v)

    def lower(self, v: int) -> list[int]:
        _, chart = self.ideal_chart(v)
        return sorted(w for w in chart.values() if w != v)

    def safe_vertices(self) -> list[int]:
        return [v for v in range(self.size) if self.is_safe(v)]

    def to_json(self) -> dict:
        return {"kind": "twisted", "G": self.G.to_json(), "H": self.H.to_json(), "margin": self.margin}


# -- grids ------------------------------------------------------------------------

class Grid:
    """n-fold product of a base with componentwise order and midpoints."""

    def __init__(self, base, n: int):
        if n < 0:
            raise GridError("dimension must be nonnegative")
        self.base = base
        self.n = n

    @property
    def twisted(self) -> bool:
        return isinstance(self.base, TwistedBase)

    def check_point(self, x: Sequence[int]) -> tuple[int, ...]:
        x = tuple(int(v) for v in x)
        if len(x) != self.n or any(not 0 <= v < self.base.size for v in x):
            raise GridError(f"{x} is not a point of this grid")
        return x

    def leq(self, x, y) -> bool:
        return all(self.base.leq(a, b) for a, b in zip(x, y))

    def midpoints(self, x, y) -> tuple[tuple[int, ...], tuple[int, ...]]:
        pairs = [self.base.midpoint(a, b) for a, b in zip(x, y)]
        return tuple(p for p, _ in pairs), tuple(q for _, q in pairs)

    def filter(self, x) -> list[tuple[int, ...]]:
        return list(itertools.product(*([v] + self.base.upper(v) for v in x)))

    def ideal(self, x) -> list[tuple[int, ...]]:
        return list(itertools.product(*([v] + self.base.lower(v) for v in x)))

    def d_delta(self, x, y) -> int:
        return max((self.base.coord_delta(a, b) for a, b in zip(x, y)), default=0)

    def to_json(self) -> dict:
        return {**self.base.to_json(), "n": self.n}

    @classmethod
    def from_json(cls, data: dict) -> "Grid":
        if data.get("kind") == "twisted":
            base = TwistedBase(Graph.from_json(data["G"]), Graph.from_json(data["H"]), data.get("margin", 2))
        else:
            base = ZigzagTree(Graph.from_json(data["tree"]), data.get("black", 0))
        return cls(base, int(data["n"]))


class TreeGrid(Grid):
    def __init__(self, tree: ZigzagTree | Graph, n: int):
        super().__init__(tree if isinstance(tree, ZigzagTree) else ZigzagTree(tree), n)


class TwistedTreeGrid(Grid):
    def __init__(self, G: Graph, H: Graph, n: int, margin: int = 2):
        super().__init__(TwistedBase(G, H, margin), n)


def midpoints(grid: Grid, x, y):
    return grid.midpoints(x, y)


def d_delta(grid: Grid, x, y) -> int:
    return grid.d_delta(x, y)


# -- functions on grids ---------------------------------------------------------------

class GridFunction:
    """A finite table of values (exact rationals or INF); points outside the
    table are treated as +infinity."""

    def __init__(self, grid: Grid, table: dict):
        self.grid = grid
        self.table = {grid.check_point(x): (v if v == INF else Fraction(v)) for x, v in table.items()}
        if not self.dom():
            raise GridError("effective domain is empty")

    @classmethod
    def from_callable(cls, grid: Grid, points: Iterable, fn: Callable) -> "GridFunction":
        return cls(grid, {tuple(x): fn(tuple(x)) for x in points})

    @classmethod
    def box(cls, grid: Grid, coords: Sequence[Sequence[int]], fn: Callable) -> "GridFunction":
        return cls.from_callable(grid, itertools.product(*coords), fn)

    def __call__(self, x) -> Fraction | float:
        return self.table.get(tuple(x), INF)

    def dom(self) -> list[tuple[int, ...]]:
        return sorted(x for x, v in self.table.items() if v != INF)

    def to_json(self) -> dict:
        pts = sorted(self.table)
        return {
            "grid": self.grid.to_json(),
            "points": [list(p) for p in pts],
            "values": [format_rational(self.table[p]) for p in pts],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GridFunction":
        grid = Grid.from_json(data["grid"])
        pts = [tuple(p) for p in data["points"]]
        vals = [parse_rational(v) for v in data["values"]]
        if len(pts) != len(vals):
            raise GridError("points and values differ in length")
        return cls(grid, dict(zip(pts, vals)))


def _encode(grid: Grid, points: Sequence[tuple[int, ...]]):
    """Compress the used base vertices and build the kernel's midpoint tables."""
    used = sorted({v for x in points for v in x})
    pos = {v: i for i, v in enumerate(used)}
    base = max(len(used), 1)
    if base ** grid.n > STATE_CAP:
        raise GridError(f"table needs {base ** grid.n} states, above the cap {STATE_CAP}")
    lo = np.full(base * base, -2, dtype=np.int64)
    hi = np.full(base * base, -2, dtype=np.int64)
    for a in used:
        for b in used:
            m, M = grid.base.midpoint(a, b)
            lo[pos[a] * base + pos[b]] = pos.get(m, -2)
            hi[pos[a] * base + pos[b]] = pos.get(M, -2)
    powers = [base ** c for c in range(grid.n)]

    def code(x):
        return sum(pos[v] * p for v, p in zip(x, powers))

    return lo, hi, base, code


def _check_safe(grid: Grid, points):
    for x in points:
        for v in x:
            if not grid.base.is_safe(v):
                raise OutsideSafeInterior(f"point {x} uses a vertex outside the safe interior")


def midpoint_closure_violation(grid: Grid, points: Sequence) -> Optional[tuple]:
    """A pair of table points with a midpoint outside the table, else None."""
    points = sorted({tuple(p) for p in points})
    _check_safe(grid, points)
    lo, hi, base, code = _encode(grid, points)
    codes = np.array([code(x) for x in points], dtype=np.int64)
    size = base ** grid.n
    state = np.zeros(size, dtype=np.int8)
    state[codes] = kernels.FINITE
    i, j = kernels.midpoint_violation(lo, hi, grid.n, base, codes, np.zeros(size, dtype=np.int64), state)
    return None if i < 0 else (points[i], points[j])


def lconvex_violation(grid: Grid, g: GridFunction) -> Optional[tuple]:
    """First pair (x, y) of the effective domain with g(x)+g(y) < g(x.y)+g(xoy)."""
    bad = midpoint_closure_violation(grid, g.table)
    if bad is not None:
        raise NotMidpointClosed(f"table domain is not midpoint-closed: {bad}")
    dom = g.dom()
    if len(dom) < 2:
        return None
    pts = sorted(g.table)
    lo, hi, base, code = _encode(grid, pts)
    finite = [g.table[x] for x in dom]
    scale = common_scale(finite)
    ints = [int(v * scale) for v in finite]
    if max(abs(v) for v in ints) > (1 << 60):
        raise GridError("values too large for the integer kernel")
    size = base ** grid.n
    vals = np.zeros(size, dtype=np.int64)
    state = np.zeros(size, dtype=np.int8)
    for x in pts:
        state[code(x)] = kernels.INFINITE
    codes = np.array([code(x) for x in dom], dtype=np.int64)
    vals[codes] = ints
    state[codes] = kernels.FINITE
    i, j = kernels.midpoint_violation(lo, hi, grid.n, base, codes, vals, state)
    return None if i < 0 else (dom[i], dom[j])


def is_lconvex(grid: Grid, g: GridFunction) -> bool:
    return lconvex_violation(grid, g) is None


# -- localizations -------------------------------------------------------------------

@dataclass(frozen=True)
class Localization:
    side: str
    kind: str  # "S" (k-submodular) or "SKL" ((k,l)-submodular)
    params: tuple  # k per coordinate, or (k, l) per coordinate
    charts: tuple  # per coordinate: label -> base vertex
    table: dict  # label tuple -> value

    def point(self, labels) -> tuple[int, ...]:
        return tuple(chart[a] for chart, a in zip(self.charts, labels))

    def is_submodular(self) -> bool:
        if self.kind == "S":
            return is_k_submodular(self.params, self.table)
        return is_kl_submodular(self.params, self.table)


def localization(grid: Grid, g, x, side: str) -> Localization:
    """Restriction of g to the principal filter (``side="filter"``) or ideal
    of x, as a table over S_k or S_{k,l} labels."""
    if side not in ("ideal", "filter"):
        raise GridError("side must be 'ideal' or 'filter'")
    x = grid.check_point(x)
    charts = [grid.base.filter_chart(v) if side == "filter" else grid.base.ideal_chart(v) for v in x]
    kind = charts[0][0][0] if charts else ("SKL" if grid.twisted else "S")
    params = tuple(c[0][1] if c[0][0] == "S" else (c[0][1], c[0][2]) for c in charts)
    maps = tuple(c[1] for c in charts)
    table = {}
    for labels in itertools.product(*(sorted(m) for m in maps)):
        table[labels] = g(tuple(m[a] for m, a in zip(maps, labels)))
    return Localization(side, kind, params, maps, table)


def is_chain_connected(grid: Grid, points: Iterable) -> bool:
    pts = sorted({tuple(p) for p in points})
    if not pts:
        return True
    index = {p: i for i, p in enumerate(pts)}
    parent = list(range(len(pts)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for p in pts:
        for q in grid.filter(p):
            j = index.get(q)
            if j is not None:
                parent[find(index[p])] = find(j)
    return len({find(i) for i in range(len(pts))}) == 1


def is_locally_submodular_and_chain_connected(grid: Grid, g: GridFunction) -> bool:
    """Local characterization: every localization at a domain point is
    submodular and the effective domain is chain-connected."""
    dom = g.dom()
    for x in dom:
        for side in ("ideal", "filter"):
            if not localization(grid, g, x, side).is_submodular():
                return False
    return is_chain_connected(grid, dom)


# -- steepest descent ------------------------------------------------------------------

class SDAError(RuntimeError):
    pass


def steepest_step(grid: Grid, g, x, local_oracle=None):
    """Minimizer over I_x u F_x; the filter side wins ties, then lexicographic order."""
    oracle = local_oracle or brute_force_minimize
    yf, vf = oracle(grid.filter(x), g)
    yi, vi = oracle(grid.ideal(x), g)
    return (yf, vf) if vf <= vi else (yi, vi)


def sda_minimize(grid: Grid, g, x0, local_oracle=None, max_iter: int = 1_000_000):
    """Steepest descent from x0; returns ``(minimizer, trace)`` where the
    trace lists every point at which a steepest direction was computed."""
    x = grid.check_point(x0)
    gx = g(x)
    if gx == INF:
        raise SDAError("initial point is outside the effective domain")
    trace = [x]
    for _ in range(max_iter):
        y, gy = steepest_step(grid, g, x, local_oracle)
        if gy > gx:
            raise SDAError("local oracle returned a point worse than the current one")
        if gy == gx:
            return x, trace
        x, gx = tuple(y), gy
        trace.append(x)
    raise SDAError("iteration limit reached")


def brute_force_argmin(points: Iterable, g) -> tuple[Fraction, list]:
    best, args = INF, []
    for x in points:
        v = g(x)
        if v < best:
            best, args = v, [tuple(x)]
        elif v == best and v != INF:
            args.append(tuple(x))
    return best, args


def trace_to_json(grid: Grid, trace) -> list:
    return [[grid.base.label(v) for v in x] for x in trace]
