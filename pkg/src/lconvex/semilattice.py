"""Finite modular semilattices, the polar domains S_k / S_{k,l}, fractional
joins and the submodularity checkers built on them.

Elements of a :class:`FiniteSemilattice` are the integers ``0..size-1``;
elements of a :class:`ProductSemilattice` are tuples of component elements.
All arithmetic is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Optional, Sequence

from ._rational import INF, parse_rational

SIZE_CAP = 250_000


class SemilatticeError(ValueError):
    pass


class CapExceeded(SemilatticeError):
    pass


# -- posets ---------------------------------------------------------------------

class FinitePoset:
    """Poset on ``0..size-1`` given by the cover pairs of its Hasse diagram."""

    def __init__(self, size: int, hasse: Iterable[tuple[int, int]], labels: Optional[Sequence] = None):
        self.size = size
        self.hasse = tuple(sorted({(int(a), int(b)) for a, b in hasse}))
        self.labels = tuple(labels) if labels is not None else tuple(range(size))
        up: list[set[int]] = [set() for _ in range(size)]
        for a, b in self.hasse:
            if a == b or not (0 <= a < size and 0 <= b < size):
                raise SemilatticeError(f"bad cover pair ({a},{b})")
            up[a].add(b)
        # transitive closure by DFS from each element
        above = []
        for s in range(size):
            seen = {s}
            stack = [s]
            while stack:
                u = stack.pop()
                for v in up[u]:
                    if v not in seen:
                        seen.add(v)
                        stack.append(v)
            above.append(frozenset(seen))
        for a in range(size):
            for b in above[a]:
                if b != a and a in above[b]:
                    raise SemilatticeError("order relation is cyclic")
        self._above = tuple(above)
        self._below = tuple(frozenset(b for b in range(size) if a in above[b]) for a in range(size))

    def leq(self, p: int, q: int) -> bool:
        return q in self._above[p]

    def ideal(self, p: int) -> frozenset[int]:
        return self._below[p]

    def filter(self, p: int) -> frozenset[int]:
        return self._above[p]

    def minimum(self) -> Optional[int]:
        for p in range(self.size):
            if len(self._above[p]) == self.size:
                return p
        return None

    def glb(self, p: int, q: int) -> Optional[int]:
        common = self._below[p] & self._below[q]
        for c in common:
            if common <= self._below[c]:
                return c
        return None

    def lub(self, p: int, q: int) -> Optional[int]:
        common = self._above[p] & self._above[q]
        for c in common:
            if common <= self._above[c]:
                return c
        return None

    def to_json(self) -> dict:
        return {"elements": self.size, "hasse": [list(e) for e in self.hasse]}

    @classmethod
    def from_json(cls, data: dict) -> "FinitePoset":
        try:
            return cls(int(data["elements"]), [tuple(e) for e in data["hasse"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise SemilatticeError(f"malformed poset JSON: {exc}") from exc


class FiniteSemilattice(FinitePoset):
    """Meet-semilattice with a global minimum, tabulated meet/join and rank."""

    def __init__(self, size: int, hasse: Iterable[tuple[int, int]], labels: Optional[Sequence] = None):
        super().__init__(size, hasse, labels)
        bottom = self.minimum()
        if bottom is None:
            raise SemilatticeError("no global minimum")
        self.bottom = bottom
        meet = [[0] * size for _ in range(size)]
        join: list[list[Optional[int]]] = [[None] * size for _ in range(size)]
        for p in range(size):
            for q in range(p, size):
                m = self.glb(p, q)
                if m is None:
                    raise SemilatticeError(f"elements {p},{q} have no meet")
                meet[p][q] = meet[q][p] = m
                j = self.lub(p, q)
                join[p][q] = join[q][p] = j
        self._meet = meet
        self._join = join
        # rank = longest chain from the minimum (all maximal chains agree when modular)
        order = sorted(range(size), key=lambda p: len(self._below[p]))
        rank = [0] * size
        covers_down: list[list[int]] = [[] for _ in range(size)]
        for a, b in self.hasse:
            covers_down[b].append(a)
        for p in order:
            rank[p] = max((rank[c] + 1 for c in covers_down[p]), default=0)
        self._rank = tuple(rank)
        self._interval_cache: dict[tuple[int, int], dict[int, tuple[int, int]]] = {}
        # ("S", k) or ("SKL", k, l) for the polar families, else None
        self.polar: Optional[tuple] = None

    def elements(self) -> list[int]:
        return list(range(self.size))

    def meet(self, p: int, q: int) -> int:
        return self._meet[p][q]

    def join_if_exists(self, p: int, q: int) -> Optional[int]:
        return self._join[p][q]

    def rank(self, p: int) -> int:
        return self._rank[p]

    def interval(self, lo: int, hi: int) -> list[int]:
        return sorted(self._above[lo] & self._below[hi])

    def interval_elements(self, p: int, q: int) -> dict[int, tuple[int, int]]:
        """I(p, q): every ``u = a v b`` with ``p >= a >= p^q <= b <= q``, mapped to ``(a, b)``."""
        key = (p, q)
        cached = self._interval_cache.get(key)
        if cached is not None:
            return cached
        m = self.meet(p, q)
        out: dict[int, tuple[int, int]] = {}
        for a in self.interval(m, p):
            for b in self.interval(m, q):
                u = self.join_if_exists(a, b)
                if u is None:
                    continue
                if u in out and out[u] != (a, b):
                    raise SemilatticeError(f"representation of {u} in I({p},{q}) is not unique")
                out[u] = (a, b)
        self._interval_cache[key] = out
        return out

    def hasse_graph(self):
        from .graphcore import Graph

        return Graph(self.size, self.hasse)

    def distance(self, p: int, q: int) -> int:
        return self.rank(p) + self.rank(q) - 2 * self.rank(self.meet(p, q))


class ProductSemilattice:
    """Direct product of semilattices with componentwise order and operations."""

    def __init__(self, factors: Sequence):
        self.factors = tuple(factors)

    @property
    def size(self) -> int:
        out = 1
        for f in self.factors:
            out *= f.size
        return out

    def elements(self) -> list[tuple]:
        return list(itertools.product(*(f.elements() for f in self.factors)))

    @property
    def bottom(self) -> tuple:
        return tuple(f.bottom for f in self.factors)

    def leq(self, p, q) -> bool:
        return all(f.leq(a, b) for f, a, b in zip(self.factors, p, q))

    def meet(self, p, q) -> tuple:
        return tuple(f.meet(a, b) for f, a, b in zip(self.factors, p, q))

    def join_if_exists(self, p, q) -> Optional[tuple]:
        out = []
        for f, a, b in zip(self.factors, p, q):
            j = f.join_if_exists(a, b)
            if j is None:
                return None
            out.append(j)
        return tuple(out)

    def rank(self, p) -> int:
        return sum(f.rank(a) for f, a in zip(self.factors, p))

    def interval_elements(self, p, q) -> dict[tuple, tuple[tuple, tuple]]:
        parts = [list(f.interval_elements(a, b).items()) for f, a, b in zip(self.factors, p, q)]
        out = {}
        for combo in itertools.product(*parts):
            u = tuple(c[0] for c in combo)
            out[u] = (tuple(c[1][0] for c in combo), tuple(c[1][1] for c in combo))
        return out

    def distance(self, p, q) -> int:
        return self.rank(p) + self.rank(q) - 2 * self.rank(self.meet(p, q))


# -- modularity -------------------------------------------------------------------

def is_modular_semilattice(P: FinitePoset) -> bool:
    """Meet-semilattice whose principal ideals are modular lattices and in which
    pairwise-joinable triples are joinable."""
    if P.minimum() is None:
        raise SemilatticeError("poset has no global minimum")
    try:
        L = P if isinstance(P, FiniteSemilattice) else FiniteSemilattice(P.size, P.hasse, P.labels)
    except SemilatticeError:
        return False
    n = L.size
    for p in range(n):
        ideal = sorted(L.ideal(p))
        for x in ideal:
            for z in ideal:
                if not L.leq(z, x):
                    continue
                for y in ideal:
                    yz = L.join_if_exists(y, z)
                    xy = L.meet(x, y)
                    lhs = L.meet(x, yz)
                    rhs = L.join_if_exists(xy, z)
                    if lhs != rhs:
                        return False
    for x, y, z in itertools.combinations(range(n), 3):
        xy, yz, zx = L.join_if_exists(x, y), L.join_if_exists(y, z), L.join_if_exists(z, x)
        if xy is not None and yz is not None and zx is not None:
            if L.join_if_exists(xy, z) is None:
                return False
    return True


# -- standard families ------------------------------------------------------------

def star_semilattice(k: int) -> FiniteSemilattice:
    """S_k: element 0 below the k labels ``1..k``."""
    L = FiniteSemilattice(k + 1, [(0, i) for i in range(1, k + 1)], labels=range(k + 1))
    L.polar = ("S", k)
    return L


def skl_elements(k: int, l: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(k + 1) for b in range(l + 1)]


def twisted_semilattice(k: int, l: int) -> FiniteSemilattice:
    """S_{k,l} with the twisted order: (0,0) < (a,b) < (a,0), (0,b)."""
    elems = skl_elements(k, l)
    idx = {e: i for i, e in enumerate(elems)}
    covers = []
    for a, b in elems:
        if a and b:
            covers += [(idx[(0, 0)], idx[(a, b)]), (idx[(a, b)], idx[(a, 0)]), (idx[(a, b)], idx[(0, b)])]
    for a in range(1, k + 1):
        if l == 0:
            covers.append((idx[(0, 0)], idx[(a, 0)]))
    for b in range(1, l + 1):
        if k == 0:
            covers.append((idx[(0, 0)], idx[(0, b)]))
    L = FiniteSemilattice(len(elems), covers, labels=elems)
    L.polar = ("SKL", k, l)
    return L


def diamond(atoms: int) -> FiniteSemilattice:
    """Modular lattice of rank 2 with the given number of atoms."""
    top = atoms + 1
    covers = [(0, i) for i in range(1, atoms + 1)] + [(i, top) for i in range(1, atoms + 1)]
    return FiniteSemilattice(atoms + 2, covers)


def boolean_lattice(rank: int) -> FiniteSemilattice:
    size = 1 << rank
    covers = [(s, s | (1 << i)) for s in range(size) for i in range(rank) if not s & (1 << i)]
    return FiniteSemilattice(size, covers)


def pentagon() -> FinitePoset:
    # 0 < a < b < 1, 0 < c < 1
    return FinitePoset(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)], labels="0abc1")


def flatten_product(L: ProductSemilattice) -> FiniteSemilattice:
    """Explicit semilattice isomorphic to a product (for structural checks)."""
    elems = L.elements()
    idx = {e: i for i, e in enumerate(elems)}
    covers = []
    for e in elems:
        for pos, f in enumerate(L.factors):
            for a, b in f.hasse:
                if e[pos] == a:
                    covers.append((idx[e], idx[e[:pos] + (b,) + e[pos + 1:]]))
    return FiniteSemilattice(len(elems), covers, labels=elems)


def standard_catalog(max_size: int = 20) -> list[tuple[str, object]]:
    """The test catalog: S_k, S_{k,l} (k,l<=3), diamonds, Boolean lattices up to
    rank 3 and a selection of binary products, each of size <= max_size."""
    out: list[tuple[str, object]] = []
    for k in range(0, 4):
        out.append((f"S_{k}", star_semilattice(k)))
    for k in range(1, 4):
        for l in range(1, 4):
            out.append((f"S_{k},{l}", twisted_semilattice(k, l)))
    for atoms in (3, 4):
        out.append((f"M_{atoms}", diamond(atoms)))
    for r in range(1, 4):
        out.append((f"B_{r}", boolean_lattice(r)))
    base = {
        "S_1": star_semilattice(1),
        "S_2": star_semilattice(2),
        "S_3": star_semilattice(3),
        "M_3": diamond(3),
        "S_1,1": twisted_semilattice(1, 1),
        "S_2,1": twisted_semilattice(2, 1),
        "B_2": boolean_lattice(2),
    }
    for (na, a), (nb, b) in itertools.combinations_with_replacement(base.items(), 2):
        if a.size * b.size <= max_size:
            out.append((f"{na}x{nb}", ProductSemilattice([a, b])))
    return [(name, L) for name, L in out if L.size <= max_size]


def is_polar_family(L) -> bool:
    """True for S_k, S_{k,l} and their products (the domains with sqcap/sqcup)."""
    if isinstance(L, ProductSemilattice):
        return all(is_polar_family(f) for f in L.factors)
    return getattr(L, "polar", None) is not None


# -- polar operations on S_k and S_{k,l} --------------------------------------------

def sk_meet(u: int, v: int) -> int:
    if u == v or v == 0:
        return v
    if u == 0:
        return 0
    return 0


def sk_join(u: int, v: int) -> int:
    if u == v or v == 0:
        return u
    if u == 0:
        return v
    return 0


def _s2_meet(x: int, y: int) -> int:
    return x if x == y else 0


def _s2_join(x: int, y: int) -> int:
    if x == y or y == 0:
        return x
    if x == 0:
        return y
    return 0


_PHANTOM = -1


def _phi_tables(a, a2, b, b2):
    fwd = {
        (0, 0): (0, 0),
        (a, b): (1, 0),
        (a2, b): (0, -1),
        (a, b2): (0, 1),
        (a2, b2): (-1, 0),
        (a, 0): (1, 1),
        (a2, 0): (-1, -1),
        (0, b): (1, -1),
        (0, b2): (-1, 1),
    }
    return fwd, {v: k for k, v in fwd.items()}


def _frame_labels(p, q, k: int, l: int, choice: int = 0):
    firsts = sorted({x for x in (p[0], q[0]) if x})
    seconds = sorted({x for x in (p[1], q[1]) if x})
    spare_a = [x for x in range(1, k + 1) if x not in firsts] or [_PHANTOM]
    spare_b = [x for x in range(1, l + 1) if x not in seconds] or [_PHANTOM]
    fa = firsts + spare_a
    fb = seconds + spare_b
    a, a2 = (fa[0], fa[1]) if len(fa) > 1 else (fa[0], _PHANTOM)
    b, b2 = (fb[0], fb[1]) if len(fb) > 1 else (fb[0], _PHANTOM)
    if choice & 1:
        a, a2 = a2, a
    if choice & 2:
        b, b2 = b2, b
    return a, a2, b, b2


def skl_pair_ops(p: tuple[int, int], q: tuple[int, int], k: int, l: int, choice: int = 0):
    """``(p sqcap q, p sqcup q)`` on S_{k,l} computed through a frame isomorphism.

    ``choice`` (0..3) swaps the roles of a/a' and b/b'; the result must not
    depend on it.
    """
    a, a2, b, b2 = _frame_labels(p, q, k, l, choice)
    if a == _PHANTOM and a2 == _PHANTOM:
        a = -2
    if b == _PHANTOM and b2 == _PHANTOM:
        b = -2
    fwd, inv = _phi_tables(a, a2, b, b2)
    x, y = fwd[p], fwd[q]
    lo = inv[(_s2_meet(x[0], y[0]), _s2_meet(x[1], y[1]))]
    hi = inv[(_s2_join(x[0], y[0]), _s2_join(x[1], y[1]))]
    for r in (lo, hi):
        if r[0] < 0 or r[1] < 0:
            raise SemilatticeError(f"frame produced a phantom label for {p},{q}")
    return lo, hi


def sk_ops(k: int) -> tuple[dict, dict]:
    """Tables of sqcap and sqcup on S_k."""
    meet, join = {}, {}
    for u in range(k + 1):
        for v in range(k + 1):
            meet[(u, v)] = sk_meet(u, v)
            join[(u, v)] = sk_join(u, v)
    return meet, join


def skl_ops(k: int, l: int) -> tuple[dict, dict]:
    """Tables of sqcap and sqcup on S_{k,l}."""
    meet, join = {}, {}
    for p in skl_elements(k, l):
        for q in skl_elements(k, l):
            meet[(p, q)], join[(p, q)] = skl_pair_ops(p, q, k, l)
    return meet, join


def polar_ops_for(L: FiniteSemilattice):
    """sqcap/sqcup on element indices of a semilattice built by
    :func:`star_semilattice` or :func:`twisted_semilattice`."""
    if L.polar is None:
        raise SemilatticeError("not an S_k or S_{k,l} semilattice")
    if L.polar[0] == "S":

        def ops(p, q):
            return sk_meet(p, q), sk_join(p, q)

        return ops
    _, k, l = L.polar
    labels = L.labels
    idx = {x: i for i, x in enumerate(labels)}

    def ops(p, q):
        lo, hi = skl_pair_ops(labels[p], labels[q], k, l)
        return idx[lo], idx[hi]

    return ops


# -- fractional join ---------------------------------------------------------------

@dataclass(frozen=True)
class FractionalJoin:
    terms: tuple[tuple[Hashable, Fraction], ...]

    def total(self) -> Fraction:
        return sum((c for _, c in self.terms), Fraction(0))

    def as_dict(self) -> dict:
        return dict(self.terms)


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def maximal_extreme_chain(points: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    """Vertices of the convex hull that are Pareto-maximal, by increasing x."""
    pts = sorted(set(points))
    start = max(pts, key=lambda t: (t[1], t[0]))
    end = max(pts, key=lambda t: (t[0], t[1]))
    if start == end:
        return [start]
    cand = [t for t in pts if t[0] >= start[0]]
    # upper hull (monotone chain), clockwise from left to right
    hull: list[tuple[int, int]] = []
    for t in cand:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], t) >= 0:
            hull.pop()
        hull.append(t)
    i = hull.index(start)
    j = hull.index(end)
    chain = hull[i:j + 1]
    return chain


def _sigma_of_edge(left: tuple[int, int], right: tuple[int, int]) -> Fraction:
    # normal of the hull edge has tan(theta) = dx/dy; sigma = t/(1+t)
    dx = right[0] - left[0]
    dy = left[1] - right[1]
    return Fraction(dx, dx + dy)


def _rank_profile(L, p, q) -> dict:
    """Map each rank vector r(u; p, q) over I(p, q) to (multiplicity, owner).

    On products the vectors add up factorwise, so the profile is the
    Minkowski sum of the factor profiles; ``owner`` is meaningful only when
    the multiplicity is 1.
    """
    if isinstance(L, ProductSemilattice):
        out: dict = {(0, 0): (1, ())}
        for f, a, b in zip(L.factors, p, q):
            part = _rank_profile(f, a, b)
            nxt: dict = {}
            for (x, y), (c, own) in out.items():
                for (dx, dy), (c2, own2) in part.items():
                    key = (x + dx, y + dy)
                    prev = nxt.get(key, (0, None))[0]
                    nxt[key] = (prev + c * c2, own + (own2,))
            out = nxt
        return out
    cache = L.__dict__.setdefault("_profile_cache", {})
    hit = cache.get((p, q))
    if hit is not None:
        return hit
    base = L.rank(L.meet(p, q))
    out = {}
    for u, (a, b) in L.interval_elements(p, q).items():
        vec = (L.rank(a) - base, L.rank(b) - base)
        out[vec] = (out.get(vec, (0, None))[0] + 1, u)
    cache[(p, q)] = out
    return out


def fractional_join(L, p, q) -> FractionalJoin:
    """Fractional join of ``p`` and ``q`` with exact normal-cone coefficients."""
    profile = _rank_profile(L, p, q)
    chain = maximal_extreme_chain(profile)
    sig = [Fraction(1)] + [_sigma_of_edge(chain[i], chain[i + 1]) for i in range(len(chain) - 1)] + [Fraction(0)]
    terms = []
    for i, vec in enumerate(chain):
        count, owner = profile[vec]
        if count != 1:
            raise SemilatticeError(f"r(.;p,q) is not injective at {vec}")
        coef = sig[i] - sig[i + 1]
        if coef <= 0:
            raise SemilatticeError("non-positive fractional join coefficient")
        terms.append((owner, coef))
    return FractionalJoin(tuple(terms))


# -- submodularity checks -----------------------------------------------------------

def _value(f, x):
    v = f(x) if callable(f) else f[x]
    return v


def _check_cap(count: int, cap: int):
    if count > cap:
        raise CapExceeded(f"{count} exceeds the enumeration cap {cap}")


def submodular_violation(L, f, cap: int = SIZE_CAP):
    """First pair ``(p, q)`` violating the fractional-join inequality, else ``None``."""
    elems = L.elements()
    _check_cap(len(elems), cap)
    for i, p in enumerate(elems):
        fp = _value(f, p)
        if fp == INF:
            continue
        for q in elems[i + 1:]:
            fq = _value(f, q)
            if fq == INF:
                continue
            rhs = _value(f, L.meet(p, q))
            if rhs == INF:
                return p, q
            for u, c in fractional_join(L, p, q).terms:
                fu = _value(f, u)
                if fu == INF:
                    return p, q
                rhs += c * fu
            if fp + fq < rhs:
                return p, q
    return None


def is_submodular(L, f, cap: int = SIZE_CAP) -> bool:
    return submodular_violation(L, f, cap) is None


def polar_formula_join(L, p, q) -> FractionalJoin:
    """1/2 ((p sqcup q) sqcup q) + 1/2 ((p sqcup q) sqcup p), merged."""
    ops = _polar_ops(L)
    _, pq = ops(p, q)
    _, left = ops(pq, q)
    _, right = ops(pq, p)
    if left == right:
        return FractionalJoin(((left, Fraction(1)),))
    return FractionalJoin(((left, Fraction(1, 2)), (right, Fraction(1, 2))))


def _polar_ops(L):
    if isinstance(L, ProductSemilattice):
        comps = [polar_ops_for(f) for f in L.factors]

        def ops(p, q):
            pairs = [op(a, b) for op, a, b in zip(comps, p, q)]
            return tuple(x for x, _ in pairs), tuple(y for _, y in pairs)

        return ops
    return polar_ops_for(L)


def _pairwise_violation(elements, f, ops):
    for i, x in enumerate(elements):
        fx = _value(f, x)
        if fx == INF:
            continue
        for y in elements[i:]:
            fy = _value(f, y)
            if fy == INF:
                continue
            lo, hi = ops(x, y)
            flo, fhi = _value(f, lo), _value(f, hi)
            if flo == INF or fhi == INF or fx + fy < flo + fhi:
                return x, y
    return None


def is_k_submodular(ks: Sequence[int], f, cap: int = SIZE_CAP) -> bool:
    """Check f(x)+f(y) >= f(x sqcap y)+f(x sqcup y) on S_k1 x ... x S_kn."""
    elements = list(itertools.product(*(range(k + 1) for k in ks)))
    _check_cap(len(elements), cap)

    def ops(x, y):
        return (tuple(sk_meet(a, b) for a, b in zip(x, y)), tuple(sk_join(a, b) for a, b in zip(x, y)))

    return _pairwise_violation(elements, f, ops) is None


def is_kl_submodular(kls: Sequence[tuple[int, int]], f, cap: int = SIZE_CAP) -> bool:
    """Same inequality on S_{k1,l1} x ... x S_{kn,ln}; points are tuples of (a, b) pairs."""
    elements = list(itertools.product(*(skl_elements(k, l) for k, l in kls)))
    _check_cap(len(elements), cap)

    def ops(x, y):
        pairs = [skl_pair_ops(a, b, k, l) for a, b, (k, l) in zip(x, y, kls)]
        return tuple(lo for lo, _ in pairs), tuple(hi for _, hi in pairs)

    return _pairwise_violation(elements, f, ops) is None


def polar_pairwise_violation(L, f):
    """Pairwise sqcap/sqcup inequality on a polar-family semilattice."""
    return _pairwise_violation(L.elements(), f, _polar_ops(L))


def brute_force_minimize(elements: Sequence, f, cap: int = SIZE_CAP):
    """Exact minimum over an explicit domain; first minimizer in the given order wins."""
    _check_cap(len(elements), cap)
    best, arg = INF, None
    for x in elements:
        v = _value(f, x)
        if arg is None or v < best:
            best, arg = v, x
    return arg, best


def parse_table(data: dict, size: int) -> list:
    values = [parse_rational(v) for v in data["values"]]
    if len(values) != size:
        raise SemilatticeError(f"table has {len(values)} values, expected {size}")
    return values
