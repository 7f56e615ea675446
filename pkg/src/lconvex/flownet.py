"""Exact max-flow, circulations with lower bounds, and violating cuts."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from ._rational import INF, format_rational, parse_rational


class FlowError(ValueError):
    pass


@dataclass(frozen=True)
class Arc:
    u: int
    v: int
    lo: Fraction
    hi: Fraction | float
    tag: object = None


class FlowNetwork:
    """Directed network on nodes ``0..n-1``; parallel arcs are kept distinct."""

    def __init__(self, n: int, arcs: Iterable = ()):
        self.n = n
        self.arcs: list[Arc] = []
        for a in arcs:
            if isinstance(a, Arc):
                self.add(a.u, a.v, a.lo, a.hi, a.tag)
            else:
                self.add(*a)

    def add(self, u: int, v: int, lo=0, hi=INF, tag=None) -> int:
        lo = parse_rational(lo)
        hi = parse_rational(hi)
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise FlowError(f"arc ({u},{v}) out of range")
        if lo == INF or lo < 0 or hi < lo:
            raise FlowError(f"invalid capacities [{lo}, {hi}] on ({u},{v})")
        self.arcs.append(Arc(u, v, lo, hi, tag))
        return len(self.arcs) - 1

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "edges": [{"u": a.u, "v": a.v, "lo": format_rational(a.lo), "hi": format_rational(a.hi)} for a in self.arcs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FlowNetwork":
        net = cls(int(data["n"]))
        for e in data["edges"]:
            net.add(int(e["u"]), int(e["v"]), e.get("lo", "0"), e.get("hi", "inf"))
        return net


class _Residual:
    """Dinic's algorithm on a residual graph with exact capacities."""

    def __init__(self, n: int):
        self.n = n
        self.head: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list = []

    def add(self, u: int, v: int, cap) -> int:
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(cap)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(Fraction(0))
        return len(self.to) - 2

    def _levels(self, s: int, t: int):
        level = [-1] * self.n
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.head[u]:
                if self.cap[e] > 0 and level[self.to[e]] < 0:
                    level[self.to[e]] = level[u] + 1
                    queue.append(self.to[e])
        return level if level[t] >= 0 else None

    def _push(self, u: int, t: int, limit, level, it):
        if u == t:
            return limit
        while it[u] < len(self.head[u]):
            e = self.head[u][it[u]]
            v = self.to[e]
            if self.cap[e] > 0 and level[v] == level[u] + 1:
                pushed = self._push(v, t, min(limit, self.cap[e]), level, it)
                if pushed > 0:
                    if self.cap[e] != INF:
                        self.cap[e] -= pushed
                    if self.cap[e ^ 1] != INF:
                        self.cap[e ^ 1] += pushed
                    return pushed
            it[u] += 1
        return Fraction(0)

    def max_flow(self, s: int, t: int):
        total = Fraction(0)
        if s == t:
            return total
        while True:
            level = self._levels(s, t)
            if level is None:
                return total
            it = [0] * self.n
            while True:
                pushed = self._push(s, t, INF, level, it)
                if pushed == INF:
                    return INF
                if pushed <= 0:
                    break
                total += pushed

    def reachable(self, s: int) -> set[int]:
        seen = {s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.head[u]:
                if self.cap[e] > 0 and self.to[e] not in seen:
                    seen.add(self.to[e])
                    queue.append(self.to[e])
        return seen


@dataclass(frozen=True)
class MaxFlowResult:
    value: Fraction | float
    flow: tuple
    cut: frozenset  # source side of a minimum cut


def max_flow(net: FlowNetwork, s: int, t: int) -> MaxFlowResult:
    """Maximum s-t flow (lower capacities must be zero) with a certifying min cut."""
    if any(a.lo != 0 for a in net.arcs):
        raise FlowError("max_flow expects zero lower capacities")
    res = _Residual(net.n)
    ids = [res.add(a.u, a.v, a.hi) for a in net.arcs]
    value = res.max_flow(s, t)
    if value == INF:
        return MaxFlowResult(INF, (), frozenset())
    flow = tuple(res.cap[e ^ 1] for e in ids)
    return MaxFlowResult(value, flow, frozenset(res.reachable(s)))


def kappa(net: FlowNetwork, X: Iterable[int]):
    """c_lo(arcs entering X) - c_hi(arcs leaving X); -inf if an infinite arc leaves X."""
    X = set(X)
    val = Fraction(0)
    for a in net.arcs:
        if a.u not in X and a.v in X:
            val += a.lo
        elif a.u in X and a.v not in X:
            if a.hi == INF:
                return -INF
            val -= a.hi
    return val


@dataclass(frozen=True)
class Circulation:
    flow: tuple

    def feasible_in(self, net: FlowNetwork) -> bool:
        bal = [Fraction(0)] * net.n
        for a, f in zip(net.arcs, self.flow):
            if not a.lo <= f <= a.hi:
                return False
            bal[a.u] -= f
            bal[a.v] += f
        return all(b == 0 for b in bal)


@dataclass(frozen=True)
class ViolatingCut:
    nodes: frozenset
    kappa: Fraction


def find_circulation(net: FlowNetwork) -> Circulation | ViolatingCut:
    """A feasible circulation, or the minimal node set maximizing kappa (> 0).

    Lower bounds are moved into node excesses; one max-flow from a super
    source saturating all positive excesses decides feasibility.  Otherwise
    the residual-reachable set from the super source is the minimal
    minimum cut, which corresponds to the minimal maximizer of kappa.
    """
    n = net.n
    S, T = n, n + 1
    res = _Residual(n + 2)
    excess = [Fraction(0)] * n
    ids = []
    for a in net.arcs:
        ids.append(res.add(a.u, a.v, a.hi - a.lo if a.hi != INF else INF))
        excess[a.v] += a.lo
        excess[a.u] -= a.lo
    need = Fraction(0)
    for v in range(n):
        if excess[v] > 0:
            res.add(S, v, excess[v])
            need += excess[v]
        elif excess[v] < 0:
            res.add(v, T, -excess[v])
    value = res.max_flow(S, T)
    if value == need:
        return Circulation(tuple(a.lo + res.cap[e ^ 1] for a, e in zip(net.arcs, ids)))
    X = frozenset(res.reachable(S) - {S})
    return ViolatingCut(X, need - value)


def max_violation_brute_force(net: FlowNetwork) -> tuple:
    """(max kappa, minimal maximizer) by enumerating all node subsets."""
    values = {frozenset(X): kappa(net, X) for r in range(net.n + 1) for X in itertools.combinations(range(net.n), r)}
    best = max(values.values())
    maximizers = [X for X, k in values.items() if k == best]
    inter = frozenset.intersection(*maximizers)
    if inter not in maximizers:
        raise FlowError("maximizers of kappa are not closed under intersection")
    return best, inter
