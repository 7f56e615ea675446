"""Minimum-cost node-demand multiflow via steepest descent on potentials.

A potential places every node on a subdivided star whose rays are indexed
by the terminals; each ray vertex is ``(s, t)`` with ``t`` counted in
half-length steps, and the centre is ``O = (-1, 0)``.  All objective values
are handled in half units internally (``2 * omega`` is an integer).
"""

from __future__ import annotations

import itertools
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import kernels
from ._rational import INF, format_rational, parse_rational
from .flownet import Circulation, FlowNetwork, find_circulation, max_flow
from .graphcore import Graph

O = (-1, 0)
ENUM_CAP = 2_000_000_000


class MCMFError(ValueError):
    pass


class InfeasibleDemand(MCMFError):
    def __init__(self, terminal: int, capacity: Fraction, demand: int):
        super().__init__(f"terminal {terminal} can send at most {capacity} to the other terminals, demand is {demand}")
        self.terminal = terminal
        self.capacity = capacity
        self.demand = demand


class InternalError(RuntimeError):
    pass


# -- instances ---------------------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    cap: int
    cost: int


@dataclass(frozen=True)
class MultiflowInstance:
    n: int
    edges: tuple[Edge, ...]
    demand: dict  # terminal -> r(s)

    def __post_init__(self):
        if len(self.demand) < 2:
            raise MCMFError("at least two terminals are required")
        for e in self.edges:
            if not (0 <= e.u < self.n and 0 <= e.v < self.n) or e.u == e.v:
                raise MCMFError(f"bad edge ({e.u},{e.v})")
            if e.cap < 1 or e.cost < 1:
                raise MCMFError("capacities and costs must be positive integers")
        for s, r in self.demand.items():
            if not 0 <= s < self.n or r < 0:
                raise MCMFError(f"bad terminal {s} with demand {r}")
        if not Graph(self.n, [(e.u, e.v) for e in self.edges]).is_connected():
            raise MCMFError("network must be connected")

    @property
    def terminals(self) -> list[int]:
        return sorted(self.demand)

    @property
    def max_cost(self) -> int:
        return max((e.cost for e in self.edges), default=1)

    def truncation(self) -> int:
        return 2 * self.n * self.max_cost + 4

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "edges": [{"u": e.u, "v": e.v, "cap": e.cap, "cost": e.cost} for e in self.edges],
            "terminals": [{"node": s, "demand": self.demand[s]} for s in self.terminals],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MultiflowInstance":
        try:
            edges = tuple(Edge(int(e["u"]), int(e["v"]), int(e["cap"]), int(e["cost"])) for e in data["edges"])
            demand = {int(t["node"]): int(t["demand"]) for t in data["terminals"]}
            if len(demand) != len(data["terminals"]):
                raise MCMFError("duplicate terminal")
            return cls(int(data["n"]), edges, demand)
        except (KeyError, TypeError) as exc:
            raise MCMFError(f"malformed instance: {exc}") from exc


def random_instance(rng: random.Random, n: int, k: int, max_cap: int = 2, max_cost: int = 2, max_demand: int = 2, extra: Optional[int] = None) -> MultiflowInstance:
    """Connected random instance: a random spanning tree plus extra edges."""
    pairs = set()
    for v in range(1, n):
        pairs.add((rng.randrange(v), v))
    extra = rng.randint(0, n) if extra is None else extra
    for _ in range(extra):
        u, v = rng.sample(range(n), 2)
        pairs.add((min(u, v), max(u, v)))
    edges = tuple(Edge(u, v, rng.randint(1, max_cap), rng.randint(1, max_cost)) for u, v in sorted(pairs))
    terms = sorted(rng.sample(range(n), k))
    return MultiflowInstance(n, edges, {s: rng.randint(0, max_demand) for s in terms})


# -- the subdivided star ---------------------------------------------------------------

def hop(p, q) -> int:
    """Distance in half-length steps."""
    if p[1] == 0 or q[1] == 0 or p[0] == q[0]:
        return abs(p[1] - q[1])
    return p[1] + q[1]


def dist(p, q) -> Fraction:
    return Fraction(hop(p, q), 2)


def is_potential(inst: MultiflowInstance, p) -> bool:
    if len(p) != inst.n:
        return False
    for i, (s, t) in enumerate(p):
        if t < 0 or (t == 0) != (s == -1):
            return False
        if t > 0 and s not in inst.demand:
            return False
        if i in inst.demand and t > 0 and s != i:
            return False
    return True


def omega2(inst: MultiflowInstance, p) -> float | int:
    """Twice the dual objective (an integer), or INF off the potential set."""
    if not is_potential(inst, p):
        return INF
    val = -sum(r * p[s][1] for s, r in inst.demand.items())
    for e in inst.edges:
        val += e.cap * max(hop(p[e.u], p[e.v]) - 2 * e.cost, 0)
    return val


def omega(inst: MultiflowInstance, p):
    v = omega2(inst, p)
    return INF if v == INF else Fraction(v, 2)


def origin(inst: MultiflowInstance) -> tuple:
    return tuple([O] * inst.n)


def potential_to_json(p) -> list:
    return [["O", 0] if t == 0 else [s, t] for s, t in p]


def potential_from_json(data) -> tuple:
    out = []
    for s, t in data:
        out.append(O if s == "O" or t == 0 else (int(s), int(t)))
    return tuple(out)


def local_neighbourhood(inst: MultiflowInstance, p, side: str) -> list[tuple]:
    """Potentials in the principal ideal (side='ideal') or filter of p."""
    opts = []
    for i, (s, t) in enumerate(p):
        here = [(s, t)]
        black = t % 2 == 0
        if (side == "filter") == black:
            if t == 0:
                rays = [i] if i in inst.demand else inst.terminals
                here += [(r, 1) for r in rays]
            else:
                here += [O if t == 1 else (s, t - 1), (s, t + 1)]
        opts.append(here)
    return [q for q in itertools.product(*opts) if is_potential(inst, q)]


# -- the network D_p ----------------------------------------------------------------

@dataclass
class DpNetwork:
    net: FlowNetwork
    nodes: list  # node id -> (i, copy, sign)
    index: dict  # (i, copy, sign) -> node id
    copies: dict  # i -> list of copy labels
    support_edges: list  # (kind, (i, c), (j, c'), edge index or None)
    arc_of: list  # support edge -> (arc e+, arc e-)
    terminal_arc: dict  # s -> arc id
    V_I: frozenset
    V_F: frozenset

    def node_set(self, i: int) -> list[int]:
        return [self.index[(i, c, sg)] for c in self.copies[i] for sg in "+-"]


def _copies(inst: MultiflowInstance, p, i: int) -> list:
    s, t = p[i]
    if i in inst.demand:
        return [i, "O"]
    if t == 0:
        return list(inst.terminals)
    return [s, "O"]


def _ray_copy(inst: MultiflowInstance, p, j: int, ray: int):
    """Copy of a node nearer to O used by an edge coming in along ``ray``."""
    if j in inst.demand and p[j][1] == 0 and ray != j:
        return "O"
    return ray


def edge_class(inst: MultiflowInstance, p, e: Edge) -> str:
    d, a2 = hop(p[e.u], p[e.v]), 2 * e.cost
    return "E=" if d == a2 else ("E>" if d > a2 else "slack")


def build_dp(inst: MultiflowInstance, p) -> DpNetwork:
    if not is_potential(inst, p):
        raise MCMFError("not a potential")
    copies = {i: _copies(inst, p, i) for i in range(inst.n)}
    nodes, index = [], {}
    for i in range(inst.n):
        for c in copies[i]:
            for sg in "+-":
                index[(i, c, sg)] = len(nodes)
                nodes.append((i, c, sg))
    net = FlowNetwork(len(nodes))
    support, arc_of = [], []

    def node(i, c, sg):
        return index[(i, c, sg)]

    for i in range(inst.n):
        for c1, c2 in itertools.combinations(copies[i], 2):
            k = len(support)
            support.append(("E-", (i, c1), (i, c2), None))
            a = net.add(node(i, c1, "+"), node(i, c2, "-"), 0, INF, ("E-", k, "+"))
            b = net.add(node(i, c2, "+"), node(i, c1, "-"), 0, INF, ("E-", k, "-"))
            arc_of.append((a, b))
    for idx, e in enumerate(inst.edges):
        cls = edge_class(inst, p, e)
        if cls == "slack":
            continue
        i, j = e.u, e.v
        pi, pj = p[i], p[j]
        if pi[1] == 0 or pj[1] == 0 or pi[0] == pj[0]:
            far, near = (i, j) if pi[1] > pj[1] else (j, i)
            ray = p[far][0]
            ends = ((far, "O"), (near, _ray_copy(inst, p, near, ray)))
        else:
            ends = ((i, "O"), (j, "O"))
        (u, cu), (v, cv) = ends
        lo = 0 if cls == "E=" else e.cap
        k = len(support)
        support.append((cls, (u, cu), (v, cv), idx))
        a = net.add(node(u, cu, "-"), node(v, cv, "+"), lo, e.cap, (cls, k, "+"))
        b = net.add(node(v, cv, "-"), node(u, cu, "+"), lo, e.cap, (cls, k, "-"))
        arc_of.append((a, b))
    terminal_arc = {}
    for s, r in inst.demand.items():
        hi = INF if p[s][1] == 0 else r
        terminal_arc[s] = net.add(node(s, s, "-"), node(s, s, "+"), r, hi, ("term", s))
    V_I = frozenset(x for x, (i, _, _) in enumerate(nodes) if p[i][1] % 2 == 1)
    V_F = frozenset(x for x, (i, _, _) in enumerate(nodes) if p[i][1] % 2 == 0)
    return DpNetwork(net, nodes, index, copies, support, arc_of, terminal_arc, V_I, V_F)


# -- supports and their decomposition ---------------------------------------------------

@dataclass(frozen=True)
class Support:
    """psi on the support edges of D_p (E=, E>, E-), in exact rationals."""

    dp: DpNetwork
    values: tuple

    def terminal_outflow(self, inst: MultiflowInstance) -> dict:
        """-psi(delta(s)) for every terminal node s."""
        out = {}
        for s in inst.demand:
            tot = Fraction(0)
            for (kind, a, b, _), v in zip(self.dp.support_edges, self.values):
                if a == (s, s) or b == (s, s):
                    tot += v
            out[s] = -tot
        return out


def recover_support(dp: DpNetwork, circ: Circulation) -> Support:
    if not circ.feasible_in(dp.net):
        raise MCMFError("circulation is infeasible in D_p")
    vals = []
    for (kind, _, _, _), (a, b) in zip(dp.support_edges, dp.arc_of):
        half = (circ.flow[a] + circ.flow[b]) / 2
        vals.append(-half if kind == "E-" else half)
    return Support(dp, tuple(vals))


def p_feasible_violations(inst: MultiflowInstance, p, psi: Support) -> list[str]:
    out = []
    incident = defaultdict(Fraction)
    for (kind, a, b, idx), v in zip(psi.dp.support_edges, psi.values):
        if kind == "E=" and not 0 <= v <= inst.edges[idx].cap:
            out.append(f"capacity bound broken on edge {idx}")
        if kind == "E>" and v != inst.edges[idx].cap:
            out.append(f"tight edge {idx} not saturated")
        if kind == "E-" and v > 0:
            out.append(f"link edge at node {a[0]} is positive")
        incident[a] += v
        incident[b] += v
    for i in range(inst.n):
        for c in psi.dp.copies[i]:
            val = incident[(i, c)]
            if i in inst.demand and c == i:
                r = inst.demand[i]
                if p[i][1] == 0 and -val < r:
                    out.append(f"terminal {i} below demand")
                if p[i][1] != 0 and -val != r:
                    out.append(f"terminal {i} off its demand")
            elif val != 0:
                out.append(f"conservation broken at copy {(i, c)}")
    return out


@dataclass(frozen=True)
class Multiflow:
    paths: tuple  # ((node, ...), value)

    def loads(self, inst: MultiflowInstance) -> list[Fraction]:
        where = {}
        for k, e in enumerate(inst.edges):
            where[(e.u, e.v)] = where[(e.v, e.u)] = k
        load = [Fraction(0)] * len(inst.edges)
        for nodes, val in self.paths:
            for a, b in zip(nodes, nodes[1:]):
                load[where[(a, b)]] += val
        return load

    def cost(self, inst: MultiflowInstance) -> Fraction:
        return sum((inst.edges[k].cost * f for k, f in enumerate(self.loads(inst))), Fraction(0))

    def served(self, inst: MultiflowInstance) -> dict:
        out = {s: Fraction(0) for s in inst.demand}
        for nodes, val in self.paths:
            out[nodes[0]] += val
            out[nodes[-1]] += val
        return out

    def to_json(self) -> list:
        return [{"nodes": list(nodes), "value": format_rational(v)} for nodes, v in self.paths]

    @classmethod
    def from_json(cls, data) -> "Multiflow":
        return cls(tuple((tuple(int(x) for x in d["nodes"]), parse_rational(d["value"])) for d in data))


def decompose_support(inst: MultiflowInstance, p, psi: Support) -> Multiflow:
    """Split psi into alternating walks of value 1/2 and contract the links.

    Works in half units; every walk starts at a terminal through a link edge
    and stops at the first terminal reached through a link edge that still
    has unused outflow.  Walks follow geodesics of the star, so they end.
    """
    dp = psi.dp
    units = []
    for v in psi.values:
        h = 2 * v
        if h.denominator != 1:
            raise MCMFError("support is not half-integral")
        units.append(int(abs(h)))
    links = defaultdict(list)  # copy -> [(support idx, other copy)]
    flows = defaultdict(list)
    for k, (kind, a, b, _) in enumerate(dp.support_edges):
        bucket = links if kind == "E-" else flows
        bucket[a].append((k, b))
        bucket[b].append((k, a))
    out = {s: int(2 * v) for s, v in psi.terminal_outflow(inst).items()}

    def take(bucket, at):
        for k, other in bucket[at]:
            if units[k] > 0:
                units[k] -= 1
                return other
        raise InternalError(f"decomposition stuck at copy {at}")

    paths = defaultdict(int)
    limit = len(dp.support_edges) + 1
    for s in inst.terminals:
        while out[s] > 0:
            out[s] -= 1
            at = take(links, (s, s))
            seq = [s]
            for _ in range(limit):
                at = take(flows, at)
                seq.append(at[0])
                at = take(links, at)
                t = at[0]
                if at == (t, t) and t != s and out.get(t, 0) > 0:
                    out[t] -= 1
                    break
            else:
                raise InternalError("walk did not terminate")
            paths[tuple(seq)] += 1
    if any(units) or any(out.values()):
        raise InternalError("support not fully decomposed")
    return Multiflow(tuple((path, Fraction(c, 2)) for path, c in sorted(paths.items())))


# -- steepest directions -----------------------------------------------------------------

@dataclass(frozen=True)
class Optimal:
    circulation: Circulation
    dp: DpNetwork


@dataclass(frozen=True)
class ImprovedPotential:
    potential: tuple
    side: str  # "ideal" or "filter"
    cut: frozenset
    kappa: Fraction
    dp: DpNetwork


def move_by_cut(inst: MultiflowInstance, p, dp: DpNetwork, X: frozenset) -> tuple:
    """p^X for a movable cut X; raises if X is not movable."""
    q = list(p)
    for i in range(inst.n):
        part = {dp.nodes[x] for x in X if dp.nodes[x][0] == i}
        if not part:
            continue
        plus = [c for (_, c, sg) in part if sg == "+"]
        minus = {c for (_, c, sg) in part if sg == "-"}
        if len(plus) != 1 or minus != set(dp.copies[i]) - {plus[0]}:
            raise InternalError(f"cut is not movable at node {i}")
        c = plus[0]
        s, t = p[i]
        if c == "O":
            if t == 0:
                raise InternalError(f"cut moves node {i} past the centre")
            q[i] = O if t == 1 else (s, t - 1)
        else:
            q[i] = (c, 1) if t == 0 else (s, t + 1)
    return tuple(q)


def steepest_direction(inst: MultiflowInstance, p) -> Optimal | ImprovedPotential:
    dp = build_dp(inst, p)
    res = find_circulation(dp.net)
    if isinstance(res, Circulation):
        return Optimal(res, dp)
    X = res.nodes
    cands = []
    for side, part in (("filter", X & dp.V_F), ("ideal", X & dp.V_I)):
        q = move_by_cut(inst, p, dp, part)
        cands.append((omega2(inst, q), 0 if side == "filter" else 1, q, side))
    val, _, q, side = min(cands, key=lambda c: (c[0], c[1]))
    if not val < omega2(inst, p):
        raise InternalError("steepest direction does not decrease omega")
    return ImprovedPotential(q, side, X, res.kappa, dp)


# -- the solver -----------------------------------------------------------------------------

def _undirected_net(inst: MultiflowInstance, caps) -> FlowNetwork:
    net = FlowNetwork(inst.n + 1)
    for e, c in zip(inst.edges, caps):
        if c > 0:
            net.add(e.u, e.v, 0, c)
            net.add(e.v, e.u, 0, c)
    return net


def terminal_capacities(inst: MultiflowInstance, caps=None) -> dict:
    """Max flow from each terminal to the other terminals under ``caps``."""
    caps = [e.cap for e in inst.edges] if caps is None else caps
    out = {}
    for s in inst.terminals:
        net = _undirected_net(inst, caps)
        sink = inst.n
        for t in inst.terminals:
            if t != s:
                net.add(t, sink, 0, INF)
        out[s] = max_flow(net, s, sink).value
    return out


def check_feasible(inst: MultiflowInstance) -> None:
    for s, cap in terminal_capacities(inst).items():
        if cap < inst.demand[s]:
            raise InfeasibleDemand(s, cap, inst.demand[s])


@dataclass(frozen=True)
class MCMFResult:
    multiflow: Multiflow
    potential: tuple
    cost: Fraction
    iterations: int
    trace: tuple
    support: Support = field(repr=False)

    def to_json(self) -> dict:
        return {
            "cost": format_rational(self.cost),
            "paths": self.multiflow.to_json(),
            "potential": potential_to_json(self.potential),
            "iterations": self.iterations,
        }


def solve_mcmf(inst: MultiflowInstance, start=None) -> MCMFResult:
    """Steepest descent from p = (O, ..., O); one circulation problem per step."""
    check_feasible(inst)
    p = origin(inst) if start is None else tuple(start)
    bound = inst.truncation()
    trace = [p]
    while True:
        step = steepest_direction(inst, p)
        if isinstance(step, Optimal):
            break
        p = step.potential
        if max(t for _, t in p) >= bound:
            raise InternalError("potential reached the truncation boundary")
        trace.append(p)
    psi = recover_support(step.dp, step.circulation)
    flow = decompose_support(inst, p, psi)
    cost = flow.cost(inst)
    if cost != -omega(inst, p):
        raise InternalError(f"primal cost {cost} differs from dual value {-omega(inst, p)}")
    return MCMFResult(flow, p, cost, len(trace), tuple(trace), psi)


# -- certification -------------------------------------------------------------------------

@dataclass(frozen=True)
class OptimalityReport:
    violations: tuple
    primal_cost: Fraction
    dual_value: Fraction | float

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_optimality(inst: MultiflowInstance, f: Multiflow, p) -> OptimalityReport:
    """Feasibility of f, complementary slackness with p, and cost = -omega(p)."""
    v = []
    if not is_potential(inst, p):
        v.append("potential: not a valid potential")
        return OptimalityReport(tuple(v), f.cost(inst), INF)
    adj = {(e.u, e.v) for e in inst.edges} | {(e.v, e.u) for e in inst.edges}
    for nodes, val in f.paths:
        if val <= 0:
            v.append(f"multiflow: non-positive value on path {nodes}")
        if len(nodes) < 2 or nodes[0] == nodes[-1] or nodes[0] not in inst.demand or nodes[-1] not in inst.demand:
            v.append(f"multiflow: {nodes} is not an S-path")
            continue
        if len(set(nodes)) != len(nodes) or any((a, b) not in adj for a, b in zip(nodes, nodes[1:])):
            v.append(f"multiflow: {nodes} is not a simple path of the network")
            continue
        walk = sum(hop(p[a], p[b]) for a, b in zip(nodes, nodes[1:]))
        if walk != hop(p[nodes[0]], p[nodes[-1]]):
            v.append(f"slackness (geodesic paths): {nodes} is not a geodesic")
    if v:
        return OptimalityReport(tuple(v), Fraction(0), omega(inst, p))
    loads = f.loads(inst)
    for k, (e, load) in enumerate(zip(inst.edges, loads)):
        if load > e.cap:
            v.append(f"multiflow: edge {k} over capacity")
        cls = edge_class(inst, p, e)
        if cls == "slack" and load != 0:
            v.append(f"slackness (slack edges carry no flow): edge {k}")
        if cls == "E>" and load != e.cap:
            v.append(f"slackness (over-length edges are saturated): edge {k}")
    served = f.served(inst)
    for s, r in inst.demand.items():
        if served[s] < r:
            v.append(f"multiflow: terminal {s} receives {served[s]} < {r}")
        if p[s][1] != 0 and served[s] != r:
            v.append(f"slackness (exact demand off the centre): terminal {s}")
    cost = f.cost(inst)
    dual = omega(inst, p)
    if cost != -dual:
        v.append(f"duality: primal cost {cost} != -omega(p) = {-dual}")
    return OptimalityReport(tuple(v), cost, dual)


def covers_cuts(inst: MultiflowInstance, loads) -> bool:
    """Every terminal can route its demand to the others within ``loads``."""
    return all(cap >= inst.demand[s] for s, cap in terminal_capacities(inst, loads).items())


# -- dual enumeration oracles ---------------------------------------------------------------

@dataclass(frozen=True)
class DualOptimum:
    omega: Fraction
    argmin: tuple
    count: int
    min_maxhop: int
    radius: int


def _candidates(inst: MultiflowInstance, radius: int):
    cand = []
    for i in range(inst.n):
        if i in inst.demand:
            cand.append([O] + [(i, t) for t in range(1, radius + 1)])
        else:
            cand.append([O] + [(s, t) for s in inst.terminals for t in range(1, radius + 1)])
    return cand


def dual_brute_force(inst: MultiflowInstance, radius: Optional[int] = None, cap: int = ENUM_CAP) -> DualOptimum:
    """Exact minimum of omega over potentials with every coordinate within
    ``radius`` half-steps of O (default 2nA)."""
    radius = 2 * inst.n * inst.max_cost if radius is None else radius
    cand = _candidates(inst, radius)
    size = 1
    for c in cand:
        size *= len(c)
    if size > cap:
        raise MCMFError(f"enumeration of {size} potentials exceeds the cap {cap}")
    width = max(len(c) for c in cand)
    R = np.zeros((inst.n, width), dtype=np.int64)
    T = np.zeros((inst.n, width), dtype=np.int64)
    for i, c in enumerate(cand):
        for j, (s, t) in enumerate(c):
            R[i, j], T[i, j] = s, t
    unary = [-inst.demand.get(i, 0) for i in range(inst.n)]
    ei = [e.u for e in inst.edges]
    ej = [e.v for e in inst.edges]
    ec = [e.cap for e in inst.edges]
    ea = [2 * e.cost for e in inst.edges]
    best, count, min_hop, arg = kernels.potential_ball_min(R, T, [len(c) for c in cand], unary, ei, ej, ec, ea)
    p = tuple(cand[i][j] for i, j in enumerate(arg))
    return DualOptimum(Fraction(int(best), 2), p, int(count), int(min_hop), radius)


def dual_certified(inst: MultiflowInstance, start_radius: int = 2, cap: int = ENUM_CAP) -> DualOptimum:
    """Global minimum of omega, certified by local optimality.

    The radius doubles until some minimizer of the ball lies strictly inside
    it; its ideal and filter are then inside the ball, so it is a local and
    hence (by L-convexity) a global minimizer.  ``min_maxhop`` is then the
    exact distance from (O, ..., O) to the set of minimizers.
    """
    radius = max(1, start_radius)
    while True:
        res = dual_brute_force(inst, radius, cap)
        if res.min_maxhop <= radius - 1:
            return res
        radius *= 2


def omega_table(inst: MultiflowInstance, radius: int):
    """omega on the truncated star grid of the given radius, for L-convexity checks."""
    from .gridconvex import GridFunction, TreeGrid

    terms = inst.terminals
    verts = [O] + [(s, t) for s in terms for t in range(1, radius + 1)]
    vid = {v: i for i, v in enumerate(verts)}
    edges = []
    for s in terms:
        prev = O
        for t in range(1, radius + 1):
            edges.append((vid[prev], vid[(s, t)]))
            prev = (s, t)
    grid = TreeGrid(Graph(len(verts), edges), inst.n)
    # potentials form a box of subtrees; everything else is +infinity
    box = [[vid[v] for v in c] for c in _candidates(inst, radius)]
    table = {}
    for x in itertools.product(*box):
        table[x] = omega(inst, tuple(verts[v] for v in x))
    return grid, GridFunction(grid, table), verts
