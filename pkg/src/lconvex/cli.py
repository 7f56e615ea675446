"""Command-line entry point.

Every solve prints exactly one report (JSON by default).  Exit status: 0 when
the command succeeded and every requested verification passed, 1 when the
solver proved the instance infeasible or rejected it, 2 on a verification
failure, 3 on malformed input.

The environment variable ``LCONVEX_ENUM_CAP`` overrides the enumeration caps
used by the brute-force paths.
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import gridconvex, mcmf, semilattice, zeroext
from ._rational import format_rational, is_half_integral
from .graphcore import (
    GraphError,
    diameter,
    cartesian_product,
    complete_graph,
    cycle_graph,
    hypercube,
    path_graph,
    random_tree,
    star_graph,
)

OK, REJECTED, VERIFY_FAILED, INPUT_ERROR = 0, 1, 2, 3

INPUT_ERRORS = (
    ValueError,
    KeyError,
    TypeError,
    GraphError,
    mcmf.MCMFError,
    zeroext.ZeroExtError,
    gridconvex.GridError,
    semilattice.SemilatticeError,
)


class InputError(Exception):
    pass


def enum_cap(default: int) -> int:
    raw = os.environ.get("LCONVEX_ENUM_CAP")
    if raw is None:
        return default
    try:
        cap = int(raw)
    except ValueError as exc:
        raise InputError(f"LCONVEX_ENUM_CAP must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise InputError("LCONVEX_ENUM_CAP must be positive")
    return cap


def canonical(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def digest(data) -> str:
    return hashlib.sha256(canonical(data).encode()).hexdigest()


@dataclass
class RunReport:
    command: str
    instance_digest: Optional[str] = None
    result: dict = field(default_factory=dict)
    verifications: list = field(default_factory=list)
    seconds: float = 0.0
    status: int = OK

    def check(self, name: str, anchor: str, passed: bool, detail=None):
        entry = {"name": name, "anchor": anchor, "passed": bool(passed)}
        if detail:
            entry["detail"] = detail
        self.verifications.append(entry)
        if not passed and self.status == OK:
            self.status = VERIFY_FAILED

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "instance_digest": self.instance_digest,
            "result": self.result,
            "verifications": self.verifications,
            "timing": {"seconds": round(self.seconds, 6)},
            "status": self.status,
        }

    def to_text(self) -> str:
        lines = [f"command: {self.command}", f"status: {self.status}"]
        if self.instance_digest:
            lines.append(f"instance: sha256 {self.instance_digest[:16]}")
        for key, value in self.result.items():
            lines.append(f"{key}: {value if isinstance(value, (str, int, bool)) else canonical(value)}")
        for v in self.verifications:
            mark = "ok" if v["passed"] else "FAILED"
            tail = f" ({v['detail']})" if "detail" in v else ""
            lines.append(f"verify {v['name']} [{v['anchor']}]: {mark}{tail}")
        lines.append(f"time: {self.seconds:.3f}s")
        return "\n".join(lines)


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


# -- mcmf ---------------------------------------------------------------------------

def _verify_mcmf_solution(inst, payload: dict, report: RunReport):
    """Re-validate an emitted solution from its JSON form alone."""
    flow = mcmf.Multiflow.from_json(payload["paths"])
    p = mcmf.potential_from_json(payload["potential"])
    opt = mcmf.verify_optimality(inst, flow, p)
    report.check("optimality", "complementary slackness and duality", opt.ok, list(opt.violations) or None)
    halves = all(is_half_integral(v) for _, v in flow.paths) and all(is_half_integral(x) for x in flow.loads(inst))
    report.check("half-integrality", "path values and edge loads in (1/2)Z", halves)
    report.check("cost", "reported cost equals path cost", format_rational(flow.cost(inst)) == payload["cost"])


def cmd_mcmf_solve(args, report: RunReport):
    data = load_json(args.file)
    inst = mcmf.MultiflowInstance.from_json(data)
    report.instance_digest = digest(inst.to_json())
    try:
        res = mcmf.solve_mcmf(inst)
    except mcmf.InfeasibleDemand as exc:
        report.status = REJECTED
        report.result = {
            "infeasible": True,
            "terminal": exc.terminal,
            "capacity": format_rational(exc.capacity),
            "demand": exc.demand,
            "reason": str(exc),
        }
        return
    report.result = res.to_json()
    if args.verify:
        _verify_mcmf_solution(inst, report.result, report)
    if args.dual_brute is not None:
        dual = mcmf.dual_brute_force(inst, args.dual_brute, cap=enum_cap(mcmf.ENUM_CAP))
        report.result["dual_enumeration"] = {"radius": args.dual_brute, "omega": format_rational(dual.omega)}
        report.check(
            "dual enumeration",
            f"cost = -min omega over potentials of radius <= {args.dual_brute}",
            res.cost == -dual.omega,
            None if res.cost == -dual.omega else f"-omega = {format_rational(-dual.omega)}",
        )


# -- zeroext ----------------------------------------------------------------------------

def cmd_zeroext_solve(args, report: RunReport):
    inst = zeroext.ZeroExtInstance.from_json(load_json(args.file))
    report.instance_digest = digest(inst.to_json())
    cap = enum_cap(zeroext.SEARCH_CAP)
    if args.brute:
        x, val = zeroext.brute_force_solve(inst, cap)
        report.result = {"method": "brute force", "argmin": list(x), "value": format_rational(val)}
        return
    try:
        res = zeroext.sda_solve(inst, cap=cap)
    except zeroext.Rejected as exc:
        report.status = REJECTED
        report.result = {"rejected": True, "reason": exc.reason}
        return
    report.result = {"method": "steepest descent", **res.to_json()}
    if args.verify:
        _, best = zeroext.brute_force_solve(inst, cap)
        report.check("optimum", "equals exhaustive search", best == res.value, None if best == res.value else format_rational(best))
        bound = diameter(inst.graph) + 2
        report.check("iterations", "at most diameter + 2", res.iterations <= bound, f"{res.iterations} <= {bound}")


# -- lconvex verify ---------------------------------------------------------------------------

def cmd_lconvex_verify(args, report: RunReport):
    data = load_json(args.file)
    g = gridconvex.GridFunction.from_json(data)
    grid = g.grid
    report.instance_digest = digest(g.to_json())
    closed = gridconvex.midpoint_closure_violation(grid, g.dom()) is None
    report.result = {"points": len(g.dom()), "midpoint_closed": closed}
    if not closed:
        report.result["lconvex"] = False
        report.status = REJECTED
        report.result["reason"] = "effective domain is not closed under discrete midpoints"
        return
    midpoint = gridconvex.is_lconvex(grid, g)
    report.result["lconvex"] = midpoint
    local = gridconvex.is_locally_submodular_and_chain_connected(grid, g)
    report.check("characterizations agree", "midpoint inequality vs local submodularity + chain connectivity", midpoint == local)
    if midpoint:
        ok = all(
            gridconvex.localization(grid, g, x, side).is_submodular()
            for x in g.dom()
            for side in ("filter", "ideal")
        )
        report.check("localizations", "every localization is k- or (k,l)-submodular", ok)
        if args.sda:
            start = g.dom()[0]
            x, trace = gridconvex.sda_minimize(grid, g, start)
            best, args_ = gridconvex.brute_force_argmin(g.dom(), g)
            dd = min(grid.d_delta(start, y) for y in args_)
            report.result["sda"] = {"argmin": list(x), "value": format_rational(g(x)), "iterations": len(trace)}
            report.check("sda optimum", "local optimality implies global", g(x) == best)
            report.check("sda iterations", "iterations <= d_delta(start, argmin set) + 2", len(trace) <= dd + 2, f"{len(trace)} <= {dd + 2}")


# -- semilattice check ---------------------------------------------------------------------------

def cmd_semilattice_check(args, report: RunReport):
    data = load_json(args.file)
    poset = semilattice.FinitePoset.from_json(data)
    report.instance_digest = digest(data)
    modular = semilattice.is_modular_semilattice(poset)
    report.result = {"elements": poset.size, "modular_semilattice": modular}
    if not modular:
        report.status = REJECTED
        report.result["reason"] = "not a modular semilattice"
        return
    L = semilattice.FiniteSemilattice(poset.size, poset.hasse)
    coeff_ok = True
    for p in range(L.size):
        for q in range(p + 1, L.size):
            fj = semilattice.fractional_join(L, p, q)
            if fj.total() != 1 or any(c <= 0 for _, c in fj.terms):
                coeff_ok = False
    report.check("fractional join", "coefficients positive and summing to 1", coeff_ok)
    if L.size <= 20:
        square = semilattice.ProductSemilattice([L, L])
        report.check("distance", "d is submodular on L x L", semilattice.is_submodular(square, lambda x: L.distance(*x)))
    if "values" in data:
        values = semilattice.parse_table(data, L.size)
        report.result["submodular"] = semilattice.is_submodular(L, values)


# -- generation -------------------------------------------------------------------------------------

GRAPHS = {
    "P4": lambda: path_graph(4),
    "K13": lambda: star_graph(3),
    "C4": lambda: cycle_graph(4),
    "P3xP3": lambda: cartesian_product(path_graph(3), path_graph(3)),
    "Q3": lambda: hypercube(3),
    "K3": lambda: complete_graph(3),
    "K4": lambda: complete_graph(4),
}


def generate(kind: str, seed: int, n: Optional[int] = None, k: Optional[int] = None, graph: Optional[str] = None) -> dict:
    """Deterministic instance for ``kind`` in {mcmf, zeroext, gridfn, poset}."""
    if not 0 <= seed < 2 ** 64:
        raise InputError("seed must be a 64-bit unsigned integer")
    rng = random.Random(seed)
    if kind == "mcmf":
        n = 4 if n is None else n
        k = min(3, n) if k is None else k
        if not 2 <= k <= n <= 8:
            raise InputError("mcmf needs 2 <= k <= n <= 8")
        return mcmf.random_instance(rng, n, k).to_json()
    if kind == "zeroext":
        name = graph or "C4"
        if name not in GRAPHS:
            raise InputError(f"unknown graph {name!r}; choose from {sorted(GRAPHS)}")
        n = 2 if n is None else n
        if not 1 <= n <= 4:
            raise InputError("zeroext needs 1 <= n <= 4")
        return zeroext.random_instance(rng, GRAPHS[name](), n).to_json()
    if kind == "gridfn":
        n = 2 if n is None else n
        size = 5 if k is None else k
        if not (1 <= n <= 2 and 2 <= size <= 9):
            raise InputError("gridfn needs n in {1, 2} and a tree of 2..9 vertices (--k)")
        grid = gridconvex.TreeGrid(random_tree(size, rng), n)
        tree = grid.base
        anchors = [(rng.randrange(size), rng.randint(0, 3)) for _ in range(n)]
        pair = rng.randint(0, 3)
        points = list(itertools.product(range(size), repeat=n))

        # separable tree distances plus a coupling distance stay L-convex
        def fn(x):
            val = sum(w * tree.dist(v, a) for v, (a, w) in zip(x, anchors))
            if n == 2:
                val += pair * tree.dist(x[0], x[1])
            return Fraction(val)

        return gridconvex.GridFunction.from_callable(grid, points, fn).to_json()
    if kind == "poset":
        catalog = semilattice.standard_catalog()
        name, L = catalog[rng.randrange(len(catalog))]
        if isinstance(L, semilattice.ProductSemilattice):
            L = semilattice.flatten_product(L)
        return {**L.to_json(), "name": name, "values": [str(rng.randint(0, 4)) for _ in range(L.size)]}
    raise InputError(f"unknown kind {kind!r}")


def cmd_gen(args, report: RunReport):
    data = generate(args.kind, args.seed, args.n, args.k, args.graph)
    text = json.dumps(data, sort_keys=True, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        report.result = {"kind": args.kind, "seed": args.seed, "file": args.output}
        report.instance_digest = digest(data)
    else:
        sys.stdout.write(text)
        report.result = None


# -- wiring ----------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lconvex", description="L-convex optimization on graph structures")
    fmt = argparse.ArgumentParser(add_help=False)
    group = fmt.add_mutually_exclusive_group()
    group.add_argument("--json", dest="format", action="store_const", const="json", help="JSON report (default)")
    group.add_argument("--text", dest="format", action="store_const", const="text", help="plain-text report")
    parser.set_defaults(format="json")
    sub = parser.add_subparsers(dest="area", required=True)

    p_mcmf = sub.add_parser("mcmf", help="minimum cost multiflow").add_subparsers(dest="action", required=True)
    s = p_mcmf.add_parser("solve", parents=[fmt])
    s.add_argument("file")
    s.add_argument("--verify", action="store_true", help="re-check optimality of the emitted solution")
    s.add_argument("--dual-brute", type=int, metavar="RADIUS", help="compare with dual enumeration up to RADIUS")
    s.set_defaults(run=cmd_mcmf_solve, command="mcmf solve")

    p_zero = sub.add_parser("zeroext", help="minimum 0-extension").add_subparsers(dest="action", required=True)
    s = p_zero.add_parser("solve", parents=[fmt])
    s.add_argument("file")
    s.add_argument("--brute", action="store_true", help="exhaustive search instead of steepest descent")
    s.add_argument("--verify", action="store_true", help="compare against exhaustive search")
    s.set_defaults(run=cmd_zeroext_solve, command="zeroext solve")

    p_lc = sub.add_parser("lconvex", help="L-convexity of grid function tables").add_subparsers(dest="action", required=True)
    s = p_lc.add_parser("verify", parents=[fmt])
    s.add_argument("file")
    s.add_argument("--sda", action="store_true", help="also run steepest descent and check it")
    s.set_defaults(run=cmd_lconvex_verify, command="lconvex verify")

    p_sl = sub.add_parser("semilattice", help="modular semilattices").add_subparsers(dest="action", required=True)
    s = p_sl.add_parser("check", parents=[fmt])
    s.add_argument("file")
    s.set_defaults(run=cmd_semilattice_check, command="semilattice check")

    s = sub.add_parser("gen", parents=[fmt], help="deterministic random instance")
    s.add_argument("kind", choices=["mcmf", "zeroext", "gridfn", "poset"])
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--graph", help="zeroext graph: " + ", ".join(sorted(GRAPHS)))
    s.add_argument("-o", "--output")
    s.set_defaults(run=cmd_gen, command="gen")
    return parser


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    report = RunReport(args.command)
    start = time.perf_counter()
    try:
        args.run(args, report)
    except (InputError, *INPUT_ERRORS) as exc:
        report.status = INPUT_ERROR
        report.result = {"error": str(exc) or type(exc).__name__}
    report.seconds = time.perf_counter() - start
    if args.command == "gen" and report.result is None:
        return report.status
    if args.format == "text":
        out.write(report.to_text() + "\n")
    else:
        out.write(json.dumps(report.to_json(), indent=2) + "\n")
    return report.status


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
