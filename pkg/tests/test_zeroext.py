import itertools
import random
from fractions import Fraction

import pytest

from lconvex.graphcore import (
    Graph,
    cartesian_product,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    diameter,
    hypercube,
    path_graph,
    random_tree,
)
from lconvex.zeroext import (
    NP_HARD_REASON,
    OrientedProduct,
    Rejected,
    ZeroExtError,
    ZeroExtInstance,
    accept_graph,
    brute_force_solve,
    distance_localizations_submodular,
    initial_point,
    is_well_oriented,
    objective,
    random_instance,
    sda_solve,
    well_oriented_orientations,
)

K2 = path_graph(2)
FAMILIES = {
    "P4": path_graph(4),
    "K13": complete_bipartite(1, 3),
    "C4": cycle_graph(4),
    "P3xP3": cartesian_product(path_graph(3), path_graph(3)),
    "Q3": hypercube(3),
}


def argmin_set(inst):
    vals = {x: objective(inst, x) for x in itertools.product(range(inst.graph.n), repeat=inst.n)}
    best = min(vals.values())
    return [x for x, v in vals.items() if v == best], best


def test_objective_examples():
    assert objective(ZeroExtInstance(K2, 1), (0,)) == 0
    inst = ZeroExtInstance(K2, 1, {(0, 0): 2, (0, 1): 1})
    assert objective(inst, (0,)) == 1 and objective(inst, (1,)) == 2
    pair = ZeroExtInstance(path_graph(4), 2, {}, {(0, 1): 1})
    for x in itertools.product(range(4), repeat=2):
        assert objective(pair, x) == abs(x[0] - x[1])


def test_brute_force_examples():
    inst = ZeroExtInstance(K2, 1, {(0, 0): 2, (0, 1): 1})
    assert brute_force_solve(inst) == ((0,), 1)
    free = ZeroExtInstance(cycle_graph(4), 3, {}, {(0, 1): 2, (1, 2): 1})
    x, val = brute_force_solve(free)
    assert val == 0 and len(set(x)) == 1
    with pytest.raises(ZeroExtError):
        brute_force_solve(free, cap=10)


def test_c4_pinned_variable():
    c4 = cycle_graph(4)
    inst = ZeroExtInstance(c4, 2, {(0, 0): 10, (1, 2): 1, (1, 1): 1}, {(0, 1): 1})
    x, val = brute_force_solve(inst)
    assert x[0] == 0
    # x_2 sits between the pin and its attractors: vertex 1 is a median of 0, 1, 2
    assert x == (0, 1) and val == 2
    assert sda_solve(inst).value == val


def test_rejection_of_non_modular_graphs():
    for g in (complete_graph(3), complete_graph(4)):
        with pytest.raises(Rejected) as err:
            accept_graph(g)
        assert err.value.reason == NP_HARD_REASON
        with pytest.raises(Rejected):
            sda_solve(ZeroExtInstance(g, 1, {(0, 0): 1}))


def test_accepted_orientation_is_well_oriented():
    for name, g in FAMILIES.items():
        o = accept_graph(g)
        assert is_well_oriented(g, o), name
    # the chain orientation of a path is admissible but not accepted
    chain = accept_graph(path_graph(4))
    assert chain.arcs != frozenset({(0, 1), (1, 2), (2, 3)})


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_distance_localizations_are_submodular(name):
    g = FAMILIES[name]
    assert distance_localizations_submodular(g, accept_graph(g))


@pytest.mark.parametrize("seed", range(10))
def test_trees_match_brute_force(seed):
    rng = random.Random(seed)
    g = random_tree(rng.randint(2, 6), rng)
    inst = random_instance(rng, g, rng.randint(1, 3))
    res = sda_solve(inst)
    assert res.value == brute_force_solve(inst)[1]
    assert res.iterations <= diameter(g) + 2


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_sda_steps_bound_and_local_exactness(name):
    g = FAMILIES[name]
    rng = random.Random(name)
    for _ in range(8):
        inst = random_instance(rng, g, rng.randint(1, 3))
        res = sda_solve(inst)
        args, best = argmin_set(inst)
        assert res.value == best and res.argmin in args
        space = OrientedProduct(g, inst.n, res.orientation)
        x0 = res.trace[0]
        assert x0 == initial_point(inst)
        assert res.iterations == len(res.trace)
        assert res.iterations <= min(space.d_delta(x0, y) for y in args) + 2
        assert res.iterations <= diameter(g) + 2
        for x, y in zip(res.trace, res.trace[1:]):
            local = min(objective(inst, z) for z in space.filter(x) + space.ideal(x))
            assert objective(inst, y) == local < objective(inst, x)


def test_every_well_oriented_orientation_solves_c4_and_p4():
    rng = random.Random(3)
    for g in (cycle_graph(4), path_graph(4)):
        orients = list(well_oriented_orientations(g))
        assert orients
        for _ in range(10):
            inst = random_instance(rng, g, 2)
            best = brute_force_solve(inst)[1]
            for o in orients:
                assert sda_solve(inst, orientation=o).value == best


def test_initial_point_prefers_light_vertex():
    inst = ZeroExtInstance(path_graph(3), 2, {(0, 0): 2, (1, 0): 1, (0, 1): 1, (1, 2): Fraction(1, 2)})
    assert initial_point(inst) == (2, 2)


def test_instance_validation_and_json():
    inst = ZeroExtInstance(cycle_graph(4), 2, {(0, 1): "3/2"}, {(1, 0): 2})
    assert inst.c == {(0, 1): 2}
    back = ZeroExtInstance.from_json(inst.to_json())
    assert back.b == inst.b and back.c == inst.c and back.n == 2
    res = sda_solve(inst).to_json()
    assert res["value"] == "0" and res["iterations"] >= 1
    with pytest.raises(ZeroExtError):
        ZeroExtInstance(K2, 1, {(0, 0): -1})
    with pytest.raises(ZeroExtError):
        ZeroExtInstance(Graph(3, [(0, 1)]), 1)
    with pytest.raises(ZeroExtError):
        ZeroExtInstance(Graph(2, [(0, 1)], ["2"]), 1)
    with pytest.raises(ZeroExtError):
        ZeroExtInstance.from_json({"n": 1})
