import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lconvex.graphcore import check_orientation, find_admissible_orientation
from lconvex.semilattice import (
    CapExceeded,
    FinitePoset,
    FiniteSemilattice,
    ProductSemilattice,
    SemilatticeError,
    boolean_lattice,
    brute_force_minimize,
    diamond,
    flatten_product,
    fractional_join,
    is_k_submodular,
    is_kl_submodular,
    is_modular_semilattice,
    is_polar_family,
    is_submodular,
    pentagon,
    polar_formula_join,
    polar_pairwise_violation,
    sk_ops,
    skl_ops,
    skl_pair_ops,
    standard_catalog,
    star_semilattice,
    twisted_semilattice,
)

CATALOG = standard_catalog()


def _is_lattice(L):
    if isinstance(L, ProductSemilattice):
        return all(_is_lattice(f) for f in L.factors)
    return all(L.join_if_exists(p, q) is not None for p in range(L.size) for q in range(L.size))


def test_star_meet_and_missing_join():
    S2 = star_semilattice(2)
    assert S2.meet(1, 2) == 0
    assert S2.join_if_exists(1, 2) is None


def test_diamond_join():
    D = diamond(2)
    assert D.join_if_exists(1, 2) == 3


def test_modularity_predicate():
    for k in range(4):
        assert is_modular_semilattice(star_semilattice(k))
    for k in (2, 3):
        for l in (2, 3):
            assert is_modular_semilattice(twisted_semilattice(k, l))
    assert not is_modular_semilattice(pentagon())


@pytest.mark.parametrize("name,L", CATALOG, ids=[n for n, _ in CATALOG])
def test_catalog_members_are_modular(name, L):
    flat = flatten_product(L) if isinstance(L, ProductSemilattice) else L
    assert is_modular_semilattice(flat)


def test_polar_operation_examples():
    meet, join = sk_ops(3)
    assert meet[(1, 2)] == 0 and join[(1, 2)] == 0
    for u in range(4):
        assert join[(0, u)] == u and meet[(0, u)] == 0
    _, join22 = skl_ops(2, 2)
    assert join22[((1, 1), (1, 2))] == (1, 0)


def test_skl_ops_independent_of_frame_choice():
    for k, l in ((1, 1), (2, 1), (2, 3), (3, 3)):
        elems = [(a, b) for a in range(k + 1) for b in range(l + 1)]
        for p, q in itertools.product(elems, repeat=2):
            results = {skl_pair_ops(p, q, k, l, c) for c in range(4)}
            assert len(results) == 1


def test_interval_elements_examples():
    D = diamond(2)
    assert set(D.interval_elements(1, 2)) == {0, 1, 2, 3}
    S2 = star_semilattice(2)
    assert set(S2.interval_elements(1, 2)) == {0, 1, 2}
    B = boolean_lattice(2)
    assert set(B.interval_elements(3, 3)) == set(B.interval(B.meet(3, 3), 3))


def test_fractional_join_examples():
    D = diamond(2)
    assert fractional_join(D, 1, 2).as_dict() == {3: 1}
    S2 = star_semilattice(2)
    assert fractional_join(S2, 1, 2).as_dict() == {1: Fraction(1, 2), 2: Fraction(1, 2)}
    for p in range(S2.size):
        assert fractional_join(S2, p, p).as_dict() == {p: 1}


@pytest.mark.parametrize("name,L", CATALOG, ids=[n for n, _ in CATALOG])
def test_fractional_join_algebra(name, L):
    elems = L.elements()
    lattice = _is_lattice(L)
    polar = is_polar_family(L)
    for p, q in itertools.product(elems, repeat=2):
        fj = fractional_join(L, p, q)
        assert all(c > 0 for _, c in fj.terms)
        assert fj.total() == 1
        if lattice:
            assert fj.as_dict() == {L.join_if_exists(p, q): 1}
        m = L.meet(p, q)
        if polar and m != p and m != q:
            assert fj.as_dict() == polar_formula_join(L, p, q).as_dict()


@pytest.mark.parametrize("name,L", [(n, L) for n, L in CATALOG if L.size <= 20], ids=[n for n, L in CATALOG if L.size <= 20])
def test_distance_is_submodular_on_square(name, L):
    square = ProductSemilattice([L, L])
    assert is_submodular(square, lambda x: L.distance(x[0], x[1]))


@pytest.mark.parametrize("name,L", CATALOG, ids=[n for n, _ in CATALOG])
def test_hasse_diagram_is_admissibly_orientable(name, L):
    flat = flatten_product(L) if isinstance(L, ProductSemilattice) else L
    g = flat.hasse_graph()
    o = find_admissible_orientation(g)
    assert o is not None and check_orientation(g, o)


def test_submodularity_examples():
    S2 = star_semilattice(2)
    assert is_submodular(S2, lambda p: 7)
    assert not is_submodular(S2, [1, 0, 0])
    S1sq = ProductSemilattice([star_semilattice(1), star_semilattice(1)])
    assert is_submodular(S1sq, lambda x: abs(x[0] - x[1]))
    assert is_k_submodular((1, 1), lambda x: abs(x[0] - x[1]))


@pytest.mark.parametrize("name", ["S_2", "S_3", "S_2,1", "S_2,2", "S_1xS_2", "S_3,1"])
def test_pairwise_and_fractional_classes_coincide(name):
    builders = {
        "S_2": lambda: star_semilattice(2),
        "S_3": lambda: star_semilattice(3),
        "S_2,1": lambda: twisted_semilattice(2, 1),
        "S_2,2": lambda: twisted_semilattice(2, 2),
        "S_3,1": lambda: twisted_semilattice(3, 1),
        "S_1xS_2": lambda: ProductSemilattice([star_semilattice(1), star_semilattice(2)]),
    }
    L = builders[name]()
    rng = random.Random(hash(name) & 0xFFFF)
    seen = {True: 0, False: 0}
    for _ in range(300):
        values = {x: Fraction(rng.randint(0, 3)) for x in L.elements()}
        a = polar_pairwise_violation(L, values) is None
        b = is_submodular(L, values)
        assert a == b
        seen[a] += 1
    assert seen[False] > 0


def test_k_and_kl_checks_agree_with_semilattice_check():
    rng = random.Random(11)
    S = twisted_semilattice(2, 2)
    for _ in range(100):
        vals = [Fraction(rng.randint(0, 3)) for _ in range(S.size)]
        table = {(lab,): v for lab, v in zip(S.labels, vals)}
        assert is_kl_submodular([(2, 2)], table) == is_submodular(S, vals)
    T = star_semilattice(3)
    for _ in range(100):
        vals = [Fraction(rng.randint(0, 3)) for _ in range(T.size)]
        assert is_k_submodular([3], {(i,): v for i, v in enumerate(vals)}) == is_submodular(T, vals)


def test_brute_force_minimize_examples():
    S3 = star_semilattice(3)
    assert brute_force_minimize(S3.elements(), lambda p: 5) == (0, 5)
    assert brute_force_minimize(S3.elements(), S3.rank) == (0, 0)
    cube = list(itertools.product(range(2), repeat=3))

    def cut(x):
        return sum(abs(x[i] - x[j]) for i, j in ((0, 1), (1, 2), (0, 2)))

    arg, val = brute_force_minimize(cube, cut)
    assert val == 0 and len(set(arg)) == 1
    with pytest.raises(CapExceeded):
        brute_force_minimize(cube, cut, cap=3)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 3), st.lists(st.integers(0, 4), min_size=4, max_size=4))
def test_rank_modular_on_star(k, vals):
    S = star_semilattice(k)
    for p, q in itertools.product(S.elements(), repeat=2):
        assert S.distance(p, q) == S.distance(q, p)
        assert S.distance(p, p) == 0


def test_poset_json_round_trip_and_errors():
    B = boolean_lattice(2)
    P = FinitePoset.from_json(B.to_json())
    assert P.hasse == B.hasse
    with pytest.raises(SemilatticeError):
        FinitePoset(2, [(0, 1), (1, 0)])
    with pytest.raises(SemilatticeError):
        FiniteSemilattice(2, [])
    with pytest.raises(SemilatticeError):
        FinitePoset.from_json({"hasse": []})
