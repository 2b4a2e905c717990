import pytest
from hypothesis import given, strategies as st

from dgqs.errors import Inconclusive
from dgqs.filtration import NotFilterable, cone_length, dg_free_class, find_filtration, minimize
from dgqs.homology import cohomology
from dgqs.module import (BasedDGModule, compose, d_hom, direct_sum, free_module, identity,
                         mapping_cone, validate_module)
from dgqs.randgen import add_contractible, random_semifree
from helpers import algebras, koszul, koszul_uv, poly, rng


def test_dg_free_is_one_level():
    F = free_module(poly(2), [0, 1, 3])
    f = find_filtration(F)
    assert f.levels == (0, 0, 0) and f.length == 0
    b = dg_free_class(F)
    assert (b.lower, b.upper) == (0, 0)


def test_koszul_levels():
    f = find_filtration(koszul_uv(poly(1)))
    assert f.levels == (0, 1) and f.length == 1
    K2 = koszul(2)
    assert list(K2.names) == ["e", "e1", "e2", "e12"]
    assert find_filtration(K2).levels == (0, 1, 1, 2)
    x1, x2 = K2.algebra.variable(0), K2.algebra.variable(1)
    assert K2.diff[(1, 3)] == x2 and K2.diff[(2, 3)] == -x1


def test_cycle_is_reported():
    A = poly(1, [0])
    x = A.variable(0)
    M = BasedDGModule(A, ["a", "b"], [0, 0], {(0, 1): x, (1, 0): x})
    f = find_filtration(M)
    assert isinstance(f, NotFilterable) and not f
    assert set(f.cycle) >= {"a", "b"}


def test_class_bounds_for_koszul():
    b = dg_free_class(koszul(1), "exhaustive", window=(0, 8))
    assert (b.lower, b.upper) == (1, 1)
    b3 = dg_free_class(koszul(3), "exhaustive", window=(0, 8))
    assert (b3.lower, b3.upper) == (3, 3)


def test_basis_change_drops_a_level():
    # over A(1), d w = x^2 u is a coboundary-type entry: x^2 = d(x) lets w + x u split off
    A = poly(1, [1])
    x = A.variable(0)
    M = BasedDGModule(A, ["u", "w"], [0, 1], {(0, 1): A.mul(x, x)})
    assert validate_module(M).ok
    assert dg_free_class(M).upper == 1
    ex = dg_free_class(M, "exhaustive", lower_hint=0)
    assert (ex.lower, ex.upper) == (0, 0)


def test_minimize_fixed_points_and_contractibles():
    K = koszul_uv(poly(1))
    mm = minimize(K, (0, 8))
    assert list(mm.module.names) == list(K.names) and mm.p == identity(K) and not mm.log
    F = free_module(poly(1), [0], ["u"])
    C = mapping_cone(identity(F)).module
    assert minimize(C, (-2, 8)).module.size == 0


def test_minimize_strips_a_contractible_summand():
    A = poly(1)
    K = koszul_uv(A)
    C = mapping_cone(identity(free_module(A, [0], ["t"]))).module
    S = direct_sum(K, C).module
    mm = minimize(S, (-2, 8))
    G = mm.module
    assert G.size == 2 and list(G.degrees) == list(K.degrees)
    assert cohomology(G, (-2, 8)).dims == cohomology(S, (-2, 8)).dims
    assert mm.certified


def test_cone_length_examples():
    A = poly(1)
    F = free_module(A, [0], ["u"])
    assert cone_length(mapping_cone(identity(F)).module, (-2, 8)).value == -1
    assert cone_length(F, (0, 8)).value == 0
    assert cone_length(koszul(2), (0, 8)).value == 2


def test_cone_length_uses_basis_changes():
    A = poly(1, [1])
    x = A.variable(0)
    M = BasedDGModule(A, ["u", "w"], [0, 1], {(0, 1): A.mul(x, x)})
    res = cone_length(M, (-2, 8))
    assert res.exact and res.value == 0


def test_inconclusive_is_raised_not_guessed():
    A = poly(1, [1])
    x = A.variable(0)
    M = BasedDGModule(A, ["u", "w"], [0, 1], {(0, 1): A.mul(x, x)})
    # with the exhaustive search disabled only the fixed-basis upper bound remains
    with pytest.raises(Inconclusive) as err:
        cone_length(M, (-2, 8), exhaustive_cap=0)
    assert (err.value.lower, err.value.upper) == (0, 1)
    res = cone_length(M, (-2, 8), exhaustive_cap=0, strict=False)
    assert res.value is None and not res.exact


@given(st.integers(0, 10**6), st.integers(0, 3))
def test_minimize_is_sound(seed, a):
    A = algebras()[a]
    r = rng(seed)
    M = add_contractible(r, random_semifree(r, A, 3), r.randint(1, 2))
    assert validate_module(M).ok
    mm = minimize(M, (-2, 8))
    G = mm.module
    assert G.is_minimal()
    assert cohomology(G, (-2, 8)).dims == cohomology(M, (-2, 8)).dims
    assert compose(mm.p, mm.iota) == identity(G)
    assert d_hom(mm.homotopy) == identity(M) - compose(mm.iota, mm.p)


@given(st.integers(0, 10**6), st.integers(0, 3))
def test_levels_respect_the_differential(seed, a):
    M = random_semifree(rng(seed), algebras()[a], 5)
    f = find_filtration(M)
    assert f.check(M)
    assert all(f.levels[i] < f.levels[j] for (i, j) in M.diff)
