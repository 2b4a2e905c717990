import pytest
from hypothesis import given, strategies as st

from dgqs.errors import CapExceeded
from dgqs.homology import (cohomology, induced_map, is_ghost, is_quasi_iso,
                           minimal_cohomology_generators, realize)
from dgqs.module import (ModuleMap, direct_sum, free_module, identity, mapping_cone, suspend,
                         zero_map)
from dgqs.randgen import add_contractible, random_semifree
from helpers import algebras, koszul_uv, poly, rng
from oracles import naive_rank


def oracle_dims(M, lo, hi):
    """dim H^d from an independent monomial-by-generator enumeration and naive ranks."""
    A = M.algebra

    def basis(d):
        return [(j, m) for j, g in enumerate(M.degrees) for m in (A.basis(d - g) if d - g >= 0 else [])]

    def matrix(d):
        src, tgt = basis(d), basis(d + 1)
        pos = {t: k for k, t in enumerate(tgt)}
        rows = []
        for j, m in src:
            image = M.apply_diff({j: A.monomial(m)})
            row = {}
            for i, a in image.items():
                for (e, b), c in a.terms.items():
                    row[pos[(i, A.basis(e)[b])]] = c
            rows.append(row)
        return rows, len(tgt)

    dims = {}
    for d in range(lo, hi + 1):
        n = len(basis(d))
        rows, m = matrix(d)
        prev, pm = matrix(d - 1)
        dims[d] = n - naive_rank(rows, m) - naive_rank(prev, pm)
    return dims


def test_realize_free_rank_one():
    A = poly(1)
    C = realize(free_module(A, [0]), (0, 3))
    assert [C.dim(d) for d in range(4)] == [1, 1, 1, 1]
    assert all(not any(C.diff_matrix(d)) for d in range(4))


def test_realize_koszul_dims():
    C = realize(koszul_uv(poly(1)), (0, 2))
    assert [C.dim(d) for d in range(3)] == [2, 2, 2]


def test_window_past_cap():
    with pytest.raises(CapExceeded):
        realize(free_module(poly(1, N=6), [0]), (0, 6))


def test_cohomology_of_polynomial_ring():
    H = cohomology(free_module(poly(2), [0]), (0, 8))
    assert [H.dims[d] for d in range(9)] == [d + 1 for d in range(9)]


def test_cohomology_of_koszul():
    H = cohomology(koszul_uv(poly(1)), (0, 8))
    assert H.dims == {0: 1, **{d: 0 for d in range(1, 9)}}
    (rep,) = H.representative_elements(0)
    assert list(rep) == [0]  # the class of u


def test_cohomology_of_a1():
    H = cohomology(free_module(poly(1, [1]), [0]), (0, 10))
    assert H.dims[0] == 1 and all(H.dims[d] == 0 for d in range(1, 11))


def test_induced_map_of_ghost_into_contractible():
    A = poly(1)
    F = free_module(A, [0])
    cone = mapping_cone(identity(F))
    H = induced_map(cone.iota, (0, 6))
    assert all(not col for cols in H.values() for col in cols)
    assert is_ghost(cone.iota, (0, 3))
    assert not is_quasi_iso(cone.iota, (0, 3))


def test_induced_map_of_multiplication():
    A = poly(1)
    source, target = free_module(A, [1], ["w"]), free_module(A, [0], ["u"])
    f = ModuleMap(source, target, 0, {(0, 0): A.variable(0)})
    H = induced_map(f, (1, 6))
    # x^(d-1) w goes to x^d u: the identity matrix in monomial bases
    assert all(H[d] == [{0: 1}] for d in range(1, 7))


def test_trivial_ghost_and_quasi_iso():
    M = koszul_uv(poly(1))
    assert is_ghost(zero_map(M, M), (0, 5))
    assert is_quasi_iso(identity(M), (0, 5))


def test_minimal_generators():
    A = poly(1)
    g = minimal_cohomology_generators(free_module(A, [0]), (0, 8))
    assert g.degrees == [0]
    assert minimal_cohomology_generators(koszul_uv(A), (0, 8)).degrees == [0]
    S = direct_sum(free_module(A, [0]), suspend(free_module(A, [0]), 1)).module
    assert sorted(minimal_cohomology_generators(S, (-1, 8)).degrees) == [-1, 0]


def test_minimal_generators_of_a_polynomial_ring_in_two_variables():
    # H(A) = A is generated by 1 alone even though every degree is nonzero
    g = minimal_cohomology_generators(free_module(poly(2), [0]), (0, 8))
    assert g.degrees == [0] and g.stable


@given(st.integers(0, 10**6), st.integers(0, 3))
def test_cohomology_matches_oracle(seed, a):
    A = algebras()[a]
    M = random_semifree(rng(seed), A, 4)
    H = cohomology(M, (-2, 8))
    assert H.dims == oracle_dims(M, -2, 8)


@given(st.integers(0, 10**6), st.integers(0, 3))
def test_representatives_are_independent_cocycles(seed, a):
    A = algebras()[a]
    M = add_contractible(rng(seed), random_semifree(rng(seed), A, 3), 1)
    H = cohomology(M, (-2, 7))
    C = H.complex
    for d in range(-2, 8):
        for z in H.representatives[d]:
            assert H.is_cocycle(d, z) and not H.is_boundary(d, z)
        assert naive_rank(H.representatives[d] + H.boundaries(d), C.dim(d)) == \
            H.dims[d] + naive_rank(H.boundaries(d), C.dim(d))
