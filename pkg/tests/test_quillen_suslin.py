import pytest
from hypothesis import given, strategies as st

from dgqs.errors import NotAProjector, NotClosed, NotProjective, NotQuasiTrivial
from dgqs.filtration import find_filtration
from dgqs.module import (BasedDGModule, ModuleMap, compose, direct_sum, free_module, identity,
                         suspend, validate_module)
from dgqs.quillen_suslin import (Projector, cone_presentation, extract_free_basis, find_pairs,
                                 split_categorically_projective, split_semiprojective)
from dgqs.randgen import (averaging_projector, block_projector, graph_projector, random_catfree,
                          random_semifree)
from helpers import koszul_uv, poly, rng

W = (-2, 8)


def _as_names(F, elem):
    return {F.names[j]: repr(a) for j, a in elem.items()}


def test_projector_checks():
    A = poly(1)
    F = free_module(A, [0, 0])
    with pytest.raises(NotAProjector):
        Projector(ModuleMap(F, F, 0, {(0, 0): A.one().scale(2)}))
    K = koszul_uv(A)
    with pytest.raises(NotAProjector):
        Projector(ModuleMap(K, K, 0, {(0, 0): A.one()}))     # not a chain map
    assert Projector(identity(K)).complement().is_zero()


def test_extract_free_basis_examples():
    A = poly(1)
    F = direct_sum(free_module(A, [0], ["a"]), suspend(free_module(A, [0], ["b"]), 1)).module
    om = extract_free_basis(F, Projector(identity(F)), W)
    assert sorted(list(_as_names(F, e).items()) for _, e in om) == [[("a", "1")], [("s(b)", "1")]]
    G, pi = block_projector(free_module(A, [0], ["g"]), free_module(A, [0], ["h"]))
    om = extract_free_basis(G, pi, W)
    assert [_as_names(G, e) for _, e in om] == [{"g": "1"}]
    H, avg = averaging_projector(free_module(A, [0], ["g"]))
    om = extract_free_basis(H, avg, W)
    assert [_as_names(H, e) for _, e in om] == [{"g#0": "1", "g#1": "1"}]


def test_split_identity_keeps_filtration():
    K = koszul_uv(poly(1))
    res = split_semiprojective(K, Projector(identity(K)), W)
    assert res.module.size == 2
    assert res.filtration.levels == find_filtration(K).levels


def test_split_block_projector():
    K = koszul_uv(poly(1))
    F, pi = block_projector(K, K)
    res = split_semiprojective(F, pi, W)
    assert res.module.size == 2 and res.filtration.length == 1
    assert res.module.diff == {(0, 1): K.algebra.variable(0)}


def test_split_averaging_projector():
    A = poly(1)
    K = koszul_uv(A)
    F, pi = averaging_projector(K)
    res = split_semiprojective(F, pi, W)
    P = res.module
    w0 = _as_names(F, res.inc(P.generator(0)))
    w1 = _as_names(F, res.inc(P.generator(1)))
    assert w0 == {"u#0": "1", "u#1": "1"} and w1 == {"v#0": "1", "v#1": "1"}
    assert P.diff == {(0, 1): A.variable(0)}
    assert res.filtration.levels == (0, 1)
    assert compose(res.proj, res.inc) == identity(P)
    assert compose(res.inc, res.proj) == pi.map


def test_cone_presentations():
    A = poly(1)
    K = koszul_uv(A)
    cp = cone_presentation(K, [0])
    assert cp.map.entries == {(0, 0): A.variable(0)}
    assert cp.cone.diff == K.diff
    F = free_module(A, [0, 0], ["a", "b"])
    cp = cone_presentation(F, [0])
    assert cp.map.is_zero() and cp.cone.size == 2
    cp = cone_presentation(K, [0, 1])
    assert cp.map.source.size == 0 and cp.cone.size == 2
    with pytest.raises(NotClosed):
        cone_presentation(K, [1])


def _pair(A, y="y", z="z", d=0):
    return BasedDGModule(A, [y, z], [d, d + 1], {(1, 0): A.one()})


def test_catsplit_identity_and_block():
    A = poly(1)
    F = _pair(A)
    res = split_categorically_projective(F, Projector(identity(F)), W)
    assert [_as_names(F, e) for _, e in res.eps] == [{"y": "1"}]
    G, pi = block_projector(_pair(A, "y1", "z1"), _pair(A, "y2", "z2"))
    res = split_categorically_projective(G, pi, W)
    assert [_as_names(G, e) for _, e in res.eps] == [{"y1": "1"}]


def test_catsplit_averaging():
    A = poly(1)
    F, pi = averaging_projector(_pair(A))
    res = split_categorically_projective(F, pi, W)
    assert [_as_names(F, e) for _, e in res.eps] == [{"y#0": "1", "y#1": "1"}]
    deps = F.apply_diff(res.eps[0][1])
    assert _as_names(F, deps) == {"z#0": "1", "z#1": "1"}
    assert all(res.transcript[k] for k in ("inc_chain", "proj_chain", "proj_inc_id", "inc_proj_pi"))


def test_catsplit_rejects_other_inputs():
    A = poly(1)
    K = koszul_uv(A)
    assert find_pairs(K) is None
    with pytest.raises(NotProjective):
        split_categorically_projective(K, Projector(identity(K)), W)
    # pairs given by hand but the image has cohomology
    F = free_module(A, [0, 1])
    with pytest.raises(NotQuasiTrivial):
        split_categorically_projective(F, Projector(identity(F)), W, pairs=[(0, 1)])


seeds = st.integers(0, 10**6)


@given(seeds, st.integers(0, 2))
def test_split_random_graph_projectors(seed, a):
    A = [poly(1), poly(2), poly(2, [1, 0])][a]
    r = rng(seed)
    F1 = random_semifree(r, A, r.randint(1, 3), max_length=2)
    F2 = random_semifree(r, A, r.randint(1, 3), max_length=2)
    F, pi = graph_projector(r, F1, F2)
    res = split_semiprojective(F, pi, W)
    P = res.module
    assert validate_module(P).ok and res.filtration.check(P)
    assert res.filtration.length <= find_filtration(F).length
    assert P.size == F2.size
    assert compose(res.proj, res.inc) == identity(P)


@given(seeds, st.integers(0, 1))
def test_catsplit_random_graph_projectors(seed, a):
    A = [poly(1), poly(2)][a]
    r = rng(seed)
    F1 = random_catfree(r, A, r.randint(1, 2), 0, 2, "a")
    F2 = random_catfree(r, A, r.randint(1, 2), 0, 2, "b")
    F, pi = graph_projector(r, F1, F2, catfree=True)
    res = split_categorically_projective(F, pi, W)
    assert len(res.eps) == F2.size // 2
    assert res.module.size == F2.size
