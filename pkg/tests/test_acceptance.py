"""Acceptance criteria, each at its stated size and time limit.

Every criterion is a deterministic function of a master seed that returns
a certificate (counts and per-instance results, no timings).  The tests
time it, write the certificate under ``acceptance-out/`` and print one
PASS/FAIL line.  The determinism criterion reruns the others and compares
certificate bytes.
"""

import time
from pathlib import Path

import pytest

from dgqs.builders import koszul_complex
from dgqs.errors import BudgetExceeded, Inconclusive, WindowTooSmall
from dgqs.filtration import cone_length, find_filtration, minimize
from dgqs.homology import DegreewiseComplex, cohomology, is_ghost
from dgqs.invariants import ghost_length
from dgqs.module import (compose, d_hom, free_module, identity, mapping_cone, null_homotopy,
                         validate_module)
from dgqs.quillen_suslin import split_categorically_projective, split_semiprojective
from dgqs.randgen import (add_contractible, block_projector, graph_projector, random_catfree,
                          random_chain_map, random_free, random_ghost_from_free,
                          random_ghost_from_summand, random_semifree)
from dgqs.workspace import dumps, parse_workspace, resolve_target
from helpers import poly, rng
from oracles import naive_rank

SEED = 20240601
OUT = Path(__file__).resolve().parent.parent / "acceptance-out"


def _instance_rng(criterion, k):
    return rng(SEED * 1000 + criterion * 100000 + k)


def _oracle_cohomology(M, lo, hi):
    C = DegreewiseComplex(M)
    p = M.field.p

    def rk(d):
        if not C.dim(d) or not C.dim(d + 1):
            return 0
        return naive_rank(C.diff_matrix(d), C.dim(d + 1), p)

    return {d: C.dim(d) - rk(d) - rk(d - 1) for d in range(lo, hi + 1)}


# -- criterion bodies -----------------------------------------------------------------

def split_suite():
    W = (-2, 8)
    algs = [poly(1), poly(2), poly(2, [1, 0])]
    records = []
    for k in range(200):
        r = _instance_rng(1, k)
        A = algs[k % 3]
        F1 = random_semifree(r, A, r.randint(1, 3), max_length=2)
        F2 = random_semifree(r, A, r.randint(1, 3), max_length=2)
        F, pi = graph_projector(r, F1, F2)
        res = split_semiprojective(F, pi, W)
        P = res.module
        flen = find_filtration(F).length
        ok = (F.size <= 6 and flen <= 3 and validate_module(P).ok and res.filtration.check(P)
              and res.filtration.length <= flen and compose(res.proj, res.inc) == identity(P))
        records.append({"k": k, "input": F.size, "summand": P.size, "input_length": flen,
                        "summand_length": res.filtration.length, "ok": ok})
    return records, all(r["ok"] for r in records)


def catsplit_suite():
    W = (-2, 10)
    algs = [poly(1, N=14), poly(2, N=14)]
    records = []
    for k in range(100):
        r = _instance_rng(2, k)
        A = algs[k % 2]
        n1 = r.randint(1, 3)
        F1 = random_catfree(r, A, n1, 0, 2, "a")
        F2 = random_catfree(r, A, r.randint(1, 4 - n1), 0, 2, "b")
        F, pi = graph_projector(r, F1, F2, catfree=True)
        res = split_categorically_projective(F, pi, W)
        C = DegreewiseComplex(F)
        dims_ok = True
        for d in range(W[0], W[1] + 1):
            span = [C.to_vector(d, pi({j: A.basis_element(e, b)})) for j, e, b in C.basis(d)]
            expect = naive_rank(span, C.dim(d), A.field.p) if span else 0
            got = sum(A.dim(d - e) + A.dim(d - e - 1) for e, _ in res.eps)
            dims_ok &= expect == got
        ok = dims_ok and len(res.eps) == F2.size // 2 and F.size <= 8
        records.append({"k": k, "pairs": F.size // 2, "eps_degrees": [e for e, _ in res.eps], "ok": ok})
    return records, all(r["ok"] for r in records)


def coincidence_suite():
    W = (-2, 12)
    algs = [poly(1, N=16), poly(2, N=16), poly(2, [1, 0], N=16)]
    cases = []
    for k in range(100):
        r = _instance_rng(3, k)
        M = random_semifree(r, algs[k % 3], r.randint(1, 5), minimal=True)
        cases.append((f"random{k}", M))
    for n in (1, 2, 3):
        cases.append((f"koszul{n}", koszul_complex(poly(n, N=16))))
    records, inconclusive, ok = [], 0, True
    for name, M in cases:
        try:
            rep = ghost_length(M, W)
        except (Inconclusive, WindowTooSmall, BudgetExceeded) as exc:
            inconclusive += 1
            records.append({"case": name, "generators": M.size, "inconclusive": type(exc).__name__})
            continue
        good = rep.exact and rep.level == rep.ghost_length + 1 and rep.cone_length == rep.ghost_length
        ok &= good
        records.append({"case": name, "generators": M.size, "ghost_length": rep.ghost_length,
                        "level": rep.level, "ok": good})
    rate = inconclusive / len(cases)
    return {"cases": records, "inconclusive_rate": f"{inconclusive}/{len(cases)}"}, ok and rate < 0.10


def koszul_suite():
    records, ok = [], True
    for n in (1, 2, 3):
        ws = parse_workspace(resolve_target(f"koszul{n}"))
        _, K = ws.module()
        cl = cone_length(K, ws.window).value
        rep = ghost_length(K, ws.window)
        good = cl == n and rep.ghost_length == n and rep.level == n + 1
        ok &= good
        records.append({"n": n, "cone_length": cl, "ghost_length": rep.ghost_length, "level": rep.level})
    return records, ok


def minimize_suite():
    algs = [poly(1), poly(2), poly(1, [1]), poly(2, [1, 0])]
    records = []
    for k in range(200):
        r = _instance_rng(5, k)
        A = algs[k % 4]
        n = r.randint(1, 4)
        M = add_contractible(r, random_semifree(r, A, n), r.randint(1, (8 - n) // 2))
        lo = M.min_degree - 1
        hi = M.min_degree + A.max_degree - 1
        G = minimize(M, (lo, hi)).module
        before = _oracle_cohomology(M, lo, hi)
        after = _oracle_cohomology(G, lo, hi) if G.size else {d: 0 for d in before}
        ok = validate_module(M).ok and M.size <= 8 and G.is_minimal() and before == after
        records.append({"k": k, "input": M.size, "minimal": G.size, "window": [lo, hi], "ok": ok})
    return records, all(r["ok"] for r in records)


def ghost_suite():
    W = (-2, 8)
    algs = [poly(1), poly(2), poly(1, [1]), poly(2, [1, 0])]
    records = []
    for k in range(100):
        r = _instance_rng(6, k)
        A = algs[k % 4]
        source = "free" if k % 2 == 0 else "block_image"
        for attempt in range(50):
            N = random_semifree(r, A, r.randint(2, 4))
            if source == "free":
                F = random_free(r, A, r.randint(1, 3), base_degree=1, spread=3)
                g = random_ghost_from_free(r, F, N)
            else:
                F, pi = block_projector(random_free(r, A, r.randint(1, 2), 1, 3),
                                        random_free(r, A, r.randint(1, 2), 1, 3))
                P = split_semiprojective(F, pi, W).module
                g = random_ghost_from_summand(r, P, N)
            if not g.is_zero():
                break
        s = null_homotopy(g)
        ok = not g.is_zero() and g.is_chain_map() and is_ghost(g, W) and s is not None and d_hom(s) == g
        records.append({"k": k, "source": source, "attempts": attempt + 1, "ok": ok})
    return records, all(r["ok"] for r in records)


def cone_suite():
    algs = [poly(1), poly(2), poly(1, [1]), poly(2, [1, 0])]
    trivial = []
    for k, A in enumerate(algs):
        r = _instance_rng(7, k)
        for M in (free_module(A, [0]), random_semifree(r, A, 3)):
            trivial.append(minimize(mapping_cone(identity(M)).module, (-2, 8)).module.size)
    ws = parse_workspace(resolve_target("conex"))
    _, f = ws.map("mul_x")
    H = cohomology(mapping_cone(f).module, (-1, 8))
    mul_x = {str(d): v for d, v in H.dims.items()}
    identity_ok = sum(H.dims.values()) == 1 and max(H.dims.values()) == 1
    split_ok = 0
    for k in range(100):
        r = _instance_rng(7, 100 + k)
        A = algs[k % 4]
        M, N = random_semifree(r, A, r.randint(1, 3)), random_semifree(r, A, r.randint(1, 3))
        f = random_chain_map(r, M, N)
        cone = mapping_cone(f)
        C, CM, CN = (DegreewiseComplex(X) for X in (cone.module, M, N))
        lo = min(M.min_degree - 1, N.min_degree) - 1
        hi = max(M.degrees + N.degrees) + 3
        good = f.is_chain_map() and compose(cone.pi, cone.iota).is_zero()
        good &= all(C.dim(d) == CN.dim(d) + CM.dim(d + 1) for d in range(lo, hi + 1))
        split_ok += good
    ok = not any(trivial) and identity_ok and split_ok == 100
    return {"cone_id_sizes": trivial, "cone_mul_x_dims": mul_x, "split_exact": split_ok}, ok


CRITERIA = {
    1: ("split suite", split_suite, 120),
    2: ("catsplit suite", catsplit_suite, 60),
    3: ("ghost length / level coincidence", coincidence_suite, 600),
    4: ("Koszul family bound", koszul_suite, 60),
    5: ("minimization soundness", minimize_suite, None),
    6: ("ghosts null-homotopic", ghost_suite, None),
    7: ("cone calculus", cone_suite, None),
}

_certificates = {}


def _run(number):
    name, body, limit = CRITERIA[number]
    t0 = time.perf_counter()
    payload, ok = body()
    elapsed = time.perf_counter() - t0
    text = dumps({"criterion": number, "name": name, "seed": SEED, "ok": ok, "result": payload})
    return text, ok, elapsed, limit


def _report(capsys, number, name, ok, detail):
    line = f"criterion {number} [{name}]: {'PASS' if ok else 'FAIL'} ({detail})"
    with capsys.disabled():
        print("\n" + line)


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    text, ok, elapsed, limit = _run(number)
    OUT.mkdir(exist_ok=True)
    (OUT / f"criterion{number}.json").write_text(text, encoding="utf-8")
    _certificates[number] = text
    in_time = limit is None or elapsed < limit
    detail = f"{elapsed:.1f}s" + (f" < {limit}s" if limit else "")
    _report(capsys, number, CRITERIA[number][0], ok and in_time, detail)
    assert ok, text
    assert in_time, f"took {elapsed:.1f}s, limit {limit}s"


def test_criterion_8_determinism(capsys):
    t0 = time.perf_counter()
    mismatched = []
    for number in sorted(CRITERIA):
        first = _certificates.get(number) or _run(number)[0]
        if _run(number)[0] != first:
            mismatched.append(number)
    elapsed = time.perf_counter() - t0
    _report(capsys, 8, "determinism", not mismatched, f"{elapsed:.1f}s, reran {len(CRITERIA)} criteria")
    assert not mismatched
