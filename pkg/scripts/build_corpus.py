"""Regenerate the shipped ``.dgws`` corpus in canonical form.

Documented values are the hand-derived ground truth; the test suite
checks that the library reproduces them.
"""

from __future__ import annotations

import random
import sys
from pathlib import Path

from dgqs.algebra import make_dg_polynomial, make_table_algebra
from dgqs.builders import koszul_complex
from dgqs.module import BasedDGModule, ModuleMap, free_module, identity, mapping_cone
from dgqs.randgen import averaging_projector, graph_projector, random_catfree
from dgqs.workspace import Workspace, corpus_dir


def _ws(window, **extra):
    return Workspace(settings={"field": "q", "window": list(window), "budget_generators": 512,
                               "seed": 0, **extra})


def koszul(n):
    A = make_dg_polynomial(n, [0] * n, 12)
    ws = _ws([0, 8])
    ws.add_algebra(f"A0_{n}", A)
    ws.add_module("koszul", koszul_complex(A), f"A0_{n}")
    dims = {str(d): (1 if d == 0 else 0) for d in range(0, 9)}
    ws.documented = {"koszul": {"cone_length": n, "ghost_length": n, "level": n + 1,
                                "cohomology_dims": dims,
                                "why": "resolves the residue field k; its length is the number of variables"}}
    return ws


def badmodule():
    A = make_dg_polynomial(1, [0], 8)
    x = A.variable(0)
    M = BasedDGModule(A, ["u", "v", "w"], [0, 0, 0], {(0, 1): x, (2, 0): x})
    ws = _ws([0, 6])
    ws.add_algebra("A0", A)
    ws.add_module("bad", M, "A0")
    ws.documented = {"bad": {"valid": False, "witness": ["w", "v"],
                             "violation": "d(d(v)) = -x^2 w is nonzero"}}
    return ws


def free():
    A = make_dg_polynomial(2, [0, 0], 12)
    ws = _ws([-2, 8])
    ws.add_algebra("A00", A)
    ws.add_module("free", free_module(A, [0, 2], ["a", "b"]), "A00")
    ws.documented = {"free": {"cone_length": 0, "ghost_length": 0, "level": 1,
                              "why": "DG free on two generators, not quasi-trivial"}}
    return ws


def conetrivial():
    A = make_dg_polynomial(1, [0], 10)
    ws = _ws([-2, 8])
    ws.add_algebra("A0", A)
    ws.add_module("cone_id", mapping_cone(identity(free_module(A, [0], ["u"]))).module, "A0")
    ws.documented = {"cone_id": {"cone_length": -1, "ghost_length": -1, "level": 0,
                                 "why": "cone of an identity is contractible"}}
    return ws


def conex():
    A = make_dg_polynomial(1, [0], 12)
    ws = _ws([-1, 8])
    ws.add_algebra("A0", A)
    target = free_module(A, [0], ["u"])
    source = free_module(A, [1], ["w"])
    ws.add_module("A", target, "A0")
    ws.add_module("shifted_A", source, "A0")
    ws.add_map("mul_x", ModuleMap(source, target, 0, {(0, 0): A.variable(0)}), "shifted_A", "A")
    ws.documented = {"mul_x": {"cone_cohomology_dims": {str(d): (1 if d == 0 else 0) for d in range(-1, 9)},
                               "why": "multiplication by x is injective with cokernel k"}}
    ws.settings["default_module"] = "A"
    return ws


def a1cone():
    A = make_dg_polynomial(1, [1], 12)
    x = A.variable(0)
    x2 = A.mul(x, x)
    target = free_module(A, [0], ["u"])
    source = free_module(A, [2], ["w"])
    M = mapping_cone(ModuleMap(source, target, 0, {(0, 0): x2})).module
    ws = _ws([-2, 8])
    ws.add_algebra("A1", A)
    ws.add_module("cone_x2", M, "A1")
    ws.documented = {"cone_x2": {"cone_length": 0, "ghost_length": 0, "level": 1, "fixed_basis_class": 1,
                                 "why": "x^2 = d(x) makes the attaching map null-homotopic"}}
    return ws


def exterior():
    A = make_table_algebra({0: ["1"], 1: ["y"]}, {}, {}, 6)
    y = A.element({(1, 0): 1})
    target = free_module(A, [0], ["u"])
    source = free_module(A, [1], ["w"])
    M = mapping_cone(ModuleMap(source, target, 0, {(0, 0): y})).module
    ws = _ws([-2, 3])
    ws.add_algebra("exterior", A)
    ws.add_module("cone_y", M, "exterior")
    ws.documented = {"cone_y": {"cone_length": 1, "ghost_length": 1, "level": 2,
                                "why": "cohomology is k + k with y acting by zero, not free, so not DG free"}}
    return ws


def split():
    A = make_dg_polynomial(1, [0], 10)
    F, pi = averaging_projector(koszul_complex(A))
    ws = _ws([-2, 8])
    ws.add_algebra("A0", A)
    ws.add_module("F", F, "A0")
    ws.add_map("pi", pi.map, "F", "F")
    ws.documented = {"pi": {"summand_generators": 2, "summand_filtration_length": 1,
                            "why": "the diagonal of two Koszul complexes is one Koszul complex"}}
    return ws


def catsplit():
    rng = random.Random(7)
    A = make_dg_polynomial(2, [0, 0], 14)
    F1 = random_catfree(rng, A, 2, 0, 2, "a")
    F2 = random_catfree(rng, A, 1, 0, 2, "b")
    F, pi = graph_projector(rng, F1, F2, catfree=True)
    ws = _ws([-2, 10])
    ws.add_algebra("A00", A)
    ws.add_module("F", F, "A00")
    ws.add_map("pi", pi.map, "F", "F")
    ws.documented = {"pi": {"pairs": 1, "why": "the image is a graph over the one-pair block"}}
    return ws


def table_reference():
    """Same exterior cone, with algebra and module kept in separate files."""
    ws = exterior()
    ws.refs[("algebras", "exterior")] = "parts/exterior.json"
    ws.refs[("modules", "cone_y")] = "parts/cone_y.json"
    return ws


BUILDERS = {
    "koszul1": lambda: koszul(1), "koszul2": lambda: koszul(2), "koszul3": lambda: koszul(3),
    "badmodule": badmodule, "free": free, "conetrivial": conetrivial, "conex": conex,
    "a1cone": a1cone, "exterior": exterior, "exterior_refs": table_reference,
    "split": split, "catsplit": catsplit,
}


def main(out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    for name, build in BUILDERS.items():
        ws = build()
        (out / f"{name}.dgws").write_text(ws.dumps(), encoding="utf-8")
        ws.write_references(out)
        print(f"wrote {name}.dgws")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else corpus_dir())
