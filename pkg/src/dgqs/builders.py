"""Standard modules: free modules, Koszul complexes, multiplication cones."""

from __future__ import annotations

from itertools import combinations

from .algebra import PolynomialDGAlgebra
from .module import BasedDGModule, ModuleMap, free_module, mapping_cone


def koszul_complex(A: PolynomialDGAlgebra, variables=None) -> BasedDGModule:
    """Koszul complex on the given variables (0-based), all generators in degree 0.

    ``d e_S = sum_{i in S} (-1)^#{s in S, s > i} x_i e_{S - i}``, generators
    ordered by subset size then lexicographically.  Needs ``d x_i = 0``
    to be a DG module, so use it over ``A(0, ..., 0)``.
    """
    variables = list(range(A.n) if variables is None else variables)
    subsets = [S for r in range(len(variables) + 1) for S in combinations(variables, r)]
    pos = {S: k for k, S in enumerate(subsets)}
    names = ["e" + "".join(str(i + 1) for i in S) for S in subsets]
    diff = {}
    for S in subsets:
        for i in S:
            later = sum(1 for s in S if s > i)
            rest = tuple(s for s in S if s != i)
            x = A.variable(i)
            diff[(pos[rest], pos[S])] = -x if later % 2 else x
    return BasedDGModule(A, names, [0] * len(subsets), diff)


def multiplication_cone(A, element) -> BasedDGModule:
    """``cone(a: S^-|a| A -> A)`` for a homogeneous cocycle ``a`` of positive degree."""
    e = element.degree
    target = free_module(A, [0], ["u"])
    source = free_module(A, [e], ["w"])
    f = ModuleMap(source, target, 0, {(0, 0): element})
    return mapping_cone(f).module
