"""Ghost towers, ghost length, level and ghost dimension.

The tower is ``I_0 = M``, ``F_i -> I_i`` a free cover hitting minimal
cohomology generators, ``I_(i+1) = cone(F_i -> I_i)``, ``g_i`` the cone
inclusion.  ``H(f_i)`` onto makes ``g_i`` a ghost, and every ghost out of
``I_i`` factors through ``g_i``, so the composites ``rho_n = g_n ... g_0``
decide ghost length: it is the largest ``n`` with ``rho_(n-1)`` not
null-homotopic.  Null-homotopy is decided by the exact solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import BudgetExceeded, CapExceeded, Inconclusive, WindowTooSmall
from .filtration import dg_free_class, minimize
from .homology import induced_map, minimal_cohomology_generators
from .linalg import rref
from .module import BasedDGModule, ModuleMap, compose, free_module, identity, mapping_cone, null_homotopy

DEFAULT_BUDGET = 512
STABILITY_MARGIN = 2


def homology_epi_cover(M: BasedDGModule, window, margin: int = STABILITY_MARGIN):
    """Free module on minimal cohomology generators and the map onto their cocycles."""
    try:
        mg = minimal_cohomology_generators(M, window, margin)
    except CapExceeded as exc:
        raise WindowTooSmall(str(exc)) from exc
    if not mg.stable:
        raise WindowTooSmall(f"new cohomology generators near the top of window {tuple(window)}: {mg.degrees}")
    elems = mg.elements()
    F = free_module(M.algebra, [d for d, _ in elems], [f"z{k}" for k in range(len(elems))])
    entries = {}
    for k, (_, z) in enumerate(elems):
        for j, a in z.items():
            entries[(j, k)] = a
    f = ModuleMap(F, M, 0, entries)
    _check_onto(f, mg.table)
    return F, f


def _check_onto(f: ModuleMap, target_table):
    lo, hi = target_table.window
    H = induced_map(f, (lo, hi), target_table=target_table)
    field = f.algebra.field
    for d in range(lo, hi + 1):
        if target_table.dims[d] and len(rref(H[d], field)) != target_table.dims[d]:
            raise WindowTooSmall(f"cover is not onto in degree {d}")


@dataclass
class GhostTower:
    stages: list           # I_0 = M, I_1, ...
    covers: list           # f_i: F_i -> I_i
    ghosts: list           # g_i: I_i -> I_(i+1)
    composites: list       # rho_i: M -> I_(i+1)
    window: tuple

    def sizes(self) -> list:
        return [I.size for I in self.stages]


def _extend(tower: GhostTower, budget: int):
    I = tower.stages[-1]
    F, f = homology_epi_cover(I, tower.window)
    cone = mapping_cone(f)
    if cone.module.size > budget:
        raise BudgetExceeded(f"tower stage has {cone.module.size} generators > budget {budget}")
    g = cone.iota
    tower.covers.append(f)
    tower.ghosts.append(g)
    tower.stages.append(cone.module)
    prev = tower.composites[-1] if tower.composites else identity(tower.stages[0])
    tower.composites.append(compose(g, prev))


def ghost_tower(M: BasedDGModule, k: int, window, budget: int = DEFAULT_BUDGET) -> GhostTower:
    """Stages ``I_0 .. I_(k+1)``; every ``g_i`` is checked to be a ghost on the window."""
    tower = GhostTower([M], [], [], [], tuple(window))
    for _ in range(k + 1):
        _extend(tower, budget)
    return tower


@dataclass
class Witness:
    value: int             # largest n with rho_(n-1) not null-homotopic (rho_-1 = id)
    tower: GhostTower
    null_at: int | None    # first i with rho_i null-homotopic, if reached


def ghost_witness(M: BasedDGModule, depth: int, window, budget: int = DEFAULT_BUDGET) -> Witness:
    """Ghost-tower lower bound, building at most ``depth + 1`` stages."""
    tower = GhostTower([M], [], [], [], tuple(window))
    try:
        if null_homotopy(identity(M)) is not None:
            return Witness(-1, tower, -1)
        for n in range(depth + 1):
            _extend(tower, budget)
            if null_homotopy(tower.composites[-1]) is not None:
                return Witness(n, tower, n)
    except CapExceeded as exc:
        raise WindowTooSmall(str(exc)) from exc
    return Witness(depth + 1, tower, None)


@dataclass
class InvariantReport:
    ghost_length: int | None
    lower: int
    upper: int
    level: int | None
    cone_length: int | None
    window: tuple
    witness: dict = dc_field(default_factory=dict)
    stats: dict = dc_field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def as_dict(self) -> dict:
        return {
            "ghost_length": self.ghost_length,
            "bounds": [self.lower, self.upper],
            "exact": self.exact,
            "level": self.level,
            "cone_length": self.cone_length,
            "window": list(self.window),
            "witness": self.witness,
            "stats": self.stats,
        }


def _map_json(f: ModuleMap) -> list:
    return [{"row": f.target.names[i], "col": f.source.names[j], "entry": repr(a)}
            for (i, j), a in f.entries.items()]


def ghost_length(M: BasedDGModule, window, budget: int = DEFAULT_BUDGET, strict: bool = True) -> InvariantReport:
    """Sandwich the tower witness against the cone-length upper bound."""
    window = tuple(window)
    mm = minimize(M, window)
    G = mm.module
    stats = {"input_generators": M.size, "minimal_generators": G.size, "cancellations": len(mm.log)}
    if not G.size:
        return InvariantReport(-1, -1, -1, 0, -1, window, {"quasi_trivial": True}, stats)
    upper = dg_free_class(G).upper
    wit = ghost_witness(G, upper, window, budget)
    stats["tower_sizes"] = wit.tower.sizes()
    if wit.null_at is None:
        raise WindowTooSmall(f"composite of {upper + 1} tower maps is not null-homotopic; covers not certified")
    lower = wit.value
    if lower < upper and G.size <= 12:
        upper = min(upper, dg_free_class(G, "exhaustive", 12, lower_hint=lower).upper)
    witness = {"depth": lower}
    if lower >= 0:
        rho = wit.tower.composites[lower - 1] if lower >= 1 else identity(G)
        witness["nonnull_composite"] = _map_json(rho)
        witness["target_generators"] = rho.target.size
    exact = lower == upper
    rep = InvariantReport(lower if exact else None, lower, upper, lower + 1 if exact else None,
                          upper if exact else None, window, witness, stats)
    if strict and not exact:
        raise Inconclusive(f"ghost length between {lower} and {upper}", lower, upper)
    return rep


def level(M: BasedDGModule, window, budget: int = DEFAULT_BUDGET) -> int:
    return ghost_length(M, window, budget).level


@dataclass
class GhostDimension:
    value: int | None      # None encodes the empty supremum
    members: list

    @property
    def display(self) -> str:
        return "-inf" if self.value is None else str(self.value)

    def as_dict(self) -> dict:
        return {"lower_bound": self.display, "is_lower_bound": True, "members": self.members}


def ghost_dimension(corpus, window, budget: int = DEFAULT_BUDGET) -> GhostDimension:
    """Max ghost length over a finite corpus: a lower bound for the ghost dimension."""
    vals = []
    members = []
    for name, M in corpus:
        rep = ghost_length(M, window, budget)
        vals.append(rep.ghost_length)
        members.append({"name": name, "ghost_length": rep.ghost_length})
    return GhostDimension(max(vals) if vals else None, members)
