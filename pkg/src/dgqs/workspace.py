"""Workspace files (``.dgws``): algebras, modules and maps in JSON syntax.

Serialization is canonical (sorted keys, two-space indent, trailing
newline), so a canonical file survives parse + dump byte for byte.
Objects may be inline or ``{"file": "relative/path.json"}``; references
are remembered and written back as references.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from .algebra import (GradedAlgebra, PolynomialDGAlgebra, TableAlgebra, make_dg_polynomial,
                      make_table_algebra, validate_algebra)
from .errors import DGError, MalformedTable, ParseError, ValidationError
from .field import Field
from .module import BasedDGModule, ModuleMap, check_map, validate_module

DEFAULT_SETTINGS = {
    "field": "q",
    "window": [-2, 10],
    "budget_generators": 512,
    "seed": 0,
}
LOAD_CHECK_DEGREE = 6


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _loads(text: str, where: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{where}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


# -- algebras ---------------------------------------------------------------------

def _terms_to_json(terms: dict, field) -> list:
    return [{"degree": d, "index": i, "coeff": field.to_str(c)} for (d, i), c in sorted(terms.items())]


def _terms_from_json(items, field, where) -> dict:
    out = {}
    for t in _as_list(items, where):
        try:
            out[(int(t["degree"]), int(t["index"]))] = field.from_str(str(t["coeff"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{where}: bad term {t!r}") from exc
    return out


def algebra_to_json(A: GradedAlgebra) -> dict:
    F = A.field
    if isinstance(A, PolynomialDGAlgebra):
        return {"kind": "dg_polynomial", "n": A.n, "t": [F.to_str(c) for c in A.t], "max_degree": A.max_degree}
    if isinstance(A, TableAlgebra):
        basis = [{"degree": d, "index": i, "name": nm}
                 for d in sorted(A.names) for i, nm in enumerate(A.names[d])]
        mul = [{"left": {"degree": a[0], "index": a[1]}, "right": {"degree": b[0], "index": b[1]},
                "terms": _terms_to_json(terms, F)} for (a, b), terms in sorted(A.mul_table.items())]
        diff = [{"degree": a[0], "index": a[1], "terms": _terms_to_json(terms, F)}
                for a, terms in sorted(A.diff_table.items())]
        return {"kind": "table", "max_degree": A.max_degree, "basis": basis, "mul": mul, "diff": diff}
    raise TypeError(f"cannot serialize {A!r}")


def algebra_from_json(obj: dict, field: Field, max_degree: int | None = None, where: str = "algebra"):
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    kind = obj.get("kind")
    N = int(max_degree if max_degree is not None else obj.get("max_degree", 12))
    try:
        if kind == "dg_polynomial":
            t = [field.from_str(str(c)) for c in obj["t"]]
            return make_dg_polynomial(int(obj["n"]), t, N, field)
        if kind == "table":
            basis: dict = {}
            for b in _as_list(obj.get("basis", []), where + ".basis"):
                d, i = int(b["degree"]), int(b["index"])
                names = basis.setdefault(d, [])
                if i != len(names):
                    raise ParseError(f"{where}.basis: indices in degree {d} must be consecutive")
                names.append(str(b.get("name", f"b{d}_{i}")))
            mul = {}
            for m in _as_list(obj.get("mul", []), where + ".mul"):
                a = (int(m["left"]["degree"]), int(m["left"]["index"]))
                b = (int(m["right"]["degree"]), int(m["right"]["index"]))
                mul[(a, b)] = _terms_from_json(m.get("terms", []), field, where + ".mul")
            diff = {}
            for m in _as_list(obj.get("diff", []), where + ".diff"):
                diff[(int(m["degree"]), int(m["index"]))] = _terms_from_json(m.get("terms", []), field,
                                                                              where + ".diff")
            return make_table_algebra(basis, mul, diff, N, field)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{where}: missing or malformed field ({exc})") from exc
    except ValueError as exc:
        if isinstance(exc, DGError):
            raise
        raise ParseError(f"{where}: {exc}") from exc
    raise ParseError(f"{where}: unknown algebra kind {kind!r}")


def _as_list(x, where):
    if not isinstance(x, list):
        raise ParseError(f"{where}: expected a list")
    return x


# -- elements, modules, maps --------------------------------------------------------

def element_to_json(a) -> list:
    A, F = a.algebra, a.algebra.field
    out = []
    for (d, i), c in a.terms.items():
        if isinstance(A, PolynomialDGAlgebra):
            out.append({"degree": d, "monomial": list(A.basis(d)[i]), "coeff": F.to_str(c)})
        else:
            out.append({"degree": d, "index": i, "coeff": F.to_str(c)})
    return out


def element_from_json(A: GradedAlgebra, items, where: str):
    terms = {}
    for t in _as_list(items, where):
        try:
            d = int(t["degree"])
            if "monomial" in t:
                if not isinstance(A, PolynomialDGAlgebra):
                    raise ParseError(f"{where}: monomial terms need a polynomial algebra")
                dd, i = A.index(tuple(int(e) for e in t["monomial"]))
                if dd != d:
                    raise ParseError(f"{where}: monomial {t['monomial']} is not of degree {d}")
            else:
                i = int(t["index"])
            if not 0 <= i < A.dim(d):
                raise ParseError(f"{where}: no basis element {i} in degree {d}")
            c = A.field.from_str(str(t["coeff"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{where}: bad term {t!r}") from exc
        if c:
            terms[(d, i)] = A.field.norm(terms.get((d, i), 0) + c)
    return A.element(terms)


def _matrix_to_json(entries: dict) -> list:
    return [{"row": i, "col": j, "element": element_to_json(a)} for (i, j), a in sorted(entries.items())]


def _matrix_from_json(A, items, where) -> dict:
    out = {}
    for e in _as_list(items, where):
        try:
            key = (int(e["row"]), int(e["col"]))
            out[key] = element_from_json(A, e["element"], f"{where}[{key}]")
        except (KeyError, TypeError) as exc:
            raise ParseError(f"{where}: bad entry {e!r}") from exc
    return out


def module_to_json(M: BasedDGModule, algebra_ref) -> dict:
    return {
        "algebra": algebra_ref,
        "generators": [{"name": n, "degree": d} for n, d in zip(M.names, M.degrees)],
        "differential": _matrix_to_json(M.diff),
    }


def module_from_json(obj, A: GradedAlgebra, where: str) -> BasedDGModule:
    try:
        gens = _as_list(obj["generators"], where + ".generators")
        names = [str(g["name"]) for g in gens]
        degrees = [int(g["degree"]) for g in gens]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{where}: malformed generators") from exc
    if len(set(names)) != len(names):
        raise ParseError(f"{where}: duplicate generator names")
    diff = _matrix_from_json(A, obj.get("differential", []), where + ".differential")
    try:
        return BasedDGModule(A, names, degrees, diff)
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from exc


def map_to_json(f: ModuleMap, source: str, target: str) -> dict:
    return {"source": source, "target": target, "map_degree": f.degree, "entries": _matrix_to_json(f.entries)}


# -- workspace -------------------------------------------------------------------------

@dataclass
class Workspace:
    settings: dict = dc_field(default_factory=lambda: dict(DEFAULT_SETTINGS))
    algebras: dict = dc_field(default_factory=dict)
    modules: dict = dc_field(default_factory=dict)
    maps: dict = dc_field(default_factory=dict)
    module_algebra: dict = dc_field(default_factory=dict)    # module name -> algebra name
    map_ends: dict = dc_field(default_factory=dict)          # map name -> (source, target)
    refs: dict = dc_field(default_factory=dict)              # (section, name) -> relative path
    documented: dict = dc_field(default_factory=dict)
    inline_algebras: set = dc_field(default_factory=set)     # algebras written inside a module
    path: Path | None = None

    @property
    def field(self) -> Field:
        return Field.parse(self.settings.get("field", "q"))

    @property
    def window(self) -> tuple:
        lo, hi = self.settings.get("window", DEFAULT_SETTINGS["window"])
        return int(lo), int(hi)

    def setting(self, key):
        return self.settings.get(key, DEFAULT_SETTINGS.get(key))

    def module(self, name: str | None = None) -> tuple[str, BasedDGModule]:
        if not self.modules:
            raise ParseError("workspace has no modules")
        name = name or self.settings.get("default_module") or next(iter(self.modules))
        if name not in self.modules:
            raise ParseError(f"unknown module {name!r}")
        return name, self.modules[name]

    def map(self, name: str | None = None) -> tuple[str, ModuleMap]:
        if not self.maps:
            raise ParseError("workspace has no maps")
        name = name or next(iter(self.maps))
        if name not in self.maps:
            raise ParseError(f"unknown map {name!r}")
        return name, self.maps[name]

    def add_algebra(self, name, A):
        self.algebras[name] = A

    def add_module(self, name, M, algebra_name):
        self.modules[name] = M
        self.module_algebra[name] = algebra_name

    def add_map(self, name, f, source, target):
        self.maps[name] = f
        self.map_ends[name] = (source, target)

    # -- serialization
    def to_json(self) -> dict:
        def section(kind, names, render):
            out = {}
            for n in names:
                ref = self.refs.get((kind, n))
                out[n] = {"file": ref} if ref else render(n)
            return out

        obj = {
            "settings": self.settings,
            "algebras": section("algebras", [n for n in self.algebras if n not in self.inline_algebras],
                                lambda n: algebra_to_json(self.algebras[n])),
            "modules": section("modules", self.modules,
                               lambda n: module_to_json(self.modules[n], self._algebra_ref(n))),
            "maps": section("maps", self.maps, lambda n: map_to_json(self.maps[n], *self.map_ends[n])),
        }
        if self.documented:
            obj["documented"] = self.documented
        return obj

    def _algebra_ref(self, module_name):
        aname = self.module_algebra[module_name]
        return algebra_to_json(self.algebras[aname]) if aname in self.inline_algebras else aname

    def dumps(self) -> str:
        return dumps(self.to_json())

    def write_references(self, base: Path):
        """Write referenced member files next to ``base`` (canonical form)."""
        for (kind, n), rel in self.refs.items():
            if kind == "algebras":
                obj = algebra_to_json(self.algebras[n])
            elif kind == "modules":
                obj = module_to_json(self.modules[n], self._algebra_ref(n))
            else:
                obj = map_to_json(self.maps[n], *self.map_ends[n])
            p = base / rel
            p.parent.mkdir(parents=True, exist_ok=True)
            p.write_text(dumps(obj), encoding="utf-8")


def _resolve(entry, base: Path | None, where: str):
    if isinstance(entry, dict) and set(entry) == {"file"}:
        if base is None:
            raise ParseError(f"{where}: file reference without a base directory")
        p = base / entry["file"]
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"{where}: cannot read {entry['file']!r} ({exc.strerror})") from exc
        return _loads(text, str(p)), entry["file"]
    return entry, None


def parse_workspace_text(text: str, base: Path | None = None, where: str = "<workspace>",
                         overrides: dict | None = None, validate: bool = True) -> Workspace:
    raw = _loads(text, where)
    if not isinstance(raw, dict):
        raise ParseError(f"{where}: top level must be an object")
    unknown = set(raw) - {"settings", "algebras", "modules", "maps", "documented"}
    if unknown:
        raise ParseError(f"{where}: unknown sections {sorted(unknown)}")
    ws = Workspace(path=None)
    # keep the file's settings verbatim so dumping reproduces it; defaults apply on read
    ws.settings = dict(raw.get("settings", {}))
    for k, v in (overrides or {}).items():
        if v is not None:
            ws.settings[k] = v
    ws.documented = raw.get("documented", {})
    try:
        field = ws.field
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from exc
    max_override = (overrides or {}).get("max_degree")

    for name, entry in raw.get("algebras", {}).items():
        obj, ref = _resolve(entry, base, f"algebras.{name}")
        if ref:
            ws.refs[("algebras", name)] = ref
        try:
            A = algebra_from_json(obj, field, max_override, f"algebras.{name}")
        except MalformedTable as exc:
            raise ValidationError(f"algebras.{name}: {exc}") from exc
        if validate:
            rep = validate_algebra(A, up_to=min(A.max_degree, LOAD_CHECK_DEGREE))
            if not rep.ok:
                raise ValidationError(f"algebra {name!r} is invalid", rep)
        ws.add_algebra(name, A)

    for name, entry in raw.get("modules", {}).items():
        obj, ref = _resolve(entry, base, f"modules.{name}")
        if ref:
            ws.refs[("modules", name)] = ref
        aref = obj.get("algebra") if isinstance(obj, dict) else None
        if isinstance(aref, str):
            if aref not in ws.algebras:
                raise ParseError(f"modules.{name}: dangling algebra reference {aref!r}")
            aname = aref
        elif isinstance(aref, dict):
            aname = f"{name}.algebra"
            ws.add_algebra(aname, algebra_from_json(aref, field, max_override, aname))
            ws.inline_algebras.add(aname)
        else:
            raise ParseError(f"modules.{name}: missing algebra")
        M = module_from_json(obj, ws.algebras[aname], f"modules.{name}")
        if validate:
            rep = validate_module(M)
            if not rep.ok:
                raise ValidationError(f"module {name!r} is invalid", rep)
        ws.add_module(name, M, aname)

    for name, entry in raw.get("maps", {}).items():
        obj, ref = _resolve(entry, base, f"maps.{name}")
        if ref:
            ws.refs[("maps", name)] = ref
        try:
            src, tgt = obj["source"], obj["target"]
            r = int(obj.get("map_degree", 0))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"maps.{name}: needs source and target") from exc
        for end in (src, tgt):
            if end not in ws.modules:
                raise ParseError(f"maps.{name}: dangling module reference {end!r}")
        M, N = ws.modules[src], ws.modules[tgt]
        if M.algebra is not N.algebra:
            raise ParseError(f"maps.{name}: source and target over different algebras")
        try:
            f = ModuleMap(M, N, r, _matrix_from_json(M.algebra, obj.get("entries", []), f"maps.{name}.entries"))
        except ValueError as exc:
            raise ParseError(f"maps.{name}: {exc}") from exc
        if validate:
            rep = check_map(f)
            if not rep.ok:
                raise ValidationError(f"map {name!r} is invalid", rep)
        ws.add_map(name, f, src, tgt)
    return ws


def parse_workspace(path, overrides: dict | None = None, validate: bool = True) -> Workspace:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    ws = parse_workspace_text(text, path.parent, str(path), overrides, validate)
    ws.path = path
    return ws


def corpus_dir() -> Path:
    return Path(__file__).parent / "corpus"


def resolve_target(target: str) -> Path:
    """A path to a ``.dgws`` file, or the name of a shipped corpus file."""
    p = Path(target)
    if p.suffix == ".dgws" or p.exists():
        return p
    shipped = corpus_dir() / f"{target}.dgws"
    if shipped.exists():
        return shipped
    raise ParseError(f"no workspace file or corpus entry named {target!r}")
