"""Command line front end: ``dgqs <command> <target> [options]``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .algebra import validate_algebra
from .errors import DGError, ParseError
from .field import Field
from .filtration import NotFilterable, cone_length, dg_free_class, find_filtration, minimize
from .homology import cohomology
from .invariants import ghost_dimension, ghost_length
from .module import check_map, direct_sum, mapping_cone, suspend, validate_module
from .quillen_suslin import Projector, split_categorically_projective, split_semiprojective
from .workspace import Workspace, dumps, parse_workspace, resolve_target

COMMANDS = ["validate", "cohomology", "minimize", "filtration", "cone-length", "ghost-length",
            "level", "ghost-dim", "split", "catsplit", "cone", "suspend", "sum"]


def _window(text: str):
    try:
        lo, hi = text.split(":")
        return [int(lo), int(hi)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like LO:HI, got {text!r}")


def _field(text: str) -> str:
    try:
        return Field.parse(text).spec
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=_field, help="q or fp:<prime>")
    common.add_argument("--max-degree", type=int, help="algebra degree cap")
    common.add_argument("--window", type=_window, help="inspection window LO:HI")
    common.add_argument("--budget-generators", type=int, help="generator budget for ghost towers")
    common.add_argument("--seed", type=int, help="recorded in certificates")
    common.add_argument("--out", default="dgqs-out", help="certificate directory")
    common.add_argument("--module", action="append", help="module name (repeat for sum)")
    common.add_argument("--map", dest="map_name", help="map name")

    p = argparse.ArgumentParser(prog="dgqs", description="Exact DG module computations.")
    p.add_argument("--version", action="version", version=f"dgqs {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS:
        sp = sub.add_parser(cmd, parents=[common])
        if cmd == "ghost-dim":
            sp.add_argument("targets", nargs="*")
        else:
            sp.add_argument("target")
        if cmd == "suspend":
            sp.add_argument("--shift", type=int, default=1)
    return p


def _load(target: str, args, validate: bool = True) -> Workspace:
    overrides = {
        "field": args.field,
        "max_degree": args.max_degree,
        "window": args.window,
        "budget_generators": args.budget_generators,
        "seed": args.seed,
    }
    return parse_workspace(resolve_target(target), overrides, validate)


def _cert(args, name: str, payload: dict, target: str) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = Path(target).stem if target else "empty"
    path = out / f"{stem}-{name}.json"
    doc = {"command": args.command, "target": target, "seed": args.seed or 0, **payload}
    path.write_text(dumps(doc), encoding="utf-8")
    return path


def _entries(f) -> list:
    return [{"row": f.target.names[i], "col": f.source.names[j], "entry": repr(a)}
            for (i, j), a in f.entries.items()]


def _module_doc(M) -> dict:
    return {"generators": [[n, d] for n, d in zip(M.names, M.degrees)],
            "differential": [{"row": M.names[i], "col": M.names[j], "entry": repr(a)}
                             for (i, j), a in M.diff.items()]}


def _one_module(ws, args):
    return ws.module(args.module[0] if args.module else None)


def _write_ws(args, name: str, ws_src: Workspace, modules: dict, maps: dict | None = None) -> Path:
    """Write a workspace holding new modules over the source workspace's algebras."""
    ws = Workspace(settings=dict(ws_src.settings))
    for aname, A in ws_src.algebras.items():
        if aname not in ws_src.inline_algebras:
            ws.add_algebra(aname, A)
    for mname, (M, aname) in modules.items():
        ws.add_module(mname, M, aname)
    for fname, (f, s, t) in (maps or {}).items():
        ws.add_map(fname, f, s, t)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{name}.dgws"
    path.write_text(ws.dumps(), encoding="utf-8")
    return path


def _algebra_name(ws, M):
    for n, A in ws.algebras.items():
        if A is M.algebra:
            return n
    raise ParseError("module algebra not found in workspace")


# -- commands ---------------------------------------------------------------------

def cmd_validate(args) -> int:
    ws = _load(args.target, args, validate=False)
    bad = 0
    report = {}
    for n, A in ws.algebras.items():
        rep = validate_algebra(A)
        report[f"algebra:{n}"] = rep.as_dict()
        bad += not rep.ok
        print(f"algebra {n}: {'ok' if rep.ok else 'INVALID'} (checked to degree {rep.checked_up_to})")
    for n, M in ws.modules.items():
        rep = validate_module(M)
        report[f"module:{n}"] = rep.as_dict()
        bad += not rep.ok
        extra = ", minimal" if rep.notes.get("minimal") else ""
        print(f"module {n}: {'ok' + extra if rep.ok else 'INVALID'}")
        for kind, wit, detail in rep.violations:
            print(f"  {kind} at {wit}: {detail}")
    for n, f in ws.maps.items():
        rep = check_map(f)
        report[f"map:{n}"] = rep.as_dict()
        bad += not rep.ok
        chain = " chain map" if rep.notes.get("chain_map") else ""
        print(f"map {n}: {'ok' + chain if rep.ok else 'INVALID'}")
    path = _cert(args, f"validate-{Path(args.target).stem}", {"reports": report}, args.target)
    print(f"certificate: {path}")
    return 3 if bad else 0


def cmd_cohomology(args) -> int:
    ws = _load(args.target, args)
    name, M = _one_module(ws, args)
    table = cohomology(M, ws.window)
    print(table.to_text())
    path = _cert(args, f"cohomology-{name}", {"module": name, **table.as_dict()}, args.target)
    print(f"certificate: {path}")
    return 0


def cmd_minimize(args) -> int:
    ws = _load(args.target, args)
    name, M = _one_module(ws, args)
    mm = minimize(M, ws.window)
    G = mm.module
    print(f"minimal model of {name}: {G.size} generators "
          f"({', '.join(f'{n}:{d}' for n, d in zip(G.names, G.degrees)) or 'zero module'})")
    print(f"cancellations: {len(mm.log)}; H(p) bijective on window {list(ws.window)}: {mm.certified}")
    payload = {"module": name, "window": list(ws.window), "minimal_model": _module_doc(G),
               "cancellations": mm.log, "p": _entries(mm.p), "iota": _entries(mm.iota),
               "homotopy": _entries(mm.homotopy), "certified": mm.certified}
    path = _cert(args, f"minimize-{name}", payload, args.target)
    print(f"certificate: {path}")
    return 0


def cmd_filtration(args) -> int:
    ws = _load(args.target, args)
    name, M = _one_module(ws, args)
    filt = find_filtration(M)
    if isinstance(filt, NotFilterable):
        print(f"{name}: not filterable over this basis; cycle {' -> '.join(filt.cycle)}")
        payload = {"module": name, "filterable": False, "cycle": list(filt.cycle)}
    else:
        bounds = dg_free_class(M)
        for n, lv in zip(M.names, filt.levels):
            print(f"  {n}: level {lv}")
        print(f"fixed-basis DG free class: {filt.length}")
        payload = {"module": name, "filterable": True, "levels": list(filt.levels),
                   "length": filt.length, "bounds": [bounds.lower, bounds.upper]}
    path = _cert(args, f"filtration-{name}", payload, args.target)
    print(f"certificate: {path}")
    return 0


def cmd_cone_length(args) -> int:
    ws = _load(args.target, args)
    name, M = _one_module(ws, args)
    res = cone_length(M, ws.window)
    print(res.value)
    path = _cert(args, f"cone-length-{name}", {"module": name, "cone_length": res.value,
                                                **res.certificate}, args.target)
    print(f"certificate: {path}")
    return 0


def _ghost(args, key: str) -> int:
    ws = _load(args.target, args)
    name, M = _one_module(ws, args)
    rep = ghost_length(M, ws.window, int(ws.setting("budget_generators")))
    print(rep.ghost_length if key == "ghost-length" else rep.level)
    path = _cert(args, f"{key}-{name}", {"module": name, **rep.as_dict()}, args.target)
    print(f"certificate: {path}")
    return 0


def cmd_ghost_length(args) -> int:
    return _ghost(args, "ghost-length")


def cmd_level(args) -> int:
    return _ghost(args, "level")


def cmd_ghost_dim(args) -> int:
    corpus = []
    window, budget = None, 512
    for t in args.targets:
        ws = _load(t, args)
        window = ws.window
        budget = int(ws.setting("budget_generators"))
        names = args.module or list(ws.modules)
        corpus.extend((f"{Path(t).stem}:{n}", ws.modules[n]) for n in names)
    res = ghost_dimension(corpus, window or (0, 0), budget)
    print(f"{res.display} (lower bound)")
    path = _cert(args, "ghost-dim", res.as_dict(), ",".join(args.targets))
    print(f"certificate: {path}")
    return 0


def _projector_inputs(ws, args):
    fname, f = ws.map(args.map_name)
    if args.module:
        _, F = ws.module(args.module[0])
        if f.source is not F:
            raise ParseError(f"map {fname!r} is not an endomorphism of {args.module[0]!r}")
    return fname, f.source, Projector(f)


def cmd_split(args) -> int:
    ws = _load(args.target, args)
    fname, F, pi = _projector_inputs(ws, args)
    res = split_semiprojective(F, pi, ws.window)
    P = res.module
    print(f"summand: {P.size} generators, filtration length {res.filtration.length}")
    for n, d, lv in zip(P.names, P.degrees, res.filtration.levels):
        print(f"  {n}: degree {d}, level {lv}")
    payload = {"map": fname, "summand": _module_doc(P), "levels": list(res.filtration.levels),
               "inc": _entries(res.inc), "proj": _entries(res.proj), "layers": res.layer_log,
               "verification": res.transcript}
    path = _cert(args, f"split-{fname}", payload, args.target)
    print(f"certificate: {path}")
    return 0


def cmd_catsplit(args) -> int:
    ws = _load(args.target, args)
    fname, F, pi = _projector_inputs(ws, args)
    res = split_categorically_projective(F, pi, ws.window)
    from .homology import _element_repr
    pairs = [_element_repr(F, e) for _, e in res.eps]
    print(f"categorically free summand: {len(res.eps)} pairs")
    for (d, _), s in zip(res.eps, pairs):
        print(f"  eps = {s} (degree {d})")
    payload = {"map": fname, "eps": [{"degree": d, "element": s} for (d, _), s in zip(res.eps, pairs)],
               "summand": _module_doc(res.module), "inc": _entries(res.inc), "proj": _entries(res.proj),
               "verification": {k: (v if k != "dims" else {str(d): n for d, n in v.items()})
                                for k, v in res.transcript.items()}}
    path = _cert(args, f"catsplit-{fname}", payload, args.target)
    print(f"certificate: {path}")
    return 0


def cmd_cone(args) -> int:
    ws = _load(args.target, args)
    fname, f = ws.map(args.map_name)
    cone = mapping_cone(f)
    C = cone.module
    aname = _algebra_name(ws, C)
    print(f"cone({fname}): {C.size} generators")
    path = _write_ws(args, f"cone-{fname}", ws, {f"cone_{fname}": (C, aname)})
    print(f"workspace: {path}")
    return 0


def cmd_suspend(args) -> int:
    ws = _load(args.target, args)
    name, M = _one_module(ws, args)
    S = suspend(M, args.shift)
    print(f"suspension by {args.shift}: degrees {list(S.degrees)}")
    path = _write_ws(args, f"suspend-{name}", ws, {f"{name}_s{args.shift}": (S, _algebra_name(ws, M))})
    print(f"workspace: {path}")
    return 0


def cmd_sum(args) -> int:
    ws = _load(args.target, args)
    names = args.module or list(ws.modules)
    mods = [ws.module(n)[1] for n in names]
    S = direct_sum(*mods).module
    print(f"sum of {', '.join(names)}: {S.size} generators")
    path = _write_ws(args, "sum-" + "-".join(names), ws, {"_".join(names): (S, _algebra_name(ws, mods[0]))})
    print(f"workspace: {path}")
    return 0


HANDLERS = {
    "validate": cmd_validate, "cohomology": cmd_cohomology, "minimize": cmd_minimize,
    "filtration": cmd_filtration, "cone-length": cmd_cone_length, "ghost-length": cmd_ghost_length,
    "level": cmd_level, "ghost-dim": cmd_ghost_dim, "split": cmd_split, "catsplit": cmd_catsplit,
    "cone": cmd_cone, "suspend": cmd_suspend, "sum": cmd_sum,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return HANDLERS[args.command](args)
    except DGError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        report = getattr(exc, "report", None)
        if report is not None:
            for kind, wit, detail in report.violations:
                print(f"  {kind} at {wit}: {detail}", file=sys.stderr)
        if getattr(exc, "lower", None) is not None:
            print(f"  bounds: {exc.lower} .. {exc.upper}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # noqa: BLE001 - stable exit status for anything unexpected
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
