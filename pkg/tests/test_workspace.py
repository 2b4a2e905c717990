import json
import shutil

import pytest

from dgqs.errors import ParseError, ValidationError
from dgqs.filtration import cone_length, dg_free_class
from dgqs.homology import cohomology
from dgqs.invariants import ghost_length
from dgqs.module import mapping_cone
from dgqs.quillen_suslin import split_categorically_projective, split_semiprojective
from dgqs.workspace import corpus_dir, parse_workspace, parse_workspace_text, resolve_target

CORPUS = sorted(p.stem for p in corpus_dir().glob("*.dgws"))
VALID = [n for n in CORPUS if n != "badmodule"]


def test_corpus_is_shipped():
    assert {"koszul1", "koszul2", "koszul3", "badmodule", "exterior_refs"} <= set(CORPUS)


@pytest.mark.parametrize("name", VALID)
def test_round_trip_is_byte_identical(name, tmp_path):
    path = resolve_target(name)
    ws = parse_workspace(path)
    assert ws.dumps() == path.read_text(encoding="utf-8")
    ws.write_references(tmp_path)
    for (_, _), rel in ws.refs.items():
        assert (tmp_path / rel).read_bytes() == (path.parent / rel).read_bytes()


def test_references_resolve_like_inline():
    a = parse_workspace(resolve_target("exterior"))
    b = parse_workspace(resolve_target("exterior_refs"))
    assert a.modules["cone_y"].diff == b.modules["cone_y"].diff
    assert a.algebras["exterior"].max_degree == b.algebras["exterior"].max_degree


def test_dangling_file_reference(tmp_path):
    shutil.copy(resolve_target("exterior_refs"), tmp_path / "w.dgws")
    with pytest.raises(ParseError):
        parse_workspace(tmp_path / "w.dgws")


def test_dangling_algebra_reference():
    text = json.dumps({"modules": {"M": {"algebra": "nope", "generators": [{"name": "a", "degree": 0}]}}})
    with pytest.raises(ParseError):
        parse_workspace_text(text)


@pytest.mark.parametrize("text", ["{", "[]", '{"extra": 1}', '{"settings": {"field": "fp:4"}}'])
def test_malformed_input(text):
    with pytest.raises(ParseError):
        parse_workspace_text(text)


def test_badmodule_is_rejected_with_witness():
    with pytest.raises(ValidationError) as info:
        parse_workspace(resolve_target("badmodule"))
    kind, witness, detail = info.value.report.violations[0]
    assert kind == "d_squared" and witness == ("w", "v")
    ws = parse_workspace(resolve_target("badmodule"), validate=False)
    assert ws.documented["bad"]["witness"] == list(witness)


def test_missing_file():
    with pytest.raises(ParseError):
        resolve_target("no_such_entry")


def _documented(name):
    ws = parse_workspace(resolve_target(name))
    return ws, ws.window


@pytest.mark.parametrize("name", ["koszul1", "koszul2", "koszul3", "free", "conetrivial",
                                  "a1cone", "exterior", "exterior_refs"])
def test_documented_invariants(name):
    ws, window = _documented(name)
    for mod, doc in ws.documented.items():
        M = ws.modules[mod]
        rep = ghost_length(M, window)
        assert rep.ghost_length == doc["ghost_length"]
        assert rep.level == doc["level"]
        assert cone_length(M, window).value == doc["cone_length"]
        if "cohomology_dims" in doc:
            H = cohomology(M, window)
            assert {str(d): v for d, v in H.dims.items()} == doc["cohomology_dims"]
        if "fixed_basis_class" in doc:
            assert dg_free_class(M).upper == doc["fixed_basis_class"]


def test_documented_cone():
    ws, window = _documented("conex")
    for mname, doc in ws.documented.items():
        C = mapping_cone(ws.maps[mname]).module
        H = cohomology(C, window)
        assert {str(d): v for d, v in H.dims.items()} == doc["cone_cohomology_dims"]


def test_documented_splits():
    from dgqs.quillen_suslin import Projector
    ws, window = _documented("split")
    _, pi = ws.map("pi")
    r = split_semiprojective(pi.source, Projector(pi), window)
    assert r.module.size == ws.documented["pi"]["summand_generators"]
    assert r.filtration.length == ws.documented["pi"]["summand_filtration_length"]
    ws, window = _documented("catsplit")
    _, pi = ws.map("pi")
    c = split_categorically_projective(pi.source, Projector(pi), window)
    assert len(c.eps) == ws.documented["pi"]["pairs"]


def test_overrides_apply():
    ws = parse_workspace(resolve_target("koszul1"), {"window": [0, 4], "field": "fp:7"})
    assert ws.window == (0, 4)
    assert ws.field.spec == "fp:7"
