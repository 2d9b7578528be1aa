import json
from fractions import Fraction

import jsonschema
import pytest
from hypothesis import given
from hypothesis import strategies as st

from diagcat import io
from diagcat.fixtures import (fixture_document, fixture_names, load_bundled,
                              localization_corpus, random_fixture)
from diagcat.simplicial import random_complex, random_cover
from diagcat.torsor import groups_up_to, torsor_of_group

NAMES = fixture_names()
SCHEMA = json.loads(io.schema_path().read_text())


def reemit(doc):
    fmt = doc["format"]
    parsed = io.parse_document(doc)
    if fmt == "diagcat/diagram":
        D, reps, P = parsed
        return io.emit_diagram(D, reps, P)
    if fmt == "diagcat/torsor":
        return io.emit_torsor(parsed)
    if fmt == "diagcat/complex":
        X, Y, cover = parsed
        return io.emit_complex(X, Y if "subcomplex" in doc else None, cover)
    if fmt == "diagcat/pairing":
        A, pts = parsed
        return io.emit_pairing(A, pts)
    mats, gens = parsed
    return io.emit_monoid(mats, gens)


@pytest.mark.parametrize("name", NAMES)
def test_round_trip_every_fixture(name):
    doc = fixture_document(name)
    assert reemit(doc) == doc
    assert reemit(json.loads(json.dumps(doc))) == doc


@pytest.mark.parametrize("name", NAMES)
def test_bundled_files_match_generated(name):
    assert load_bundled(name) == fixture_document(name)


@pytest.mark.parametrize("name", NAMES)
def test_fixtures_conform_to_schema(name):
    jsonschema.validate(fixture_document(name), SCHEMA)


def test_structural_equality_after_parse():
    for name, D, P, T, _ in localization_corpus():
        D2, reps, P2 = io.parse_diagram(io.emit_diagram(D, [T], P))
        assert D2 == D and P2 == P and reps == [T]


@given(st.integers(0, 100_000))
def test_round_trip_random_diagrams(seed):
    D, T1, T2 = random_fixture(seed)
    doc = json.loads(json.dumps(io.emit_diagram(D, [T1, T2])))
    D2, reps, P = io.parse_diagram(doc)
    assert D2 == D and reps == [T1, T2] and P is None


@given(st.integers(0, 100_000))
def test_round_trip_random_complexes(seed):
    X = random_complex(seed)
    cover = random_cover(X, seed, 2)
    X2, Y2, cover2 = io.parse_complex(io.emit_complex(X, cover=cover))
    assert X2 == X and cover2 == cover


def test_round_trip_torsors():
    for G in groups_up_to(8):
        X = torsor_of_group(G)
        assert io.parse_torsor(io.emit_torsor(X)) == X


def test_one_third_is_exact():
    A, _ = io.parse_pairing({"format": "diagcat/pairing", "version": 1, "gram": [["1/3"]]})
    assert A[0, 0] == Fraction(1, 3)


@pytest.mark.parametrize("bad", ["0.5", 0.5, True, "1/0", None])
def test_decimals_and_junk_rejected(bad):
    doc = {"format": "diagcat/pairing", "version": 1, "gram": [[1, 0], [0, bad]]}
    with pytest.raises(io.SchemaError) as exc:
        io.parse_pairing(doc)
    assert exc.value.errors[0][0] == "/gram/1/1"
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(doc, SCHEMA)


def test_errors_collected_with_pointers():
    doc = fixture_document("circle")
    doc["representations"][0]["maps"]["rot1"] = [["1", "x"]]
    doc["edges"].append({"id": "ghost", "src": "H0", "dst": "nowhere"})
    with pytest.raises(io.SchemaError) as exc:
        io.parse_diagram(doc)
    ptrs = [p for p, _ in exc.value.errors]
    assert any(p.startswith("/edges/") for p in ptrs)
    assert any(p.startswith("/representations/0/maps/rot1") for p in ptrs)


def test_wrong_format_and_version():
    with pytest.raises(io.SchemaError) as exc:
        io.parse_document({"format": "diagcat/unknown", "version": 1})
    assert exc.value.errors[0][0] == "/format"
    doc = fixture_document("torsor-z3")
    doc["version"] = 2
    with pytest.raises(io.SchemaError) as exc:
        io.parse_torsor(doc)
    assert exc.value.errors[0][0] == "/version"
    with pytest.raises(io.SchemaError):
        io.parse_document(fixture_document("torsor-z3"), kind="diagram")


def test_torsor_table_entries_checked():
    doc = io.emit_torsor(torsor_of_group(groups_up_to(2)[1]))
    doc["table"][1][0][1] = 7
    with pytest.raises(io.SchemaError) as exc:
        io.parse_torsor(doc)
    assert exc.value.errors[0][0] == "/table/1/0/1"


def test_malformed_json_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "format": "diagcat/torsor",\n  "version": 1,,\n}')
    with pytest.raises(io.InputError) as exc:
        io.load_json(p)
    assert f"{p}:3:16: malformed JSON" in str(exc.value)


def test_missing_file():
    with pytest.raises(io.InputError):
        io.load_json("/nonexistent/file.json")


def test_subcomplex_must_be_contained():
    doc = {"format": "diagcat/complex", "version": 1, "simplices": [[0, 1]],
           "subcomplex": [[2]]}
    with pytest.raises(io.SchemaError) as exc:
        io.parse_complex(doc)
    assert exc.value.errors[0][0] == "/subcomplex"
