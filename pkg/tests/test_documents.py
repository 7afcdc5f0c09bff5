import json

import pytest

from poissonalg.catalog import FAMILIES, draw_instances
from poissonalg.documents import (DocumentError, load_json, matrix_from_doc, matrix_to_doc,
                                  quadratic_from_doc, spec_from_doc, spec_to_doc)


@pytest.mark.parametrize("family", FAMILIES)
def test_spec_round_trip(family):
    inst = draw_instances(5, 1, {"affine": 3, "matrices": 2, "symplectic_euclidean": 2,
                                 "odd_euclidean": 1, "symmetric": 2, "antisymmetric": 3},
                          [family])[0]
    doc = spec_to_doc(inst.spec, inst.torus)
    spec, torus, mode = spec_from_doc(json.loads(json.dumps(doc)))
    assert spec == inst.spec
    assert torus == inst.torus
    assert mode == "polynomial"
    assert spec_to_doc(spec, torus) == doc


def _doc():
    return {"schema": 1, "n": 2, "steps": [
        {"alpha": {}, "delta": {}},
        {"alpha": {"1": [{"exponents": [1, 0], "coefficient": "-1"}]},
         "delta": {"1": [{"exponents": [0, 0], "coefficient": "1"}]}, "s": "1"}]}


def test_minimal_doc_loads():
    spec, torus, _ = spec_from_doc(_doc())
    assert spec.n == 2 and torus is None and spec.s[1] == 1


@pytest.mark.parametrize("mutate, location", [
    (lambda d: d.update(n=0), "n"),
    (lambda d: d["steps"].pop(), "steps"),
    (lambda d: d["steps"][1]["alpha"].update({"2": []}), "steps[1].alpha.2"),
    (lambda d: d["steps"][1]["delta"]["1"][0].update(coefficient="x"), "steps[1].delta.1[0].coefficient"),
    (lambda d: d["steps"][1]["delta"]["1"][0].update(exponents=[0]), "steps[1].delta.1"),
    (lambda d: d["steps"][1]["delta"]["1"][0].update(exponents=[-1, 0]), "steps[1].delta.1"),
    (lambda d: d["steps"][1].update(s="1/0"), "steps[1].s"),
    (lambda d: d.update(mode="tropical"), "mode"),
    (lambda d: d.update(schema=7), "schema"),
])
def test_malformed_docs_report_location(mutate, location):
    doc = _doc()
    mutate(doc)
    with pytest.raises(DocumentError) as exc:
        spec_from_doc(doc)
    assert exc.value.location == location


def test_matrix_docs():
    m = matrix_from_doc({"n": 2, "entries": [["0", "2*t - 1/2"], ["-2*t + 1/2", 0]]})
    assert not m.is_rational()
    assert matrix_from_doc(matrix_to_doc(m)) == m
    q = quadratic_from_doc({"n": 2, "entries": [["0", "3/4"], ["-3/4", "0"]]})
    assert q.n == 2
    with pytest.raises(DocumentError):
        quadratic_from_doc({"n": 2, "entries": [["0", "t"], ["-t", "0"]]})
    with pytest.raises(DocumentError):
        matrix_from_doc({"n": 2, "entries": [["0", "1"]]})
    with pytest.raises(DocumentError):
        matrix_from_doc({"n": 2, "entries": [["0", "1"], ["1", "0"]]})


def test_load_json_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2,')
    with pytest.raises(DocumentError) as exc:
        load_json(str(bad))
    assert "bad.json:1:" in exc.value.location
    with pytest.raises(DocumentError):
        load_json(str(tmp_path / "missing.json"))
