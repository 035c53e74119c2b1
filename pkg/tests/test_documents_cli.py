import json
import random

import pytest
from click.testing import CliRunner

from curvecomplex import documents as docs
from curvecomplex.cli import main
from curvecomplex.errors import DocumentError
from curvecomplex.fixtures import FIXTURES, random_family, surface
from curvecomplex.multicurve import GenericFamily, validate
from curvecomplex.orbit_enum import catalogue, enumerate_orbits
from curvecomplex.orbit_types import canonicalize, orbit_type_of
from curvecomplex.stabilizers_actions import stabilizer_report
from curvecomplex.surface_model import SurfaceSignature, Triangulation


def _write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(docs.dumps(doc), encoding="utf-8")
    return str(path)


def _run(*args):
    res = CliRunner().invoke(main, list(args))
    return res.exit_code, res.output


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_round_trips_on_fixtures(name):
    t = surface(FIXTURES[name])
    fam = random_family(t, random.Random(3), 5)
    for doc in (docs.surface_doc(t), docs.multicurve_doc(fam.union), docs.family_doc(fam)):
        again = docs.loads(docs.dumps(doc))
        assert again == doc
    assert docs.load_surface(docs.surface_doc(t)) == t
    assert docs.load_multicurve(docs.multicurve_doc(fam.union)) == fam.union
    assert docs.load_family(docs.family_doc(fam)) == fam
    if fam.r:
        ot = orbit_type_of(fam)
        back = docs.load_orbit_type(docs.loads(docs.dumps(docs.orbit_type_doc(ot))))
        assert canonicalize(back) == canonicalize(ot)
        rep = docs.report_doc(stabilizer_report(ot))
        assert docs.loads(docs.dumps(rep)) == rep


def test_custom_triangulation_reference():
    t = Triangulation((4, 5, 3, 2, 0, 1), (None,) * 6)
    ref = docs.surface_ref(t)
    assert docs.read_surface_ref(ref) == t
    assert "builtin" in docs.surface_ref(surface(SurfaceSignature(1, 1, 0)))


def test_catalogue_documents_round_trip():
    for sig in (SurfaceSignature(2, 0, 0), SurfaceSignature(0, 5, 1)):
        doc = docs.catalogue_doc(catalogue(sig))
        assert docs.loads(docs.dumps(doc)) == doc
        for rank in doc["payload"]["ranks"]:
            for tp in rank["types"]:
                ot = docs.load_orbit_type(docs.document("orbit_type", tp))
                assert str(canonicalize(ot)) == tp["code"]


@pytest.mark.parametrize("text", ["", "[]", '{"kind": "surface"}',
                                  '{"kind": "surface", "version": "9", "payload": {}}',
                                  '{"kind": "nope", "version": "1", "payload": {}}'])
def test_loads_rejects_malformed(text):
    with pytest.raises(DocumentError):
        docs.loads(text)


def test_loads_checks_expected_kind(torus):
    doc = docs.dumps(docs.surface_doc(torus))
    with pytest.raises(DocumentError):
        docs.loads(doc, "family")


def test_cli_orbits():
    code, out = _run("orbits", "2", "0", "0")
    assert code == 0
    doc = json.loads(out)
    assert doc["payload"]["total"] == 6
    assert [x["count"] for x in doc["payload"]["ranks"]] == [2, 2, 2]
    assert json.loads(_run("orbits", "1", "0", "0")[1])["payload"]["total"] == 1
    assert json.loads(_run("orbits", "0", "3", "0")[1])["payload"]["total"] == 0
    sliced = json.loads(_run("orbits", "2", "0", "0", "1")[1])
    assert [x["r"] for x in sliced["payload"]["ranks"]] == [1]
    assert _run("orbits", "2", "x", "0")[0] == 2
    assert _run("orbits", "2", "-1", "0")[0] == 2


def test_cli_output_is_byte_identical(tmp_path, g2_pair):
    a1, a4 = g2_pair
    f = _write(tmp_path, "a4.json", docs.multicurve_doc(a4))
    for args in (("orbits", "0", "5", "1"), ("classify", f), ("stabilizer", f), ("chain", "2", "0", "0")):
        first, second = _run(*args), _run(*args)
        assert first[0] == 0 and first == second


def test_cli_classify(tmp_path, torus, g2_pair):
    f = _write(tmp_path, "a.json", docs.multicurve_doc(validate(torus, (1, 0, 1))))
    code, out = _run("classify", f)
    assert code == 0
    p = json.loads(out)["payload"]
    assert p["nodes"] == [{"genus": 0, "punctures": 0, "labels": []}] and p["edges"] == [[0, 0]]
    _, a4 = g2_pair
    p = json.loads(_run("classify", _write(tmp_path, "a4.json", docs.multicurve_doc(a4)))[1])["payload"]
    assert len(p["nodes"]) == 2
    bad = docs.document("multicurve", {"surface": {"builtin": "g1"}, "weights": [1, 0, 0]})
    code, out = _run("classify", _write(tmp_path, "bad.json", bad))
    assert code == 1 and json.loads(out)["error"] == "ParityViolation"


def test_cli_intersect_twist_equiv(tmp_path, torus):
    a, b = validate(torus, (1, 0, 1)), validate(torus, (1, 1, 0))
    fa = _write(tmp_path, "a.json", docs.multicurve_doc(a))
    fb = _write(tmp_path, "b.json", docs.multicurve_doc(b))
    assert _run("intersect", fa, fb) == (0, "1\n")
    code, out = _run("twist", "--along", fa, "--power", "0", fb)
    assert code == 0 and docs.load_multicurve(json.loads(out)) == b
    code, out = _run("twist", "--along", fa, "--power", "2", fb)
    twisted = docs.load_multicurve(json.loads(out))
    assert twisted != b
    code, out = _run("equiv", fa, fb)
    assert code == 0 and json.loads(out)["payload"]["equivalent"] is True
    assert _run("--step-budget", "1", "twist", "--along", fa, "--power", "5", fb)[0] == 1
    assert _run("intersect", fa, str(tmp_path / "missing.json"))[0] == 2


def test_cli_complete_stabilizer_large_action(tmp_path, torus, g2_pair):
    a1, a4 = g2_pair
    t = a1.surface
    f1 = _write(tmp_path, "a1.json", docs.family_doc(GenericFamily(t, (a1,))))
    code, out = _run("complete", f1)
    assert code == 0 and len(json.loads(out)["payload"]["components"]) == 3
    top = enumerate_orbits(SurfaceSignature(2, 0, 0), 3)[0]
    ft = _write(tmp_path, "ot.json", docs.orbit_type_doc(top))
    p = json.loads(_run("stabilizer", ft)[1])["payload"]
    assert (p["cub_order"], p["virtually_abelian"]) == (48, True)
    fa = _write(tmp_path, "ta.json", docs.multicurve_doc(validate(torus, (1, 0, 1))))
    fb = _write(tmp_path, "tb.json", docs.multicurve_doc(validate(torus, (1, 1, 0))))
    code, out = _run("large-action", fa, fb, "-n", "4")
    p = json.loads(out)["payload"]
    assert code == 0 and p["verified"] and len(p["images"]) == 4
    code, out = _run("large-action", fa, fa, "-n", "4")
    assert code == 1 and json.loads(out)["error"] == "FacePrecondition"
    fz = _write(tmp_path, "torus.json", docs.family_doc(GenericFamily(torus, ())))
    assert _run("complete", fz)[0] == 1


def test_cli_chain():
    code, out = _run("chain", "2", "0", "0")
    assert code == 0
    p = json.loads(out)["payload"]
    assert p["type"] == "chain" and len(p["beta"]) == 2 and len(p["alpha"]) == 1
    code, out = _run("chain", "1", "0", "0")
    assert code == 1 and json.loads(out)["error"] == "NoChain"
