"""JSON documents exchanged by the command line tool.

Every document is ``{"kind": ..., "version": ..., "payload": ...}``.  Emission
is canonical (sorted keys, fixed indentation), so equal inputs give
byte-identical output and ``emit(load(doc)) == doc`` for emitted documents.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import CurveComplexError, DocumentError
from .multicurve import GenericFamily, NormalCoordinates, as_generic_family, family_from_curves, validate
from .orbit_enum import Catalogue
from .orbit_types import CanonicalCode, Node, OrbitType, canonicalize
from .surface_model import ExteriorLabel, SurfaceSignature, Triangulation, signature_of

VERSION = "1"
KINDS = ("surface", "multicurve", "family", "orbit_type", "catalogue", "report", "certificate")


def document(kind: str, payload: Any) -> dict:
    if kind not in KINDS:
        raise DocumentError(f"unknown document kind {kind!r}")
    return {"kind": kind, "version": VERSION, "payload": payload}


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str, expect=None) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"not valid JSON: {e}") from None
    if not isinstance(doc, dict) or set(doc) != {"kind", "version", "payload"}:
        raise DocumentError("document needs exactly the keys kind, version, payload")
    if doc["version"] != VERSION:
        raise DocumentError(f"unsupported document version {doc['version']!r}")
    if doc["kind"] not in KINDS:
        raise DocumentError(f"unknown document kind {doc['kind']!r}")
    if expect is not None and doc["kind"] not in ((expect,) if isinstance(expect, str) else expect):
        raise DocumentError(f"expected a {expect} document, got {doc['kind']}")
    return doc


def _need(payload: dict, key: str):
    if not isinstance(payload, dict) or key not in payload:
        raise DocumentError(f"payload is missing {key!r}")
    return payload[key]


def _int_list(x, what: str) -> list:
    if not isinstance(x, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in x):
        raise DocumentError(f"{what} must be a list of integers")
    return x


# ---------------------------------------------------------------------------
# surfaces


def sig_list(sig: SurfaceSignature) -> list:
    return [sig.genus, sig.punctures, sig.boundary]


def surface_ref(t: Triangulation):
    from .fixtures import alias_of, surface

    sig = signature_of(t)
    try:
        if surface(sig) == t:
            return {"builtin": alias_of(sig)}
    except CurveComplexError:
        pass
    labels = [lab.index if isinstance(lab, ExteriorLabel) else None for lab in t.labels]
    return {"triangulation": {"glue": list(t.glue), "labels": labels, "ghost": t.ghost}}


def read_surface_ref(ref) -> Triangulation:
    from .fixtures import parse_signature, surface

    if isinstance(ref, str):
        ref = {"builtin": ref}
    if not isinstance(ref, dict) or len(ref) != 1:
        raise DocumentError("surface reference must be {'builtin': alias} or {'triangulation': ...}")
    if "builtin" in ref:
        try:
            return surface(parse_signature(str(ref["builtin"])))
        except ValueError as e:
            raise DocumentError(str(e)) from None
    tri = _need(ref, "triangulation")
    glue = _int_list(_need(tri, "glue"), "glue")
    raw = _need(tri, "labels")
    if not isinstance(raw, list) or len(raw) != len(glue):
        raise DocumentError("labels must be a list as long as glue")
    labels = tuple(None if x is None else ExteriorLabel(int(x)) for x in raw)
    return Triangulation(tuple(glue), labels, int(tri.get("ghost", -1)))


def surface_doc(t: Triangulation) -> dict:
    return document("surface", {"surface": surface_ref(t), "signature": sig_list(signature_of(t))})


def load_surface(doc: dict) -> Triangulation:
    t = read_surface_ref(_need(doc["payload"], "surface"))
    if "signature" in doc["payload"] and doc["payload"]["signature"] != sig_list(signature_of(t)):
        raise DocumentError("declared signature does not match the triangulation")
    return t


# ---------------------------------------------------------------------------
# curves and families


def multicurve_doc(c: NormalCoordinates) -> dict:
    return document("multicurve", {"surface": surface_ref(c.surface), "weights": list(c.weights)})


def load_multicurve(doc: dict) -> NormalCoordinates:
    p = doc["payload"]
    if doc["kind"] == "family":
        return load_family(doc).union
    t = read_surface_ref(_need(p, "surface"))
    return validate(t, _int_list(_need(p, "weights"), "weights"))


def family_doc(fam: GenericFamily) -> dict:
    return document("family", {"surface": surface_ref(fam.surface),
                               "components": [list(c.weights) for c in fam.components]})


def load_family(doc: dict) -> GenericFamily:
    p = doc["payload"]
    t = read_surface_ref(_need(p, "surface"))
    if doc["kind"] == "multicurve" or "weights" in p:
        return as_generic_family(t, validate(t, _int_list(_need(p, "weights"), "weights")))
    comps = _need(p, "components")
    if not isinstance(comps, list):
        raise DocumentError("components must be a list")
    if not comps:
        return GenericFamily(t, ())
    return family_from_curves([validate(t, _int_list(w, "component")) for w in comps])


# ---------------------------------------------------------------------------
# orbit types


def orbit_type_payload(ot: OrbitType) -> dict:
    code = canonicalize(ot)
    rep = code.to_type()
    return {
        "ambient": sig_list(rep.ambient),
        "code": str(code),
        "nodes": [{"genus": x.genus, "punctures": x.punctures, "labels": list(x.labels)} for x in rep.nodes],
        "edges": [list(e) for e in rep.edges],
    }


def orbit_type_doc(ot: OrbitType) -> dict:
    return document("orbit_type", orbit_type_payload(ot))


def load_orbit_type(doc: dict) -> OrbitType:
    from .orbit_types import InvalidOrbitType

    p = doc["payload"]
    try:
        amb = SurfaceSignature(*_int_list(_need(p, "ambient"), "ambient"))
        nodes = tuple(Node(int(n["genus"]), int(n["punctures"]), tuple(int(k) for k in n["labels"]))
                      for n in _need(p, "nodes"))
        edges = tuple(tuple(_int_list(e, "edge")) for e in _need(p, "edges"))
        return OrbitType(nodes, edges, amb)
    except (KeyError, TypeError) as e:
        raise DocumentError(f"malformed orbit type: {e}") from None
    except InvalidOrbitType as e:
        raise DocumentError(f"invalid orbit type: {e}") from None


def code_payload(code: CanonicalCode) -> dict:
    return orbit_type_payload(code.to_type())


def catalogue_doc(cat: Catalogue, rank=None) -> dict:
    ranks = [(r, codes) for r, codes in cat.per_rank if rank is None or r == rank]
    if rank is not None and not ranks:
        ranks = [(rank, ())]
    payload = {
        "signature": sig_list(cat.signature),
        "max_rank": cat.max_rank,
        "ranks": [{"r": r, "count": len(codes), "types": [code_payload(c) for c in codes]}
                  for r, codes in ranks],
        "total": sum(len(codes) for _, codes in ranks),
    }
    if rank is None:
        payload["note"] = "total equals the number of pairwise inequivalent induced representations"
    return document("catalogue", payload)


# ---------------------------------------------------------------------------
# reports and certificates


def report_payload(rep) -> dict:
    return {
        "type": "stabilizer",
        "orbit_type": code_payload(rep.orbit_type),
        "r": rep.r,
        "q": rep.q,
        "twist_lattice_rank": rep.twist_lattice_rank,
        "kernel_rank": rep.kernel_rank,
        "kernel_generators": list(rep.kernel_generators),
        "pieces": [{"signature": sig_list(x.signature), "kind": str(x.kind), "description": x.description}
                   for x in rep.pieces],
        "cub_order": rep.cub_order,
        "graph_automorphism_count": rep.graph_automorphism_count,
        "is_pantalon_decomposition": rep.is_pantalon_decomposition,
        "virtually_abelian": rep.virtually_abelian,
        "exact_sequence": rep.exact_sequence,
    }


def report_doc(rep) -> dict:
    return document("report", report_payload(rep))


def _fam(f: GenericFamily) -> list:
    return [list(c.weights) for c in f.components]


def large_action_payload(cert) -> dict:
    return {
        "type": "large_action",
        "surface": surface_ref(cert.alpha.surface),
        "alpha": _fam(cert.alpha),
        "beta": _fam(cert.beta),
        "twist_curve": list(cert.twist_curve.weights),
        "moved_index": cert.moved_index,
        "beta_intersections": list(cert.beta_intersections),
        "alpha_code": str(cert.alpha_code),
        "images": [_fam(f) for f in cert.images],
        "image_codes": [str(c) for c in cert.image_codes],
        "verified": cert.verify(),
    }


def large_action_doc(cert) -> dict:
    return document("certificate", large_action_payload(cert))


def noncommensurability_doc(nc) -> dict:
    return document("certificate", {
        "type": "noncommensurability",
        "directions": list(nc.directions),
        "index_bound": nc.index_bound,
        "alpha_under_stab_beta": None if nc.alpha_in_beta is None else large_action_payload(nc.alpha_in_beta),
        "beta_under_stab_alpha": None if nc.beta_in_alpha is None else large_action_payload(nc.beta_in_alpha),
    })


def chain_doc(ch) -> dict:
    return document("certificate", {
        "type": "chain",
        "surface": surface_ref(ch.surface),
        "beta": _fam(ch.beta),
        "alpha": _fam(ch.alpha),
        "report_alpha": report_payload(ch.report_alpha),
        "report_beta": report_payload(ch.report_beta),
        "nonconjugacy_witness": [str(c) for c in ch.nonconjugacy_witness],
        "induction_identity": ch.induction_identity,
    })


def equivalence_doc(same: bool, c1: CanonicalCode, c2: CanonicalCode) -> dict:
    return document("report", {"type": "equivalence", "equivalent": same,
                               "codes": [str(c1), str(c2)]})
