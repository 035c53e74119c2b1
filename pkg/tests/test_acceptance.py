"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

import itertools
import json
import random
import sys
import time
from math import factorial

import pytest
from click.testing import CliRunner

from curvecomplex.cli import main
from curvecomplex.curve_ops import apply_word_family, dehn_twist, intersection_number
from curvecomplex.fixtures import FIXTURES, curve_pool, discover_codes, random_family, random_word, surface
from curvecomplex.multicurve import canonical_eq
from curvecomplex.orbit_enum import (PantalonKind, catalogue, complete_to_pantalon_decomposition,
                                     count_pantalons, enumerate_orbits, iter_maximal_types, max_rank,
                                     orbit_count, pantalon_kind, scan_maximal)
from curvecomplex.orbit_types import canonicalize, is_face, orbit_type_of
from curvecomplex.stabilizers_actions import large_action_certificate, stabilizer_report
from curvecomplex.surface_model import SurfaceSignature as S

SWEEP = [S(g, m, q) for g in range(4) for m in range(6) for q in range(4)
         if not S(g, m, q).has_empty_complex]
EMPTY_COMPLEX = [S(0, 0, 0), S(0, 1, 0), S(0, 2, 0), S(0, 3, 0), S(0, 0, 1), S(0, 1, 1), S(0, 2, 1),
                 S(0, 0, 2), S(0, 1, 2), S(0, 0, 3)]
FULL_REPORTS = 3000  # signatures with at most this many maximal types get a report per type
SAMPLE = 300         # report sample for larger signatures


@pytest.fixture
def verdict(capsys):
    def emit(n, title, ok, detail=""):
        with capsys.disabled():
            print(f"\ncriterion {n:2d} {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else ""))
        assert ok, f"criterion {n} failed: {detail}"
    return emit


def _cli(*args):
    res = CliRunner().invoke(main, [str(a) for a in args])
    return res.exit_code, res.output


def test_c01_genus2_census(verdict):
    t0 = time.perf_counter()
    code, out = _cli("orbits", 2, 0, 0)
    dt = time.perf_counter() - t0
    p = json.loads(out)["payload"]
    counts = [x["count"] for x in p["ranks"]]
    verdict(1, "genus-2 census", code == 0 and p["total"] == 6 and counts == [2, 2, 2] and dt < 5,
            f"counts {counts}, total {p['total']}, {dt:.2f}s")


def test_c02_torus_census(verdict):
    code, out = _cli("orbits", 1, 0, 0)
    p = json.loads(out)["payload"]
    ranks = [(x["r"], x["count"]) for x in p["ranks"]]
    verdict(2, "torus census", code == 0 and p["total"] == 1 and ranks == [(1, 1)], f"ranks {ranks}")


def test_c03_empty_complexes(verdict):
    totals = {}
    for sig in EMPTY_COMPLEX:
        code, out = _cli("orbits", sig.genus, sig.punctures, sig.boundary)
        totals[str(sig)] = json.loads(out)["payload"]["total"] if code == 0 else None
    verdict(3, "empty complexes", all(v == 0 for v in totals.values()), str(totals))


def _sweep_stats():
    stats = {}
    for sig in SWEEP:
        top = max_rank(sig)
        stats[sig] = (top, orbit_count(sig, top), enumerate_orbits(sig, top + 1),
                      scan_maximal(sig) if top else None)
    return stats


@pytest.fixture(scope="module")
def sweep():
    t0 = time.perf_counter()
    stats = _sweep_stats()
    return stats, time.perf_counter() - t0


def test_c04_rank_formula(verdict, sweep):
    stats, dt = sweep
    bad = []
    for sig, (top, n, above, scan) in stats.items():
        if top != 3 * sig.genus + sig.punctures + sig.boundary - 3 and not sig.is_torus_no_marks:
            bad.append((str(sig), "formula"))
        if n == 0 or above:
            bad.append((str(sig), "emptiness"))
        if not sig.is_torus_no_marks:
            if scan["nodes"] != {count_pantalons(sig)} or scan["edges"] != {top}:
                bad.append((str(sig), "structure"))
    verdict(4, "rank formula and pantalon count", not bad and dt < 120,
            f"{len(stats)} signatures, {sum(v[1] for v in stats.values())} maximal types, {dt:.1f}s"
            + (f", failures {bad[:5]}" if bad else ""))


@pytest.fixture(scope="module")
def acc_pools():
    return {name: curve_pool(sig, random.Random(7)) for name, sig in FIXTURES.items()}


def test_c05_twist_identity(verdict, acc_pools):
    rng = random.Random(5)
    names = ["t1", "d4", "d5", "t0b1"]
    t0 = time.perf_counter()
    bad = 0
    for _ in range(200):
        pool = acc_pools[rng.choice(names)][:8]
        a, b, n = rng.choice(pool), rng.choice(pool), rng.randint(-3, 3)
        if intersection_number(dehn_twist(a, n, b), b) != abs(n) * intersection_number(a, b) ** 2:
            bad += 1
    dt = time.perf_counter() - t0
    verdict(5, "twist intersection identity", bad == 0 and dt < 60, f"200 samples, {bad} failures, {dt:.1f}s")


def test_c06_twist_calculus(verdict, acc_pools):
    rng = random.Random(6)
    failures = []
    checked = {"fixed": 0, "power": 0, "commute": 0, "witness": 0}
    for name in ["t1", "d4", "d5", "t0b1", "g2"]:
        pool = acc_pools[name][:6]
        for a in pool:
            checked["fixed"] += 1
            if dehn_twist(a, 1, a) != a:
                failures.append((name, "fixed"))
            j, k = rng.randint(-2, 2), rng.randint(-2, 2)
            c = rng.choice(pool)
            checked["power"] += 1
            if dehn_twist(a, j, dehn_twist(a, k, c)) != dehn_twist(a, j + k, c):
                failures.append((name, "power"))
            for b in pool:
                i = intersection_number(a, b)
                if i == 0 and not canonical_eq(a, b):
                    checked["commute"] += 1
                    for c in pool:
                        if dehn_twist(a, 1, dehn_twist(b, 1, c)) != dehn_twist(b, 1, dehn_twist(a, 1, c)):
                            failures.append((name, "commute"))
                elif i > 0:
                    checked["witness"] += 1
                    wit = (a, b, dehn_twist(a, 1, b))
                    if all(dehn_twist(a, 1, dehn_twist(b, 1, c)) == dehn_twist(b, 1, dehn_twist(a, 1, c))
                           for c in wit):
                        failures.append((name, "witness"))
    verdict(6, "twist calculus", not failures, f"checked {checked}" + (f", failures {failures[:4]}" if failures else ""))


def test_c07_orbit_invariance(verdict, acc_pools):
    rng = random.Random(7)
    bad, total = 0, 0
    for name, sig in FIXTURES.items():
        t = surface(sig)
        fams = [f for f in (random_family(t, rng, 5, weight_cap=40) for _ in range(10)) if f.r]
        for k in range(100):
            fam = fams[k % len(fams)]
            w = random_word(rng, acc_pools[name][:6], rng.randint(1, 3), 1)
            total += 1
            if canonicalize(orbit_type_of(apply_word_family(w, fam))) != canonicalize(orbit_type_of(fam)):
                bad += 1
    verdict(7, "orbit invariance under twist words", bad == 0, f"{total} words, {bad} changed codes")


def test_c08_large_action(verdict):
    rng = random.Random(8)
    names = sorted(FIXTURES)
    t0 = time.perf_counter()
    certs = []
    while len(certs) < 20:
        name = names[len(certs) % len(names)]
        t = surface(FIXTURES[name])
        alpha = random_family(t, rng, 4, weight_cap=30)
        beta = random_family(t, rng, 4, weight_cap=30)
        if alpha.r == 0 or is_face(alpha, beta):
            continue
        certs.append(large_action_certificate(alpha, beta, 25))
    dt = time.perf_counter() - t0
    ok = all(c.verify() and len(c.images) == 25 and set(c.image_codes) == {c.alpha_code} for c in certs)
    verdict(8, "large action certificates", ok and dt < 120, f"20 pairs, N=25, {dt:.1f}s")


def test_c09_oracle_cross_validation(verdict):
    full = {"g2", "t0", "d3", "d4", "d5", "d6"}
    samples = {"d6": 100}
    result = {}
    for name, sig in sorted(FIXTURES.items()):
        known = {c for _, codes in catalogue(sig).per_rank for c in codes}
        found = set(discover_codes(sig, samples.get(name, 40), random.Random(2)))
        result[name] = (found <= known, found == known, len(found), len(known))
    ok = all(sub for sub, _, _, _ in result.values()) and all(result[n][1] for n in full)
    verdict(9, "sampling oracle vs enumeration", ok,
            ", ".join(f"{n} {f}/{k}" for n, (_, _, f, k) in result.items()))


def test_c10_pantalon_completion(verdict):
    rng = random.Random(10)
    names = [n for n in sorted(FIXTURES) if n != "t0"]
    bad = []
    for i in range(50):
        name = names[i % len(names)]
        sig = FIXTURES[name]
        t = surface(sig)
        fam = random_family(t, rng, rng.randint(1, 6))
        full = complete_to_pantalon_decomposition(fam)
        ot = orbit_type_of(full)
        kinds = [pantalon_kind(*ot.node_data(v)) for v in range(len(ot.nodes))]
        if full.r != 3 * sig.genus + sig.punctures + sig.boundary - 3 or not is_face(fam, full) \
                or PantalonKind.NOT_PANTALON in kinds:
            bad.append(name)
    verdict(10, "pantalon completion", not bad, f"50 families, failures {bad}")


def _report_ok(ot, sig):
    rep = stabilizer_report(ot)
    r = ot.r
    pant = all(p.kind is not PantalonKind.NOT_PANTALON for p in rep.pieces)
    return (rep.twist_lattice_rank == r + sig.boundary and rep.kernel_rank == r
            and rep.cub_order == 2 ** r * factorial(r) and rep.virtually_abelian == pant)


def test_c11_stabilizer_arithmetic(verdict, sweep):
    stats, _ = sweep
    t0 = time.perf_counter()
    reports, bad = 0, []
    for sig, (top, n, _, scan) in stats.items():
        if sig.is_torus_no_marks:
            types = enumerate_orbits(sig, top)
        elif n <= FULL_REPORTS:
            types = iter_maximal_types(sig)
        else:
            types = itertools.islice(iter_maximal_types(sig), SAMPLE)
            # the rest is pinned down by the kernel scan: every type has r = top and only pantalons
            if scan["edges"] != {top} or scan["non_pantalon"]:
                bad.append(str(sig))
        for ot in types:
            reports += 1
            if not _report_ok(ot, sig):
                bad.append(str(sig))
                break
    dt = time.perf_counter() - t0
    verdict(11, "stabilizer report arithmetic", not bad,
            f"{reports} reports built, remaining types fixed by kernel scan, {dt:.1f}s")


def test_c12_chain_example(verdict):
    code, out = _cli("chain", 2, 0, 0)
    p = json.loads(out)["payload"] if code == 0 else {}
    differ = code == 0 and len(set(p["nonconjugacy_witness"])) == 2 and len(p["beta"]) == 2
    code1, out1 = _cli("chain", 1, 0, 0)
    no_chain = code1 == 1 and json.loads(out1)["error"] == "NoChain"
    verdict(12, "chain example", differ and no_chain, f"chain 2 0 0 exit {code}, chain 1 0 0 exit {code1}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
