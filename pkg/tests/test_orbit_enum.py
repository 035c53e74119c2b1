import itertools
import random

import pytest

from curvecomplex.errors import NoPantalonDecomposition
from curvecomplex.fixtures import FIXTURES, discover_codes, random_family, surface
from curvecomplex.multicurve import GenericFamily
from curvecomplex.orbit_enum import (PantalonKind, _levels, catalogue, complete_to_pantalon_decomposition,
                                     count_pantalons, decorations, enumerate_orbits, max_rank,
                                     node_splits, orbit_count, pantalon_kind, scan_maximal)
from curvecomplex.orbit_types import canonicalize, is_face, orbit_type_of
from curvecomplex.surface_model import SurfaceSignature, cut_along, signature_of

S = SurfaceSignature


def test_max_rank_examples():
    assert max_rank(S(2, 0, 0)) == 3
    assert max_rank(S(0, 2, 0)) == 0
    assert max_rank(S(1, 0, 0)) == 1
    assert max_rank(S(0, 0, 3)) == 0
    assert max_rank(S(0, 5, 1)) == 3


def test_count_pantalons_examples():
    assert count_pantalons(S(2, 0, 0)) == 2
    assert count_pantalons(S(0, 4, 1)) == 3
    assert count_pantalons(S(1, 1, 0)) == 1
    for sig in (S(1, 0, 0), S(0, 3, 0), S(0, 2, 1), S(0, 1, 2), S(0, 0, 3)):
        with pytest.raises(NoPantalonDecomposition):
            count_pantalons(sig)


def test_pantalon_kinds():
    assert pantalon_kind(0, 2, 1) is PantalonKind.I
    assert pantalon_kind(0, 1, 2) is PantalonKind.II
    assert pantalon_kind(0, 0, 3) is PantalonKind.III
    assert str(pantalon_kind(1, 0, 1)) == "not_pantalon"


def test_enumerate_examples():
    assert len(enumerate_orbits(S(2, 0, 0), 1)) == 2
    assert len(enumerate_orbits(S(1, 0, 0), 1)) == 1
    assert [len(enumerate_orbits(S(2, 0, 0), r)) for r in (1, 2, 3)] == [2, 2, 2]
    assert enumerate_orbits(S(2, 0, 0), 4) == []
    assert enumerate_orbits(S(0, 2, 0), 1) == []
    with pytest.raises(ValueError):
        enumerate_orbits(S(2, 0, 0), 0)


@pytest.mark.parametrize("m", range(3, 9))
def test_disc_rank_one_counts(m):
    # one curve per number of enclosed punctures k, 2 <= k <= m-1
    assert len(enumerate_orbits(S(0, m, 1), 1)) == len(range(2, m))


# -- brute-force oracle over decorated multigraphs ---------------------------

def _compositions(total, parts):
    for cut in itertools.combinations(range(total + parts - 1), parts - 1):
        prev, out = -1, []
        for c in cut + (total + parts - 1,):
            out.append(c - prev - 1)
            prev = c
        yield tuple(out)


def _brute_types(sig, r):
    g, m, q = sig.genus, sig.punctures, sig.boundary
    found = set()
    for l in range(1, r + 2):
        G = g - r + l - 1
        if G < 0:
            continue
        pairs = [(i, j) for i in range(l) for j in range(i, l)]
        for genera in _compositions(G, l):
            for punct in _compositions(m, l):
                for owner in itertools.product(range(l), repeat=q):
                    labels = [tuple(k + 1 for k in range(q) if owner[k] == v) for v in range(l)]
                    for edges in itertools.combinations_with_replacement(pairs, r):
                        if _ok(genera, punct, labels, edges, l):
                            found.add(_code(genera, punct, labels, edges, l))
    return found


def _ok(genera, punct, labels, edges, l):
    parent = list(range(l))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    deg = [0] * l
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
        parent[find(u)] = find(v)
    if len({find(x) for x in range(l)}) != 1:
        return False
    for v in range(l):
        b = deg[v] + len(labels[v])
        if 2 - 2 * genera[v] - punct[v] - b < 0:
            continue
        # annulus whose two sides are one curve: the torus case
        if (genera[v], punct[v], b, labels[v]) == (0, 0, 2, ()) and edges.count((v, v)) == 1 and l == 1:
            continue
        return False
    return True


def _code(genera, punct, labels, edges, l):
    best = None
    for perm in itertools.permutations(range(l)):
        pos = {v: i for i, v in enumerate(perm)}
        code = (tuple((genera[v], punct[v], labels[v]) for v in perm),
                tuple(sorted(tuple(sorted((pos[u], pos[v]))) for u, v in edges)))
        best = code if best is None or code < best else best
    return best


def _type_code(ot):
    l = len(ot.nodes)
    return _code([x.genus for x in ot.nodes], [x.punctures for x in ot.nodes],
                 [tuple(sorted(x.labels)) for x in ot.nodes], list(ot.edges), l)


ORACLE_SIGS = [S(2, 0, 0), S(1, 0, 0), S(1, 1, 0), S(0, 5, 1), S(1, 2, 1), S(0, 3, 2), S(1, 1, 1), S(0, 4, 0)]


@pytest.mark.parametrize("sig", ORACLE_SIGS, ids=str)
def test_enumeration_matches_brute_force(sig):
    for r in range(1, min(max_rank(sig), 3) + 2):
        got = [_type_code(ot) for ot in enumerate_orbits(sig, r)]
        assert len(got) == len(set(got))
        assert set(got) == _brute_types(sig, r)


@pytest.mark.parametrize("sig", [S(2, 0, 0), S(0, 6, 1), S(1, 2, 1), S(2, 1, 1), S(0, 4, 2), S(3, 0, 0)], ids=str)
def test_node_splitting_agrees_with_gluing_kernel(sig):
    top = max_rank(sig)
    assert not decorations(sig, top).mixed
    bfs = set(_levels(sig, top)[top - 1].keys())
    assert bfs == {canonicalize(ot) for ot in enumerate_orbits(sig, top)}
    assert scan_maximal(sig)["types"] == len(bfs) == orbit_count(sig, top)


def test_empty_exactly_above_max_rank():
    for g in range(4):
        for m in range(6):
            for q in range(4):
                sig = S(g, m, q)
                if (g, q) == (0, 0) and m <= 2:
                    continue
                top = max_rank(sig)
                assert not decorations(sig, top + 1).feasible
                for r in range(1, top + 1):
                    assert decorations(sig, r).feasible
                if g + m + q <= 5:
                    assert enumerate_orbits(sig, top + 1) == []
                    for r in range(1, top + 1):
                        assert enumerate_orbits(sig, r)


def test_pantalons_admit_no_further_curve():
    for g, p, b in ((0, 2, 1), (0, 1, 2), (0, 0, 3)):
        for extra in range(0, 4):
            labels = tuple(range(1, b - extra + 1)) if b >= extra else None
            if labels is None:
                continue
            assert list(node_splits(g, p, labels, extra)) == []


@pytest.mark.parametrize("sig", ORACLE_SIGS + [S(2, 1, 1), S(0, 6, 1)], ids=str)
def test_soundness_and_maximal_pantalons(sig):
    top = max_rank(sig)
    for r in range(1, top + 1):
        for ot in enumerate_orbits(sig, r):
            # construction already validated the type; check the rank and piece kinds
            assert ot.r == r and ot.ambient == sig
            kinds = [pantalon_kind(x.genus, x.punctures, x.boundary(ot.degree(v)))
                     for v, x in enumerate(ot.nodes)]
            if r == top and not sig.is_torus_no_marks:
                assert PantalonKind.NOT_PANTALON not in kinds


def test_catalogue_examples():
    cat = catalogue(S(2, 0, 0))
    assert cat.total == 6 and cat.max_rank == 3 and cat.counts == {1: 2, 2: 2, 3: 2}
    assert catalogue(S(0, 2, 0)).total == 0
    cat = catalogue(S(1, 1, 0))
    assert cat.max_rank == 1 and cat.total >= 1
    found = discover_codes(S(1, 1, 0), 30, random.Random(1))
    assert set(found) == set(cat.per_rank[0][1])


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_sampling_only_finds_enumerated_codes(name):
    sig = FIXTURES[name]
    cat = catalogue(sig)
    known = {c for _, codes in cat.per_rank for c in codes}
    samples = {"d6": 100}.get(name, 40)
    found = discover_codes(sig, samples, random.Random(2))
    assert set(found) == known


def test_complete_examples(genus2, g2_pair):
    a1, _ = g2_pair
    start = GenericFamily(genus2, (a1,))
    full = complete_to_pantalon_decomposition(start)
    assert full.r == 3 and is_face(start, full)
    kinds = {pantalon_kind(*_sig(p)) for p in cut_along(genus2, full.union).pieces}
    assert kinds == {PantalonKind.III}
    assert complete_to_pantalon_decomposition(full) == full
    torus = surface(S(1, 0, 0))
    with pytest.raises(NoPantalonDecomposition):
        complete_to_pantalon_decomposition(GenericFamily(torus, ()))


def _sig(piece):
    s = signature_of(piece)
    return s.genus, s.punctures, s.boundary


@pytest.mark.parametrize("name", [n for n in sorted(FIXTURES) if n not in ("t0", "t0b1")])
def test_completion_of_random_families(name):
    t = surface(FIXTURES[name])
    rng = random.Random(6)
    for _ in range(4):
        fam = random_family(t, rng, 4)
        full = complete_to_pantalon_decomposition(fam)
        assert full.r == max_rank(FIXTURES[name]) and is_face(fam, full)
        ot = orbit_type_of(full)
        assert all(pantalon_kind(x.genus, x.punctures, x.boundary(ot.degree(v))) is not PantalonKind.NOT_PANTALON
                   for v, x in enumerate(ot.nodes))
