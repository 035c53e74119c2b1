"""Orbit enumeration per signature and rank, pantalon machinery, catalogues."""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Optional

from . import _gluings
from .curve_ops import curve_from_walk, piece_candidates
from .errors import CurveComplexError, NoPantalonDecomposition
from .multicurve import GenericFamily, as_generic_family, validate
from .orbit_types import Node, OrbitType, canonicalize, valid_node
from .surface_model import SurfaceSignature, cut_complex, signature_of


class PantalonKind(Enum):
    I = "I"
    II = "II"
    III = "III"
    NOT_PANTALON = "not_pantalon"

    def __str__(self) -> str:
        return self.value


def pantalon_kind(genus: int, punctures: int, boundary: int) -> PantalonKind:
    return {(0, 2, 1): PantalonKind.I, (0, 1, 2): PantalonKind.II,
            (0, 0, 3): PantalonKind.III}.get((genus, punctures, boundary), PantalonKind.NOT_PANTALON)


def _has_pantalon_decomposition(sig: SurfaceSignature) -> bool:
    return not (sig.has_empty_complex or sig.is_torus_no_marks)


def max_rank(sig: SurfaceSignature) -> int:
    if sig.has_empty_complex:
        return 0
    if sig.is_torus_no_marks:
        return 1
    return 3 * sig.genus + sig.punctures + sig.boundary - 3


def count_pantalons(sig: SurfaceSignature) -> int:
    if not _has_pantalon_decomposition(sig):
        raise NoPantalonDecomposition(f"{sig} admits no pantalon decomposition")
    return 2 * sig.genus + sig.punctures + sig.boundary - 2


# ---------------------------------------------------------------------------
# decoration stage


@dataclass(frozen=True)
class DecorationSummary:
    """Which node decorations can carry a connected type of rank r.

    ``node_counts`` lists the feasible numbers of nodes; ``mixed`` tells
    whether some feasible decoration has a node that is not a pantalon.
    """

    node_counts: tuple
    mixed: bool

    @property
    def feasible(self) -> bool:
        return bool(self.node_counts)


def decorations(sig: SurfaceSignature, r: int) -> DecorationSummary:
    """Scan decorations by node count l and number h of positive-genus nodes.

    With l nodes and r edges the node genera sum to g - r + l - 1.  A genus-0
    node must carry at least three punctures or boundary circles (the single
    loop annulus excepted); a positive-genus node needs one boundary circle.
    Boundary circles of nodes are the q exterior ones plus two per edge.
    """
    g, m, q = sig.genus, sig.punctures, sig.boundary
    budget = m + q + 2 * r
    counts, mixed = [], False
    for l in range(1, r + 2):
        G = g - r + l - 1
        if G < 0 or (l >= 2 and 2 * r < l):
            continue
        ok_here = False
        for h in range(0, min(l, G) + 1):
            if G > 0 and h == 0:
                continue
            need = 3 * (l - h) + h
            if budget >= need:
                ok_here = True
                if h > 0 or budget > need:
                    mixed = True
        if not ok_here and (l, r, G, m, q) == (1, 1, 0, 0, 0):
            ok_here, mixed = True, True  # the torus annulus
        if ok_here:
            counts.append(l)
    return DecorationSummary(tuple(counts), mixed)


# ---------------------------------------------------------------------------
# node splitting


def node_splits(genus: int, punctures: int, labels: tuple, half_edges: int):
    """Ways of cutting one node along a new curve.

    Yields ("loop", node) for a nonseparating curve and
    ("pair", node1, node2, half-edge subset of node1) for a separating one.
    """
    if genus >= 1:
        b = len(labels) + half_edges + 2
        if valid_node(genus - 1, punctures, b, single_loop=(b == 2)):
            yield ("loop", (genus - 1, punctures, labels))
    hs = range(half_edges)
    for k in range(half_edges + 1):
        for H1 in combinations(hs, k):
            for j in range(len(labels) + 1):
                for L1 in combinations(labels, j):
                    L2 = tuple(x for x in labels if x not in L1)
                    b1 = len(L1) + len(H1) + 1
                    b2 = len(L2) + half_edges - len(H1) + 1
                    for g1 in range(genus + 1):
                        for p1 in range(punctures + 1):
                            if valid_node(g1, p1, b1) and valid_node(genus - g1, punctures - p1, b2):
                                yield ("pair", (g1, p1, L1), (genus - g1, punctures - p1, L2), H1)


def _children(nodes0: tuple, edges: tuple, ambient: SurfaceSignature) -> Iterator[OrbitType]:
    edges = list(edges)
    for v, x in enumerate(nodes0):
        hs = [(ei, side) for ei, e in enumerate(edges) for side in (0, 1) if e[side] == v]
        for split in node_splits(x.genus, x.punctures, x.labels, len(hs)):
            nodes = list(nodes0)
            if split[0] == "loop":
                nodes[v] = Node(*split[1])
                yield OrbitType(tuple(nodes), tuple(edges) + ((v, v),), ambient)
                continue
            _, n1, n2, H1 = split
            nodes[v] = Node(*n1)
            nodes.append(Node(*n2))
            w = len(nodes) - 1
            keep = {hs[i] for i in H1}
            ne = [list(e) for e in edges]
            for ei, side in hs:
                if (ei, side) not in keep:
                    ne[ei][side] = w
            yield OrbitType(tuple(nodes), tuple(tuple(e) for e in ne) + ((v, w),), ambient)


@lru_cache(maxsize=64)
def _levels(sig: SurfaceSignature, upto: int) -> tuple:
    """Per-rank dictionaries code -> type, built by splitting nodes rank by rank."""
    # the whole surface as a single node; it need not be a valid piece itself
    level = {None: ((Node(sig.genus, sig.punctures, tuple(range(1, sig.boundary + 1))),), ())}
    out = []
    for _ in range(upto):
        nxt = {}
        for nodes, edges in level.values():
            for child in _children(nodes, edges, sig):
                code = canonicalize(child)
                if code not in nxt:
                    nxt[code] = (child.nodes, child.edges)
        out.append(nxt)
        level = nxt
        if not nxt:
            break
    return tuple(out)


def _sorted_types(codes) -> list:
    return [c.to_type() for c in sorted(set(codes))]


def enumerate_orbits(sig: SurfaceSignature, r: int) -> list:
    """All orbit types of rank r, one code-minimal representative each, sorted by code."""
    if r < 1:
        raise ValueError("rank must be at least 1")
    if sig.has_empty_complex:
        return []
    summary = decorations(sig, r)
    if not summary.feasible:
        return []
    if not summary.mixed:
        return _sorted_types(canonicalize(ot) for ot in _gluings.maximal_types(sig))
    levels = _levels(sig, r)
    if len(levels) < r:
        return []
    return _sorted_types(levels[r - 1].keys())


def orbit_count(sig: SurfaceSignature, r: int) -> int:
    """len(enumerate_orbits(sig, r)), counted without materializing all-pantalon ranks."""
    if r < 1:
        raise ValueError("rank must be at least 1")
    if sig.has_empty_complex:
        return 0
    summary = decorations(sig, r)
    if not summary.feasible:
        return 0
    if not summary.mixed:
        return _gluings.scan_maximal(sig)["types"]
    return len(enumerate_orbits(sig, r))


def iter_maximal_types(sig: SurfaceSignature) -> Iterator[OrbitType]:
    """Maximal-rank types in generation order (not canonicalized)."""
    return _gluings.maximal_types(sig)


# ---------------------------------------------------------------------------
# catalogue


@dataclass(frozen=True)
class Catalogue:
    signature: SurfaceSignature
    max_rank: int
    per_rank: tuple  # ((r, (CanonicalCode, ...)), ...)

    @property
    def counts(self) -> dict:
        return {r: len(codes) for r, codes in self.per_rank}

    @property
    def total(self) -> int:
        return sum(len(codes) for _, codes in self.per_rank)

    def types(self, r: int) -> list:
        for rr, codes in self.per_rank:
            if rr == r:
                return [c.to_type() for c in codes]
        return []


def catalogue(sig: SurfaceSignature) -> Catalogue:
    """Orbit types for every rank 1..max_rank.

    The total is the number of pairwise inequivalent induced representations
    attached to the orbits; nothing beyond the count is constructed.
    """
    top = max_rank(sig)
    per = tuple((r, tuple(canonicalize(t) for t in enumerate_orbits(sig, r))) for r in range(1, top + 1))
    return Catalogue(sig, top, per)


# ---------------------------------------------------------------------------
# pantalon decompositions


def _non_pantalon_pieces(t, union) -> list:
    res = cut_complex(t, union.weights).result
    out = []
    for pi, piece in enumerate(res.pieces):
        s = signature_of(piece)
        if pantalon_kind(s.genus, s.punctures, s.boundary) is PantalonKind.NOT_PANTALON:
            out.append(pi)
    return out


def extend_family(fam: GenericFamily, rng: Optional[random.Random] = None,
                  piece: Optional[int] = None) -> Optional[GenericFamily]:
    """Add one curve inside a non-pantalon piece, or None if no candidate works."""
    t = fam.surface
    union = fam.union
    targets = _non_pantalon_pieces(t, union) if piece is None else [piece]
    if rng is not None:
        rng.shuffle(targets)
    for pi in targets:
        for _, walk in piece_candidates(union, pi, rng):
            c = curve_from_walk(t, walk)
            if c is None:
                continue
            try:
                new = as_generic_family(t, validate(t, [a + b for a, b in zip(union.weights, c.weights)]))
            except CurveComplexError:
                continue
            if new.r == fam.r + 1:
                return new
    return None


def complete_to_pantalon_decomposition(fam: GenericFamily) -> GenericFamily:
    """Extend a generic family until every cut piece is a pantalon."""
    sig = signature_of(fam.surface)
    if not _has_pantalon_decomposition(sig):
        raise NoPantalonDecomposition(f"{sig} admits no pantalon decomposition")
    target = max_rank(sig)
    while fam.r < target:
        nxt = extend_family(fam)
        if nxt is None:
            raise NoPantalonDecomposition(f"could not extend a family of size {fam.r}")
        fam = nxt
    if _non_pantalon_pieces(fam.surface, fam.union):
        raise NoPantalonDecomposition("maximal family does not cut into pantalons")
    return fam


# ---------------------------------------------------------------------------
# maximal-rank scan


def scan_maximal(sig: SurfaceSignature) -> dict:
    """Counts and structural ranges over all maximal-rank types (not materialized)."""
    return _gluings.scan_maximal(sig)
