"""Decorated dual graphs of cut surfaces and their canonical forms.

Nodes are cut pieces carrying (genus, punctures, exterior labels); edges are
the curves of the family.  Exterior labels are never permuted by
canonicalization; node and edge orders are.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Sequence

from .errors import SurfaceMismatch
from .multicurve import GenericFamily, canonical_eq
from .surface_model import ExteriorLabel, SurfaceSignature, cut_complex, signature_of


@dataclass(frozen=True, order=True)
class Node:
    genus: int
    punctures: int
    labels: tuple = ()

    def boundary(self, degree: int) -> int:
        """Boundary circles of the piece given its number of half-edges."""
        return len(self.labels) + degree

    def key(self) -> tuple:
        return (self.genus, self.punctures, self.labels)


def valid_node(genus: int, punctures: int, boundary: int, single_loop: bool = False) -> bool:
    """Genericity exclusions for a piece with the given data.

    ``single_loop`` marks the annulus whose two boundaries are the sides of one curve.
    """
    if genus == 0 and boundary == 1 and punctures <= 1:
        return False
    if genus == 0 and punctures == 0 and boundary == 2 and not single_loop:
        return False
    return boundary >= 1


class InvalidOrbitType(ValueError):
    pass


@dataclass(frozen=True)
class OrbitType:
    nodes: tuple
    edges: tuple
    ambient: SurfaceSignature

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(
            n if isinstance(n, Node) else Node(n[0], n[1], tuple(sorted(n[2]))) for n in self.nodes))
        object.__setattr__(self, "edges", tuple(tuple(sorted(e)) for e in self.edges))
        self._check()

    @property
    def r(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return sum((u == v) + (w == v) for u, w in self.edges)

    def loops(self, v: int) -> int:
        return sum(1 for u, w in self.edges if u == w == v)

    def _check(self) -> None:
        n = len(self.nodes)
        if n == 0:
            raise InvalidOrbitType("no nodes")
        for u, v in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidOrbitType(f"edge ({u},{v}) references a missing node")
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            parent[find(u)] = find(v)
        if len({find(x) for x in range(n)}) != 1:
            raise InvalidOrbitType("graph is not connected")
        amb = self.ambient
        if sum(x.genus for x in self.nodes) + self.r - n + 1 != amb.genus:
            raise InvalidOrbitType("genus does not add up")
        if sum(x.punctures for x in self.nodes) != amb.punctures:
            raise InvalidOrbitType("punctures do not add up")
        labels = sorted(k for x in self.nodes for k in x.labels)
        if labels != list(range(1, amb.boundary + 1)):
            raise InvalidOrbitType("exterior labels do not partition 1..q")
        for v, x in enumerate(self.nodes):
            d = self.degree(v)
            single = d == 2 and self.loops(v) == 1 and not x.labels
            if not valid_node(x.genus, x.punctures, x.boundary(d), single):
                raise InvalidOrbitType(f"node {v} {x.key()} violates genericity")

    def node_data(self, v: int) -> tuple:
        """(genus, punctures, total boundary circles) of node v."""
        x = self.nodes[v]
        return (x.genus, x.punctures, x.boundary(self.degree(v)))


@dataclass(frozen=True, order=True)
class CanonicalCode:
    nodes: tuple
    edges: tuple
    ambient: tuple

    def __str__(self) -> str:
        ns = ";".join(f"{g},{p},{'.'.join(map(str, L))}" for g, p, L in self.nodes)
        es = ";".join(f"{u}-{v}" for u, v in self.edges)
        a = ",".join(map(str, self.ambient))
        return f"[{a}|{ns}|{es}]"

    def to_type(self) -> OrbitType:
        return OrbitType(tuple(Node(g, p, L) for g, p, L in self.nodes), self.edges,
                         SurfaceSignature(*self.ambient))


def _refine(colors: list, adj: list) -> list:
    n = len(colors)
    ncls = len(set(colors))
    while True:
        sigs = [(colors[v], tuple(sorted((colors[w], m) for w, m in adj[v].items()))) for v in range(n)]
        uniq = {s: i for i, s in enumerate(sorted(set(sigs)))}
        colors = [uniq[s] for s in sigs]
        if len(uniq) == ncls:
            return colors
        ncls = len(uniq)


def _canon(nodes: Sequence[tuple], edges: Sequence[tuple]) -> tuple:
    """(code nodes, code edges, node automorphism count) by individualization-refinement."""
    n = len(nodes)
    adj = [dict() for _ in range(n)]
    deg = [0] * n
    for u, v in edges:
        adj[u][v] = adj[u].get(v, 0) + 1
        if u != v:
            adj[v][u] = adj[v].get(u, 0) + 1
        deg[u] += 1
        deg[v] += 1
    inv = [(nd, deg[i]) for i, nd in enumerate(nodes)]
    keys = sorted(set(inv))
    colors = _refine([keys.index(x) for x in inv], adj)
    best = [None, 0]

    def rec(colors):
        if len(set(colors)) == n:
            order = sorted(range(n), key=lambda v: colors[v])
            pos = {v: i for i, v in enumerate(order)}
            code = (tuple(nodes[v] for v in order),
                    tuple(sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in edges)))
            if best[0] is None or code < best[0]:
                best[0], best[1] = code, 1
            elif code == best[0]:
                best[1] += 1
            return
        counts = {}
        for c in colors:
            counts[c] = counts.get(c, 0) + 1
        c = min(k for k, m in counts.items() if m > 1)
        for v in range(n):
            if colors[v] == c:
                new = [2 * x + (1 if (x == c and w != v) else 0) for w, x in enumerate(colors)]
                rec(_refine(new, adj))

    rec(colors)
    return best[0][0], best[0][1], best[1]


def canonicalize(ot: OrbitType) -> CanonicalCode:
    nodes, edges, _ = _canon([x.key() for x in ot.nodes], ot.edges)
    return CanonicalCode(nodes, edges, ot.ambient.as_tuple())


def automorphism_count(ot: OrbitType) -> int:
    """Automorphisms of the decorated graph acting on half-edges, exterior labels fixed."""
    _, _, node_auts = _canon([x.key() for x in ot.nodes], ot.edges)
    mult = {}
    for e in ot.edges:
        mult[e] = mult.get(e, 0) + 1
    out = node_auts
    for (u, v), k in mult.items():
        out *= factorial(k)
        if u == v:
            out *= 2 ** k
    return out


def orbit_type_of(fam: GenericFamily) -> OrbitType:
    t = fam.surface
    res = cut_complex(t, fam.union.weights).result
    nodes, where = [], {}
    for pi, piece in enumerate(res.pieces):
        sig = signature_of(piece)
        ext = []
        for lab in res.provenance[pi]:
            if isinstance(lab, ExteriorLabel):
                ext.append(lab.index)
            else:
                where[(lab.curve, lab.side)] = pi
        nodes.append(Node(sig.genus, sig.punctures, tuple(sorted(ext))))
    edges = [(where[(i, 0)], where[(i, 1)]) for i in range(1, fam.r + 1)]
    return OrbitType(tuple(nodes), tuple(edges), signature_of(t))


def same_orbit(f1: GenericFamily, f2: GenericFamily) -> bool:
    if signature_of(f1.surface) != signature_of(f2.surface):
        raise SurfaceMismatch("families live on surfaces of different signatures")
    return canonicalize(orbit_type_of(f1)) == canonicalize(orbit_type_of(f2))


def is_face(f1: GenericFamily, f2: GenericFamily) -> bool:
    """Every component of f1 is isotopic to a distinct component of f2."""
    if f1.surface != f2.surface:
        raise SurfaceMismatch("families live on different triangulations")
    a, b = f1.components, f2.components
    if len(a) > len(b):
        return False
    ok = [[canonical_eq(x, y) for y in b] for x in a]
    match = [-1] * len(b)

    def augment(i, seen):
        for j in range(len(b)):
            if ok[i][j] and j not in seen:
                seen.add(j)
                if match[j] < 0 or augment(match[j], seen):
                    match[j] = i
                    return True
        return False

    return all(augment(i, set()) for i in range(len(a)))


def sub_type(ot: OrbitType, keep: Sequence[int]) -> OrbitType:
    """Orbit type of the face keeping the listed edges (merging pieces along dropped curves)."""
    n = len(ot.nodes)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    keep = set(keep)
    extra_genus = {}
    for i, (u, v) in enumerate(ot.edges):
        if i in keep:
            continue
        ru, rv = find(u), find(v)
        if ru == rv:
            extra_genus[ru] = extra_genus.get(ru, 0) + 1
        else:
            parent[ru] = rv
            if ru in extra_genus:
                extra_genus[rv] = extra_genus.get(rv, 0) + extra_genus.pop(ru)
    roots = sorted({find(x) for x in range(n)})
    idx = {r: i for i, r in enumerate(roots)}
    acc = {r: [extra_genus.get(r, 0), 0, []] for r in roots}
    for v, x in enumerate(ot.nodes):
        a = acc[find(v)]
        a[0] += x.genus
        a[1] += x.punctures
        a[2].extend(x.labels)
    nodes = tuple(Node(g, p, tuple(sorted(L))) for g, p, L in (acc[r] for r in roots))
    edges = tuple((idx[find(u)], idx[find(v)]) for i, (u, v) in enumerate(ot.edges) if i in keep)
    return OrbitType(nodes, edges, ot.ambient)
