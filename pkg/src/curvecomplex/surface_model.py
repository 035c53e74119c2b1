"""Combinatorial surfaces: signatures, triangulations and cutting.

A triangulation is a list of triangles whose sides are numbered by *slots*:
slot ``3*t + k`` is side ``k`` of triangle ``t``.  Side ``k`` runs from corner
``k`` to corner ``k+1`` (indices mod 3) and the three sides of every triangle
are listed counter-clockwise.  Two glued slots are identified with opposite
directions, so every triangulation built from this data is oriented.

Corners are numbered the same way (corner ``3*t + k`` is corner ``k`` of
triangle ``t``); vertices are classes of corners.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Union

from .errors import (InvalidCoordinates, InvalidTriangulation, NonIntegerGenus,
                     UnsupportedSignature)


@dataclass(frozen=True, order=True)
class SurfaceSignature:
    genus: int
    punctures: int
    boundary: int

    def __post_init__(self):
        for name in ("genus", "punctures", "boundary"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {v!r}")

    @property
    def has_empty_complex(self) -> bool:
        """Surfaces whose curve complex is empty: small spheres, discs, cylinders, pants."""
        g, m, q = self.genus, self.punctures, self.boundary
        if g:
            return False
        return (q == 0 and m <= 3) or (q == 1 and m <= 2) or (q == 2 and m <= 1) or (q == 3 and m == 0)

    @property
    def is_torus_no_marks(self) -> bool:
        return (self.genus, self.punctures, self.boundary) == (1, 0, 0)

    @property
    def euler_characteristic(self) -> int:
        """Euler characteristic of the compact surface (punctures filled in)."""
        return 2 - 2 * self.genus - self.boundary

    def as_tuple(self) -> tuple:
        return (self.genus, self.punctures, self.boundary)

    def __str__(self) -> str:
        return f"({self.genus},{self.punctures},{self.boundary})"


@dataclass(frozen=True, order=True)
class ExteriorLabel:
    """The k-th boundary circle of the ambient surface (1-based)."""
    index: int

    def __str__(self) -> str:
        return f"ext{self.index}"


@dataclass(frozen=True, order=True)
class CurveSide:
    """One of the two copies of curve ``curve`` (1-based) created by cutting.

    ``side`` 0 is the copy lying to the left of the curve's traced direction.
    """
    curve: int
    side: int

    def __str__(self) -> str:
        return f"c{self.curve}.{self.side}"


BoundaryLabel = Union[ExteriorLabel, CurveSide]

PUNCTURE, BOUNDARY, GHOST = "puncture", "boundary", "ghost"


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        a, b = self.find(a), self.find(b)
        if a != b:
            if a < b:
                self.parent[b] = a
            else:
                self.parent[a] = b


def glued_corners(slot: int, partner: int) -> tuple:
    """Corner identifications induced by gluing ``slot`` to ``partner``."""
    t, k = divmod(slot, 3)
    u, j = divmod(partner, 3)
    return ((3 * t + k, 3 * u + (j + 1) % 3), (3 * t + (k + 1) % 3, 3 * u + j))


@dataclass(frozen=True)
class Triangulation:
    """An oriented triangulated surface.

    ``glue[s]`` is the slot glued to slot ``s`` or -1 for a boundary side.
    ``labels[s]`` is the boundary label of an unpaired slot (None otherwise).
    ``ghost`` is a corner of the ghost vertex, or -1.
    """

    glue: tuple
    labels: tuple
    ghost: int = -1

    def __post_init__(self):
        self._check()

    # -- basic structure -------------------------------------------------
    @property
    def n_triangles(self) -> int:
        return len(self.glue) // 3

    @property
    def triangles(self) -> tuple:
        return tuple((3 * t, 3 * t + 1, 3 * t + 2) for t in range(self.n_triangles))

    @cached_property
    def edge_of(self) -> tuple:
        """Edge id of every slot; edges are numbered by their smallest slot."""
        out = [-1] * len(self.glue)
        n = 0
        for s, p in enumerate(self.glue):
            if out[s] < 0:
                out[s] = n
                if p >= 0:
                    out[p] = n
                n += 1
        return tuple(out)

    @cached_property
    def edge_slots(self) -> tuple:
        """For each edge, its slots (canonical slot first)."""
        slots = [[] for _ in range(self.n_edges)]
        for s, e in enumerate(self.edge_of):
            slots[e].append(s)
        return tuple(tuple(x) for x in slots)

    @property
    def n_edges(self) -> int:
        return (max(self.edge_of) + 1) if self.glue else 0

    def is_boundary_edge(self, e: int) -> bool:
        return len(self.edge_slots[e]) == 1

    @cached_property
    def vertex_of(self) -> tuple:
        """Vertex id of every corner, numbered by smallest corner."""
        uf = _UnionFind(len(self.glue))
        for s, p in enumerate(self.glue):
            if p > s:
                for a, b in glued_corners(s, p):
                    uf.union(a, b)
        ids: dict = {}
        out = []
        for c in range(len(self.glue)):
            r = uf.find(c)
            if r not in ids:
                ids[r] = len(ids)
            out.append(ids[r])
        return tuple(out)

    @property
    def n_vertices(self) -> int:
        return (max(self.vertex_of) + 1) if self.glue else 0

    @cached_property
    def vertex_classes(self) -> tuple:
        classes = [[] for _ in range(self.n_vertices)]
        for c, v in enumerate(self.vertex_of):
            classes[v].append(c)
        return tuple(tuple(x) for x in classes)

    @cached_property
    def vertex_kind(self) -> tuple:
        kinds = [PUNCTURE] * self.n_vertices
        for s, p in enumerate(self.glue):
            if p < 0:
                t, k = divmod(s, 3)
                kinds[self.vertex_of[s]] = BOUNDARY
                kinds[self.vertex_of[3 * t + (k + 1) % 3]] = BOUNDARY
        if self.ghost >= 0:
            kinds[self.vertex_of[self.ghost]] = GHOST
        return tuple(kinds)

    @property
    def ghost_vertex(self) -> int:
        return self.vertex_of[self.ghost] if self.ghost >= 0 else -1

    def next_boundary_slot(self, s: int) -> int:
        """The unpaired slot following ``s`` along its boundary circle."""
        t, k = divmod(s, 3)
        cur = 3 * t + (k + 1) % 3
        for _ in range(len(self.glue) + 1):
            if self.glue[cur] < 0:
                return cur
            u, j = divmod(self.glue[cur], 3)
            cur = 3 * u + (j + 1) % 3
        raise InvalidTriangulation("boundary walk does not close")

    @cached_property
    def boundary_circles(self) -> tuple:
        """Tuple of (label, slots) per boundary circle, ordered by label."""
        seen = set()
        circles = []
        for s, p in enumerate(self.glue):
            if p >= 0 or s in seen:
                continue
            cyc = [s]
            seen.add(s)
            nxt = self.next_boundary_slot(s)
            while nxt != s:
                if nxt in seen:
                    raise InvalidTriangulation("boundary sides do not form circles")
                cyc.append(nxt)
                seen.add(nxt)
                nxt = self.next_boundary_slot(nxt)
            labels = {self.labels[x] for x in cyc}
            if len(labels) != 1:
                raise InvalidTriangulation(f"boundary circle through slot {s} carries labels {labels}")
            circles.append((labels.pop(), tuple(cyc)))
        circles.sort(key=lambda c: (_label_key(c[0]), c[1]))
        return tuple(circles)

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_triangles

    def puncture_vertices(self) -> tuple:
        return tuple(v for v, k in enumerate(self.vertex_kind) if k == PUNCTURE)

    # -- validation ------------------------------------------------------
    def _check(self) -> None:
        n = len(self.glue)
        if n == 0 or n % 3 or len(self.labels) != n:
            raise InvalidTriangulation("slot tables must be non-empty, of equal length, multiple of 3")
        for s, p in enumerate(self.glue):
            if p == s:
                raise InvalidTriangulation(f"slot {s} glued to itself")
            if p >= n or p < -1:
                raise InvalidTriangulation(f"slot {s} glued to missing slot {p}")
            if p >= 0 and self.glue[p] != s:
                raise InvalidTriangulation(f"gluing not symmetric at slot {s}")
            if (p < 0) != (self.labels[s] is not None):
                raise InvalidTriangulation(f"slot {s}: labels must mark exactly the unpaired slots")
        # connectivity over triangles
        uf = _UnionFind(n // 3)
        for s, p in enumerate(self.glue):
            if p >= 0:
                uf.union(s // 3, p // 3)
        if len({uf.find(t) for t in range(n // 3)}) != 1:
            raise InvalidTriangulation("triangulation is not connected")
        if self.ghost >= n:
            raise InvalidTriangulation("ghost corner out of range")
        if self.ghost >= 0 and self.vertex_kind[self.vertex_of[self.ghost]] != GHOST:
            raise InvalidTriangulation("ghost vertex must be interior")
        self.boundary_circles  # raises on malformed boundary
        if (2 - len(self.boundary_circles) - self.euler_characteristic) % 2:
            raise NonIntegerGenus("odd value of 2 - q - chi")


def _label_key(label) -> tuple:
    if isinstance(label, ExteriorLabel):
        return (0, label.index, 0)
    return (1, label.curve, label.side)


def signature_of(t: Triangulation) -> SurfaceSignature:
    """Signature computed from Euler characteristic, punctures and boundary circles.

    The ghost vertex is not a puncture.
    """
    q = len(t.boundary_circles)
    twice_genus = 2 - q - t.euler_characteristic
    if twice_genus % 2 or twice_genus < 0:
        raise NonIntegerGenus(f"2 - q - chi = {twice_genus}")
    m = sum(1 for k in t.vertex_kind if k == PUNCTURE)
    return SurfaceSignature(twice_genus // 2, m, q)


# ---------------------------------------------------------------------------
# builder


class _Draft:
    """Mutable triangulation used while building."""

    def __init__(self, glue: list, labels: Optional[list] = None):
        self.glue = list(glue)
        self.labels = list(labels) if labels is not None else [None] * len(glue)

    def add_triangles(self, k: int) -> int:
        first = len(self.glue) // 3
        self.glue.extend([-1] * (3 * k))
        self.labels.extend([None] * (3 * k))
        return first

    def join(self, a: int, b: int) -> None:
        self.glue[a], self.glue[b] = b, a
        self.labels[a] = self.labels[b] = None

    def freeze(self, ghost: int = -1) -> Triangulation:
        return Triangulation(tuple(self.glue), tuple(self.labels), ghost)

    def vertex_data(self):
        uf = _UnionFind(len(self.glue))
        for s, p in enumerate(self.glue):
            if p > s:
                for a, b in glued_corners(s, p):
                    uf.union(a, b)
        root = [uf.find(c) for c in range(len(self.glue))]
        boundary = set()
        for s, p in enumerate(self.glue):
            if p < 0:
                t, k = divmod(s, 3)
                boundary.add(root[s])
                boundary.add(root[3 * t + (k + 1) % 3])
        return root, boundary


def _polygon_surface(g: int) -> _Draft:
    """One-vertex closed genus-g surface from the fan-triangulated 4g-gon."""
    n = 4 * g
    d = _Draft([])
    d.add_triangles(n - 2)
    # triangle i-1 has corners (0, i, i+1) of the polygon, i = 1..n-2

    def polygon_side(j: int) -> int:
        if j == 0:
            return 0
        if j == n - 1:
            return 3 * (n - 3) + 2
        return 3 * (j - 1) + 1

    for j in range(2, n - 1):  # diagonal from polygon vertex 0 to j
        d.join(3 * (j - 2) + 2, 3 * (j - 1))
    for h in range(g):
        d.join(polygon_side(4 * h), polygon_side(4 * h + 2))
        d.join(polygon_side(4 * h + 1), polygon_side(4 * h + 3))
    return d


def _sphere3() -> _Draft:
    d = _Draft([])
    d.add_triangles(2)
    d.join(0, 5)
    d.join(1, 4)
    d.join(2, 3)
    return d


def _stellar(d: _Draft, t: int) -> None:
    """Insert a new vertex inside triangle t (one triangle becomes three)."""
    b = d.add_triangles(2)
    c = b + 1
    outer1, outer2 = d.glue[3 * t + 1], d.glue[3 * t + 2]
    lab1, lab2 = d.labels[3 * t + 1], d.labels[3 * t + 2]
    d.glue[3 * t + 1] = d.glue[3 * t + 2] = -1
    for new, old, lab in ((3 * b, outer1, lab1), (3 * c, outer2, lab2)):
        if old >= 0:
            d.join(new, old)
        else:
            d.labels[new] = lab
    d.join(3 * t + 1, 3 * b + 2)
    d.join(3 * t + 2, 3 * c + 1)
    d.join(3 * b + 1, 3 * c + 2)


def _puncture_to_boundary(d: _Draft, corner: int, label: int) -> None:
    """Turn the interior vertex containing ``corner`` into a boundary circle.

    An edge ending at the vertex is unglued and a new triangle is inserted in
    the slit; its free side becomes a one-edge boundary loop.
    """
    root, boundary = d.vertex_data()
    v = root[corner]
    best = None
    for s, p in enumerate(d.glue):
        if p < 0:
            continue
        t, k = divmod(s, 3)
        if root[3 * t + (k + 1) % 3] != v:
            continue
        u = root[s]
        rank = 0 if (u != v and u not in boundary) else 1 if u != v else 2
        if best is None or rank < best[0]:
            best = (rank, s)
    if best is None:
        raise UnsupportedSignature("no edge available for the boundary gadget")
    s1 = best[1]
    s2 = d.glue[s1]
    d.glue[s1] = d.glue[s2] = -1
    n = d.add_triangles(1)
    d.join(3 * n, s1)
    d.join(3 * n + 1, s2)
    d.labels[3 * n + 2] = ExteriorLabel(label)


def build_standard_surface(sig: SurfaceSignature) -> Triangulation:
    """Deterministic triangulation with the given signature.

    Closed unmarked surfaces receive one ghost vertex.  Spheres with at most
    two punctures and no boundary have no triangulation of this kind.
    """
    g, m, q = sig.genus, sig.punctures, sig.boundary
    if g == 0 and m + q <= 2:
        if q == 0:
            raise UnsupportedSignature(f"sphere with {m} punctures has no ideal triangulation")
        if (m, q) == (0, 1):
            return Triangulation((-1, -1, -1), (ExteriorLabel(1),) * 3)
        cone = _Draft([-1, 2, 1], [ExteriorLabel(1), None, None])
        if (m, q) == (1, 1):
            return cone.freeze()
        _puncture_to_boundary(cone, 2, 2)
        return cone.freeze()
    d = _polygon_surface(g) if g else _sphere3()
    n_vertices = 1 if g else 3
    step = 0
    while n_vertices < m + q:
        f = len(d.glue) // 3
        _stellar(d, (3 * step) % f)
        n_vertices += 1
        step += 1
    for label in range(1, q + 1):
        root, boundary = d.vertex_data()
        interior = sorted({root[c] for c in range(len(d.glue)) if root[c] not in boundary})
        # convert the most recently created interior vertex
        target = max(interior, key=lambda r: max(c for c in range(len(d.glue)) if root[c] == r))
        _puncture_to_boundary(d, target, label)
    t = d.freeze(ghost=0 if m + q == 0 else -1)
    if signature_of(t) != sig:
        raise UnsupportedSignature(f"builder produced {signature_of(t)} instead of {sig}")
    return t


# ---------------------------------------------------------------------------
# normal arcs


def corner_counts(t: Triangulation, weights: Sequence[int]) -> list:
    """Per triangle, the number of normal arcs cutting off each corner."""
    out = []
    eo = t.edge_of
    for tri in range(t.n_triangles):
        w = [weights[eo[3 * tri + k]] for k in range(3)]
        out.append(tuple((w[(k + 2) % 3] + w[k] - w[(k + 1) % 3]) // 2 for k in range(3)))
    return out


def arc_exit(t: Triangulation, weights: Sequence[int], cc: list, slot: int, pos: int) -> tuple:
    """Follow the normal arc entering ``slot`` at ``pos`` to its exit (slot, pos)."""
    tri, k = divmod(slot, 3)
    if pos < cc[tri][k]:
        out = 3 * tri + (k + 2) % 3
        return out, weights[t.edge_of[out]] - 1 - pos
    j = weights[t.edge_of[slot]] - 1 - pos
    return 3 * tri + (k + 1) % 3, j


def arc_of(t: Triangulation, weights: Sequence[int], cc: list, slot_in: int, pos_in: int) -> tuple:
    """(corner, index, native) of the arc entering at (slot_in, pos_in).

    Corner-k arcs run natively from side k to side k-1; ``native`` tells whether
    the arc is traversed that way.
    """
    tri, k = divmod(slot_in, 3)
    if pos_in < cc[tri][k]:
        return k, pos_in, True
    return (k + 1) % 3, weights[t.edge_of[slot_in]] - 1 - pos_in, False


def trace_walks(t: Triangulation, weights: Sequence[int]) -> list:
    """Trace a normal multicurve into components.

    Each component is a list of exits ``(slot, pos)``: the curve leaves the
    triangle of ``slot`` through that side at position ``pos`` (measured along
    the side's own direction).  Components start at the smallest crossing.
    """
    cc = corner_counts(t, weights)
    glue = t.glue
    seen = set()
    comps = []
    for e, slots in enumerate(t.edge_slots):
        w = weights[e]
        if w == 0:
            continue
        s0 = slots[0]
        for p0 in range(w):
            if (s0, p0) in seen:
                continue
            # enter the triangle of the partner slot, arriving at position w-1-p0
            slot, pos = glue[s0], w - 1 - p0
            walk = []
            while True:
                out, opos = arc_exit(t, weights, cc, slot, pos)
                walk.append((out, opos))
                key = (out, opos)
                if glue[out] < out:
                    key = (glue[out], weights[t.edge_of[out]] - 1 - opos)
                seen.add(key)
                slot, pos = glue[out], weights[t.edge_of[out]] - 1 - opos
                if out == s0 and opos == p0:
                    break
            comps.append(walk)
    return comps


def walk_weights(t: Triangulation, walk) -> tuple:
    """Edge crossing counts of a walk given as exits (slot or (slot, pos))."""
    w = [0] * t.n_edges
    for x in walk:
        s = x[0] if isinstance(x, tuple) else x
        w[t.edge_of[s]] += 1
    return tuple(w)


# ---------------------------------------------------------------------------
# cutting


@dataclass(frozen=True)
class CutResult:
    pieces: tuple
    provenance: tuple  # per piece: tuple of labels of its boundary circles

    def piece_signatures(self) -> tuple:
        return tuple(signature_of(p) for p in self.pieces)


@dataclass
class _CutComplex:
    """Refined complex produced by cutting, with bookkeeping for curve building.

    ``tri_origin[T]``: original triangle containing new triangle T.
    ``slot_origin[S]``: original slot if S lies on an original edge, else -1.
    ``arc_origin[S]``: (component, visit) for slots lying on the cut curve.
    ``piece_of[T]`` / ``local[T]``: piece index and index inside the piece.
    """

    glue: tuple
    labels: tuple
    ghost: int
    tri_origin: list
    slot_origin: list
    arc_origin: dict
    piece_of: list
    local: list
    members: list
    result: CutResult
    walks: list


def _region_polygons(t: Triangulation, weights, cc, owner):
    """Yield (triangle, pieces) for every region of every refined triangle.

    A piece is ('seg', slot, index) or ('arc', comp, visit, side).
    """
    eo = t.edge_of
    for tri in range(t.n_triangles):
        w = [weights[eo[3 * tri + k]] for k in range(3)]
        c = cc[tri]
        slot = [3 * tri + k for k in range(3)]

        def arc(k, j, native):
            comp, visit, comp_native = owner[(tri, k, j)]
            return ("arc", comp, visit, 0 if native == comp_native else 1)

        for k in range(3):
            km = (k + 2) % 3
            if c[k] == 0:
                continue
            yield tri, [("seg", slot[k], 0), arc(k, 0, True), ("seg", slot[km], w[km])]
            for j in range(c[k] - 1):
                yield tri, [("seg", slot[k], j + 1), arc(k, j + 1, True),
                            ("seg", slot[km], w[km] - 1 - j), arc(k, j, False)]
        central = []
        for k in range(3):
            central.append(("seg", slot[k], c[k]))
            k1 = (k + 1) % 3
            if c[k1] > 0:
                central.append(arc(k1, c[k1] - 1, False))
        yield tri, central


def cut_complex(t: Triangulation, weights: Sequence[int]) -> _CutComplex:
    eo = t.edge_of
    for e, slots in enumerate(t.edge_slots):
        if len(slots) == 1 and weights[e]:
            raise InvalidCoordinates(f"boundary edge {e} has positive weight")
    cc = corner_counts(t, weights)
    walks = sorted(trace_walks(t, weights), key=lambda w: walk_weights(t, w))
    owner = {}
    for ci, walk in enumerate(walks):
        n = len(walk)
        for i in range(n):
            s_in = t.glue[walk[i - 1][0]]
            p_in = weights[eo[s_in]] - 1 - walk[i - 1][1]
            k, j, native = arc_of(t, weights, cc, s_in, p_in)
            owner[(s_in // 3, k, j)] = (ci, i, native)
    glue, labels = [], []
    tri_origin, slot_origin, arc_origin = [], [], {}
    seg_slot = {}

    def new_triangle(orig):
        glue.extend([-1, -1, -1])
        labels.extend([None, None, None])
        tri_origin.append(orig)
        slot_origin.extend([-1, -1, -1])
        return len(tri_origin) - 1

    def place(piece, slot):
        if piece[0] == "seg":
            _, s, idx = piece
            seg_slot[(s, idx)] = slot
            if t.glue[s] < 0:
                labels[slot] = t.labels[s]
            slot_origin[slot] = s
        else:
            _, comp, visit, side = piece
            labels[slot] = CurveSide(comp + 1, side)
            arc_origin[slot] = (comp, visit)

    for tri, poly in _region_polygons(t, weights, cc, owner):
        n = len(poly)
        prev = None
        for i in range(1, n - 1):
            T = new_triangle(tri)
            if i == 1:
                place(poly[0], 3 * T)
            else:
                glue[3 * T] = prev
                glue[prev] = 3 * T
            place(poly[i], 3 * T + 1)
            if i == n - 2:
                place(poly[n - 1], 3 * T + 2)
            prev = 3 * T + 2
    for (s, idx), slot in seg_slot.items():
        p = t.glue[s]
        if p >= 0:
            other = seg_slot[(p, weights[eo[s]] - idx)]
            glue[slot] = other
    ghost = -1
    if t.ghost >= 0:
        gt, gk = divmod(t.ghost, 3)
        ghost = seg_slot[(3 * gt + gk, 0)]  # corner gk starts segment 0 of side gk
    whole_glue = tuple(glue)
    # split into connected pieces
    uf = _UnionFind(len(tri_origin))
    for s, p in enumerate(whole_glue):
        if p >= 0:
            uf.union(s // 3, p // 3)
    roots = {}
    piece_of, local = [], []
    members = []
    for T in range(len(tri_origin)):
        r = uf.find(T)
        if r not in roots:
            roots[r] = len(roots)
            members.append([])
        piece_of.append(roots[r])
        local.append(len(members[roots[r]]))
        members[roots[r]].append(T)
    pieces, prov = [], []
    for pi, mem in enumerate(members):
        pg, pl = [], []
        for T in mem:
            for k in range(3):
                s = whole_glue[3 * T + k]
                pg.append(-1 if s < 0 else 3 * local[s // 3] + s % 3)
                pl.append(labels[3 * T + k])
        pghost = -1
        if ghost >= 0 and piece_of[ghost // 3] == pi:
            pghost = 3 * local[ghost // 3] + ghost % 3
        piece = Triangulation(tuple(pg), tuple(pl), pghost)
        pieces.append(piece)
        prov.append(tuple(lab for lab, _ in piece.boundary_circles))
    return _CutComplex(whole_glue, tuple(labels), ghost, tri_origin, slot_origin, arc_origin, piece_of, local,
                       members, CutResult(tuple(pieces), tuple(prov)), walks)


def cut_along(t: Triangulation, c) -> CutResult:
    """Cut ``t`` along the multicurve ``c`` (a NormalCoordinates value)."""
    if c.surface != t:
        raise InvalidCoordinates("curve lives on a different triangulation")
    return cut_complex(t, c.weights).result
