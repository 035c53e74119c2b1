"""Normal coordinates, tracing, component classification and generic families."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import (BoundaryWeightNonzero, IsotopicPair, MultipleComponents,
                     NonGenericComponent, ParityViolation, SurfaceMismatch,
                     TriangleInequalityViolation, InvalidCoordinates)
from .surface_model import (CurveSide, ExteriorLabel, Triangulation, corner_counts,
                            cut_complex, signature_of, trace_walks, walk_weights)


@dataclass(frozen=True)
class NormalCoordinates:
    surface: Triangulation
    weights: tuple

    def __add__(self, other: "NormalCoordinates") -> "NormalCoordinates":
        _same_surface(self, other)
        return validate(self.surface, [a + b for a, b in zip(self.weights, other.weights)])

    def __mul__(self, k: int) -> "NormalCoordinates":
        return validate(self.surface, [k * a for a in self.weights])

    @property
    def is_empty(self) -> bool:
        return not any(self.weights)

    def total_weight(self) -> int:
        return sum(self.weights)


def _same_surface(a: NormalCoordinates, b: NormalCoordinates) -> None:
    if a.surface != b.surface:
        raise SurfaceMismatch("multicurves live on different triangulations")


def validate(t: Triangulation, w: Sequence[int]) -> NormalCoordinates:
    """Check parity, triangle inequalities and zero boundary weights."""
    w = tuple(int(x) for x in w)
    if len(w) != t.n_edges:
        raise InvalidCoordinates(f"expected {t.n_edges} weights, got {len(w)}")
    for e, x in enumerate(w):
        if x < 0:
            raise InvalidCoordinates(f"edge {e} has negative weight {x}")
        if x and t.is_boundary_edge(e):
            raise BoundaryWeightNonzero(f"boundary edge {e} has weight {x}")
    eo = t.edge_of
    for tri in range(t.n_triangles):
        x, y, z = (w[eo[3 * tri + k]] for k in range(3))
        if (x + y + z) % 2:
            raise ParityViolation(f"triangle {tri}: odd weight sum {x}+{y}+{z}")
        if x > y + z or y > x + z or z > x + y:
            raise TriangleInequalityViolation(f"triangle {tri}: weights ({x},{y},{z})")
    return NormalCoordinates(t, w)


def empty(t: Triangulation) -> NormalCoordinates:
    return NormalCoordinates(t, (0,) * t.n_edges)


@dataclass(frozen=True)
class TracedMulticurve:
    """Components as cyclic sequences of (edge, strand) crossings.

    ``walks`` holds the same components as exits (slot, position); ``corners``
    is the per-triangle chord layout (arcs cutting off each corner).
    """

    components: tuple
    walks: tuple
    corners: tuple

    def strand_counts(self, n_edges: int) -> list:
        out = [0] * n_edges
        for comp in self.components:
            for e, _ in comp:
                out[e] += 1
        return out


def trace(c: NormalCoordinates) -> TracedMulticurve:
    t = c.surface
    walks = trace_walks(t, c.weights)
    eo = t.edge_of
    comps = []
    for walk in walks:
        seq = []
        for s, p in walk:
            # record the strand index from the canonical side of the edge
            if t.edge_slots[eo[s]][0] != s:
                p = c.weights[eo[s]] - 1 - p
            seq.append((eo[s], p))
        comps.append(tuple(seq))
    return TracedMulticurve(tuple(comps), tuple(tuple(w) for w in walks),
                            tuple(corner_counts(t, c.weights)))


def components(c: NormalCoordinates) -> list:
    """Single-component coordinates of each traced component, in trace order."""
    t = c.surface
    return [NormalCoordinates(t, walk_weights(t, w)) for w in trace_walks(t, c.weights)]


class ComponentClass(Enum):
    TRIVIAL = "trivial"
    PUNCTURE_PERIPHERAL = "puncture_peripheral"
    BOUNDARY_PARALLEL = "boundary_parallel"
    GENERIC = "generic"

    def __str__(self) -> str:
        return self.value


def classify_component(t: Triangulation, component: NormalCoordinates) -> ComponentClass:
    if component.surface != t:
        raise SurfaceMismatch("component lives on a different triangulation")
    walks = trace_walks(t, component.weights)
    if len(walks) != 1:
        raise MultipleComponents(f"expected one component, found {len(walks)}")
    res = cut_complex(t, component.weights).result
    for piece in res.pieces:
        sig = signature_of(piece)
        labels = [lab for lab, _ in piece.boundary_circles]
        if sig.genus or len(labels) > 2:
            continue
        if len(labels) == 1 and isinstance(labels[0], CurveSide):
            if sig.punctures == 0:
                return ComponentClass.TRIVIAL
            if sig.punctures == 1:
                return ComponentClass.PUNCTURE_PERIPHERAL
        if len(labels) == 2 and sig.punctures == 0:
            kinds = {type(x) for x in labels}
            if kinds == {CurveSide, ExteriorLabel}:
                return ComponentClass.BOUNDARY_PARALLEL
    return ComponentClass.GENERIC


def _cobound_annulus(a: NormalCoordinates, b: NormalCoordinates) -> bool:
    """Whether disjoint single curves a, b cobound an annulus (ghost allowed inside)."""
    t = a.surface
    union = [x + y for x, y in zip(a.weights, b.weights)]
    res = cut_complex(t, union).result
    for piece in res.pieces:
        sig = signature_of(piece)
        labels = [lab for lab, _ in piece.boundary_circles]
        if (sig.genus, sig.punctures, sig.boundary) == (0, 0, 2):
            if all(isinstance(x, CurveSide) for x in labels) and labels[0].curve != labels[1].curve:
                return True
    return False


def _disjoint_pair(a: NormalCoordinates, b: NormalCoordinates) -> bool:
    t = a.surface
    union = [x + y for x, y in zip(a.weights, b.weights)]
    got = sorted(walk_weights(t, w) for w in trace_walks(t, union))
    return got == sorted([a.weights, b.weights])


def canonical_eq(a: NormalCoordinates, b: NormalCoordinates) -> bool:
    """Isotopy of multicurves via their normal coordinates.

    On surfaces with a ghost vertex, two disjoint single curves separated only
    by the ghost are also identified.  Intersecting curves with different
    coordinates are reported distinct there.
    """
    _same_surface(a, b)
    if a.weights == b.weights:
        return True
    t = a.surface
    if t.ghost < 0:
        return False
    ca, cb = components(a), components(b)
    if len(ca) != len(cb):
        return False
    if len(ca) == 1:
        return _disjoint_pair(a, b) and _cobound_annulus(a, b)
    # multicurves: match components greedily (components of one side are disjoint)
    left = list(cb)
    for x in ca:
        for i, y in enumerate(left):
            if canonical_eq(x, y):
                del left[i]
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class GenericFamily:
    surface: Triangulation
    components: tuple

    @property
    def r(self) -> int:
        return len(self.components)

    @property
    def union(self) -> NormalCoordinates:
        w = [0] * self.surface.n_edges
        for c in self.components:
            for e, x in enumerate(c.weights):
                w[e] += x
        return NormalCoordinates(self.surface, tuple(w))

    def __iter__(self):
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)


def as_generic_family(t: Triangulation, c: NormalCoordinates) -> GenericFamily:
    if c.surface != t:
        raise SurfaceMismatch("multicurve lives on a different triangulation")
    validate(t, c.weights)
    comps = sorted(components(c), key=lambda x: x.weights)
    for i, x in enumerate(comps):
        cls = classify_component(t, x)
        if cls is not ComponentClass.GENERIC:
            err = NonGenericComponent(f"component {i + 1} is {cls}")
            err.index, err.component_class = i + 1, cls
            raise err
    for i in range(len(comps)):
        for j in range(i + 1, len(comps)):
            if canonical_eq(comps[i], comps[j]):
                err = IsotopicPair(f"components {i + 1} and {j + 1} are isotopic")
                err.indices = (i + 1, j + 1)
                raise err
    return GenericFamily(t, tuple(comps))


def family_from_curves(curves: Sequence[NormalCoordinates]) -> GenericFamily:
    """Generic family from pairwise disjoint single curves (validated)."""
    if not curves:
        raise ValueError("need at least one curve; use as_generic_family for the empty family")
    t = curves[0].surface
    w = [0] * t.n_edges
    for c in curves:
        _same_surface(curves[0], c)
        for e, x in enumerate(c.weights):
            w[e] += x
    fam = as_generic_family(t, validate(t, w))
    if fam.r != len(curves):
        raise InvalidCoordinates("curves are not pairwise disjoint single curves")
    return fam
