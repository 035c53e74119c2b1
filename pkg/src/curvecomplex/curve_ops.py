"""Intersection numbers, Dehn twists and curve constructions.

Curves are handled as closed walks in the dual graph of the triangulation:
a walk is the cyclic list of slots through which the curve leaves successive
triangles.  Normal curves give reduced walks, and the reduced cyclic walk of
a free homotopy class is unique, so edge crossing counts of a reduced walk
are the normal coordinates of the class.

Sign convention: a positive twist makes a strand turn left onto the twist
curve, left being taken with respect to the surface orientation.
"""

from __future__ import annotations

import random
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (InvalidCoordinates, NoTransversal, NonGenericTwistCurve,
                     NotDisjoint, StepBudgetExceeded, SurfaceMismatch, CurveComplexError)
from .multicurve import (ComponentClass, GenericFamily, NormalCoordinates,
                         as_generic_family, classify_component, validate)
from .surface_model import (PUNCTURE, CurveSide, Triangulation,
                            cut_complex, trace_walks, walk_weights)

DEFAULT_STEP_BUDGET = 5_000_000


class _Budget:
    def __init__(self, limit: Optional[int]):
        self.limit = DEFAULT_STEP_BUDGET if limit is None else limit
        self.used = 0

    def spend(self, k: int = 1) -> None:
        self.used += k
        if self.used > self.limit:
            raise StepBudgetExceeded(f"step budget of {self.limit} exhausted")


# ---------------------------------------------------------------------------
# walks


def reverse_walk(glue: Sequence[int], walk: Sequence[int]) -> list:
    return [glue[s] for s in reversed(walk)]


def reduce_walk(glue: Sequence[int], walk: Sequence[int], budget: Optional[_Budget] = None) -> list:
    """Free and cyclic reduction; a backtrack is an exit followed by its partner."""
    out = []
    for s in walk:
        if out and glue[out[-1]] == s:
            out.pop()
        else:
            out.append(s)
    if budget is not None:
        budget.spend(len(walk))
    i, j = 0, len(out) - 1
    while i < j and glue[out[j]] == out[i]:
        i += 1
        j -= 1
    return out[i:j + 1]


def curve_walks(c: NormalCoordinates) -> list:
    """Exit-slot walks of the components of c."""
    return [[s for s, _ in w] for w in trace_walks(c.surface, c.weights)]


def _same_cycle(a: Sequence[int], b: Sequence[int]) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    doubled = list(b) + list(b)
    n = len(a)
    first = a[0]
    for k in range(n):
        if doubled[k] == first and doubled[k:k + n] == list(a):
            return True
    return False


def curve_from_walk(t: Triangulation, walk: Sequence[int]) -> Optional[NormalCoordinates]:
    """Normal coordinates of a closed walk if it is a simple closed curve, else None."""
    red = reduce_walk(t.glue, walk)
    if not red:
        return None
    w = walk_weights(t, red)
    try:
        c = validate(t, w)
    except CurveComplexError:
        return None
    traced = curve_walks(c)
    if len(traced) != 1:
        return None
    got = traced[0]
    if _same_cycle(red, got) or _same_cycle(reverse_walk(t.glue, red), got):
        return c
    return None


# ---------------------------------------------------------------------------
# intersection numbers


def _left_of(entry: int, exit_: int) -> bool:
    """Whether the third side lies left of an arc from side ``entry`` to side ``exit_``."""
    return (exit_ - entry) % 3 == 1


def _linked_pairs(glue: Sequence[int], W: Sequence[int], V: Sequence[int]) -> list:
    """Pairs (i, j) of visits where lifts of W and V start a common run and cross.

    Common runs in the universal cover are found by matching exits with
    different entries and walking forward until the walks part; the lifts
    cross exactly when V enters and leaves the run on different sides of W.
    """
    n, m = len(W), len(V)
    at = defaultdict(list)
    for j, s in enumerate(V):
        at[s].append(j)
    out = []
    for i, s in enumerate(W):
        pa = glue[W[i - 1]]
        for j in at.get(s, ()):
            pb = glue[V[j - 1]]
            if pa == pb:
                continue
            k = 1
            while k <= n + m and W[(i + k) % n] == V[(j + k) % m]:
                k += 1
            if k > n + m:
                continue
            t_in = glue[W[(i + k - 1) % n]]
            left_in = (pb - s) % 3 == 1
            left_out = _left_of(t_in % 3, W[(i + k) % n] % 3)
            if left_in != left_out:
                out.append((i, j))
    return out


def _pair_count(glue, W, V) -> int:
    return len(_linked_pairs(glue, W, V)) + len(_linked_pairs(glue, W, reverse_walk(glue, V)))


@dataclass(frozen=True)
class Arrangement:
    """Overlay of two traced multicurves in general position.

    ``interleaving[e]`` lists the strands met along edge e (from its canonical
    slot) as ("a"|"b", component, strand); ``crossings`` are the transverse
    crossings of the overlay as (triangle, a-component, a-visit, b-component,
    b-visit); ``essential`` lists the crossings of the minimal position as
    (a-component, a-visit, b-component, b-visit, reversed).
    """

    interleaving: tuple
    crossings: tuple
    essential: tuple

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)


def intersection_number(a: NormalCoordinates, b: NormalCoordinates) -> int:
    """Geometric intersection number, summed over pairs of components."""
    if a.surface != b.surface:
        raise SurfaceMismatch("multicurves live on different triangulations")
    glue = a.surface.glue
    total = 0
    wb = curve_walks(b)
    for W in curve_walks(a):
        for V in wb:
            total += _pair_count(glue, W, V)
    return total


class _Overlay:
    """General-position overlay of a single curve ``a`` and a multicurve ``b``.

    On every edge the strands of ``a`` come first along the canonical slot.
    """

    def __init__(self, a: NormalCoordinates, b: NormalCoordinates):
        t = a.surface
        self.t = t
        self.wa, self.wb = a.weights, b.weights
        self.A = trace_walks(t, a.weights)
        self.B = trace_walks(t, b.weights)
        canon = [slots[0] for slots in t.edge_slots]
        self.canon = canon

    def merged(self, slot: int, pos: int, is_a: bool) -> int:
        e = self.t.edge_of[slot]
        if self.canon[e] == slot:
            return pos if is_a else self.wa[e] + pos
        return self.wb[e] + pos if is_a else pos

    def chords(self, walks, is_a: bool) -> dict:
        """Per triangle: list of (entry point, exit point, component, visit)."""
        t = self.t
        weights = self.wa if is_a else self.wb
        out = defaultdict(list)
        for ci, walk in enumerate(walks):
            n = len(walk)
            for i in range(n):
                ps, pp = walk[i - 1]
                s_in = t.glue[ps]
                p_in = weights[t.edge_of[ps]] - 1 - pp
                s_out, p_out = walk[i]
                P = (s_in % 3, self.merged(s_in, p_in, is_a))
                Q = (s_out % 3, self.merged(s_out, p_out, is_a))
                out[s_out // 3].append((P, Q, ci, i))
        return out

    def crossings(self):
        """Yield (b-comp, b-visit, order key, a-comp, a-visit, b_to_left_of_a)."""
        ca = self.chords(self.A, True)
        cb = self.chords(self.B, False)
        for tri, bl in cb.items():
            al = ca.get(tri)
            if not al:
                continue
            for P, Q, bc, bv in bl:
                for Ea, Xa, ac, av in al:
                    inE, inX = _between(Ea, P, Q), _between(Xa, P, Q)
                    if inE == inX:
                        continue
                    R = Xa if inX else Ea
                    yield bc, bv, _ccw_dist(P, R), ac, av, inX

    def arrangement(self) -> Arrangement:
        t = self.t
        inter = []
        for e, slots in enumerate(t.edge_slots):
            s0 = slots[0]
            row = [None] * (self.wa[e] + self.wb[e])
            for label, walks, is_a in (("a", self.A, True), ("b", self.B, False)):
                for ci, walk in enumerate(walks):
                    for s, p in walk:
                        if t.edge_of[s] != e:
                            continue
                        if s != s0:
                            p = (self.wa[e] if is_a else self.wb[e]) - 1 - p
                        row[self.merged(s0, p, is_a)] = (label, ci, p)
            inter.append(tuple(row))
        cross = tuple(sorted((self.B[bc][bv][0] // 3, ac, av, bc, bv)
                             for bc, bv, _, ac, av, _ in self.crossings()))
        glue = t.glue
        ess = []
        for ac, A in enumerate(self.A):
            W = [s for s, _ in A]
            for bc, B in enumerate(self.B):
                V = [s for s, _ in B]
                ess.extend((ac, i, bc, j, False) for i, j in _linked_pairs(glue, W, V))
                ess.extend((ac, i, bc, j, True)
                           for i, j in _linked_pairs(glue, W, reverse_walk(glue, V)))
        return Arrangement(tuple(inter), cross, tuple(sorted(ess)))


def _between(x, lo, hi) -> bool:
    if lo < hi:
        return lo < x < hi
    return x > lo or x < hi


def _ccw_dist(P, R) -> tuple:
    return ((R[0] - P[0]) % 3, R[1] - P[1]) if R[0] != P[0] else (0 if R[1] > P[1] else 3, R[1] - P[1])


def arrangement(a: NormalCoordinates, b: NormalCoordinates) -> Arrangement:
    if a.surface != b.surface:
        raise SurfaceMismatch("multicurves live on different triangulations")
    if len(trace_walks(a.surface, a.weights)) > 1:
        raise InvalidCoordinates("arrangement expects a single curve as first argument")
    return _Overlay(a, b).arrangement()


# ---------------------------------------------------------------------------
# Dehn twists


def _require_twist_curve(a: NormalCoordinates) -> None:
    try:
        cls = classify_component(a.surface, a)
    except CurveComplexError as exc:
        raise NonGenericTwistCurve(f"twist curve is not a single curve: {exc}") from None
    if cls is not ComponentClass.GENERIC:
        raise NonGenericTwistCurve(f"twist curve is {cls}")


def _twist(a: NormalCoordinates, n: int, b: NormalCoordinates, budget: _Budget) -> NormalCoordinates:
    t = a.surface
    if n == 0 or b.is_empty:
        return b
    ov = _Overlay(a, b)
    A = [s for s, _ in ov.A[0]]
    na = len(A)
    glue = t.glue
    fwd = [A[i:] + A[:i] for i in range(na)]
    bwd = [[glue[A[(i - 1 - k) % na]] for k in range(na)] for i in range(na)]
    inserts = defaultdict(list)
    for bc, bv, key, ac, av, to_left in ov.crossings():
        inserts[(bc, bv)].append((key, av, to_left))
    total = [0] * t.n_edges
    reps = abs(n)
    for bc, walk in enumerate(ov.B):
        new = []
        for j, (s, _) in enumerate(walk):
            for key, av, to_left in sorted(inserts.get((bc, j), ())):
                backward = to_left == (n > 0)
                loop = bwd[av] if backward else fwd[av]
                budget.spend(reps * na)
                for _ in range(reps):
                    new.extend(loop)
            new.append(s)
        red = reduce_walk(glue, new, budget)
        for s in red:
            total[t.edge_of[s]] += 1
    return validate(t, total)


def dehn_twist(a: NormalCoordinates, n: int, b: NormalCoordinates,
               step_budget: Optional[int] = None) -> NormalCoordinates:
    """The image of b under the n-th power of the twist along a."""
    if a.surface != b.surface:
        raise SurfaceMismatch("multicurves live on different triangulations")
    _require_twist_curve(a)
    return _twist(a, n, b, _Budget(step_budget))


@dataclass(frozen=True)
class TwistWord:
    """A product of twist powers; the rightmost letter acts first."""

    letters: tuple = ()

    def __post_init__(self):
        surf = None
        for curve, k in self.letters:
            if not isinstance(k, int) or k == 0:
                raise ValueError("exponents must be non-zero integers")
            if surf is not None and curve.surface != surf:
                raise SurfaceMismatch("letters live on different triangulations")
            surf = curve.surface
            _require_twist_curve(curve)

    def inverse(self) -> "TwistWord":
        return TwistWord(tuple((c, -k) for c, k in reversed(self.letters)))

    def __mul__(self, other: "TwistWord") -> "TwistWord":
        return TwistWord(self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)


def apply_word(w: TwistWord, c: NormalCoordinates, step_budget: Optional[int] = None) -> NormalCoordinates:
    budget = _Budget(step_budget)
    for curve, k in reversed(w.letters):
        if curve.surface != c.surface:
            raise SurfaceMismatch("word and multicurve live on different triangulations")
        c = _twist(curve, k, c, budget)
    return c


def apply_word_family(w: TwistWord, fam: GenericFamily, step_budget: Optional[int] = None) -> GenericFamily:
    """Image of a generic family (componentwise twisting of its union)."""
    return as_generic_family(fam.surface, apply_word(w, fam.union, step_budget))


# ---------------------------------------------------------------------------
# constructions inside cut pieces


class _Pieces:
    """Navigation in the complex obtained by cutting along a multicurve."""

    def __init__(self, t: Triangulation, weights: Sequence[int]):
        self.t = t
        self.cx = cut_complex(t, weights)
        self.pieces = self.cx.result.pieces

    def to_global(self, pi: int, slot: int) -> int:
        return 3 * self.cx.members[pi][slot // 3] + slot % 3

    def project(self, pi: int, exits: Sequence[int]) -> list:
        out = []
        for s in exits:
            o = self.cx.slot_origin[self.to_global(pi, s)]
            if o >= 0:
                out.append(o)
        return out

    def locate(self, label) -> tuple:
        """(piece, local slot) of the first slot carrying a boundary label."""
        for pi, piece in enumerate(self.pieces):
            for lab, slots in piece.boundary_circles:
                if lab == label:
                    return pi, slots[0]
        raise NoTransversal(f"label {label} not found")

    def partner_side(self, pi: int, slot: int) -> tuple:
        """The slot on the other side of the same curve arc."""
        g = self.to_global(pi, slot)
        origin = self.cx.arc_origin[g]
        for other, o in self.cx.arc_origin.items():
            if o == origin and other != g:
                return self.cx.piece_of[other // 3], 3 * self.cx.local[other // 3] + other % 3
        raise NoTransversal("arc without partner")

    # paths and loops are lists of local exit slots
    def path(self, pi: int, src: int, dst: int) -> list:
        piece = self.pieces[pi]
        if src == dst:
            return []
        prev = {src: None}
        dq = deque([src])
        while dq:
            x = dq.popleft()
            for k in range(3):
                p = piece.glue[3 * x + k]
                if p < 0 or p // 3 in prev:
                    continue
                prev[p // 3] = 3 * x + k
                if p // 3 == dst:
                    out = []
                    y = dst
                    while prev[y] is not None:
                        out.append(prev[y])
                        y = prev[y] // 3
                    return out[::-1]
                dq.append(p // 3)
        raise NoTransversal("triangles not connected inside piece")

    def vertex_loop(self, pi: int, corner: int) -> list:
        piece = self.pieces[pi]
        out = []
        c = corner
        while True:
            t, k = divmod(c, 3)
            s = 3 * t + (k + 2) % 3
            p = piece.glue[s]
            if p < 0:
                c = 3 * t + (k + 2) % 3
            else:
                out.append(s)
                c = p
            if c == corner:
                return out
            if len(out) > 3 * len(piece.glue):
                raise NoTransversal("vertex rotation does not close")

    def features(self, pi: int, exclude=None) -> list:
        """Loops based at some triangle: (tag, base triangle, exits)."""
        piece = self.pieces[pi]
        out = []
        for v, kind in enumerate(piece.vertex_kind):
            if kind == PUNCTURE:
                c = piece.vertex_classes[v][0]
                out.append((("p", v), c // 3, self.vertex_loop(pi, c)))
        for lab, slots in piece.boundary_circles:
            if lab == exclude:
                continue
            c = slots[0]
            out.append((("b", lab), c // 3, self.vertex_loop(pi, c)))
        return out

    def cycles(self, pi: int) -> list:
        """Fundamental cycles of the dual graph of a piece, based at triangle 0."""
        piece = self.pieces[pi]
        prev = {0: None}
        order = [0]
        dq = deque([0])
        tree = set()
        while dq:
            x = dq.popleft()
            for k in range(3):
                p = piece.glue[3 * x + k]
                if p >= 0 and p // 3 not in prev:
                    prev[p // 3] = 3 * x + k
                    tree.add(3 * x + k)
                    tree.add(p)
                    dq.append(p // 3)
                    order.append(p // 3)
        out = []
        for s, p in enumerate(piece.glue):
            if p > s and s not in tree:
                loop = self.path(pi, 0, s // 3) + [s] + self.path(pi, p // 3, 0)
                out.append((("c", s), 0, loop))
        return out

    def lollipop(self, pi: int, base: int, feature, invert: bool = False) -> list:
        _, tri, loop = feature
        P = self.path(pi, base, tri)
        L = reverse_walk(self.pieces[pi].glue, loop) if invert else loop
        return P + L + reverse_walk(self.pieces[pi].glue, P)


def _is_generic(t: Triangulation, c: NormalCoordinates) -> bool:
    return classify_component(t, c) is ComponentClass.GENERIC


def transversal_curve(fam: GenericFamily, i: int) -> NormalCoordinates:
    """A generic curve meeting a_i (1-based) once or twice and missing the others."""
    if not 1 <= i <= fam.r:
        raise IndexError(f"curve index {i} out of range 1..{fam.r}")
    t = fam.surface
    pcs = _Pieces(t, fam.union.weights)
    target = fam.components[i - 1]
    others = [c for j, c in enumerate(fam.components) if j != i - 1]
    pi0, s0 = pcs.locate(CurveSide(i, 0))
    pi1, s1 = pcs.partner_side(pi0, s0)

    def accept(walk) -> Optional[NormalCoordinates]:
        c = curve_from_walk(t, walk)
        if c is None or not _is_generic(t, c):
            return None
        k = intersection_number(c, target)
        if k not in (1, 2):
            return None
        if any(intersection_number(c, o) for o in others):
            return None
        return c

    if pi0 == pi1:
        walk = pcs.project(pi0, pcs.path(pi0, s0 // 3, s1 // 3))
        c = accept(walk)
        if c is not None:
            return c
        raise NoTransversal(f"no transversal found for curve {i}")
    fx = pcs.features(pi0, exclude=CurveSide(i, 0)) + pcs.cycles(pi0)
    fy = pcs.features(pi1, exclude=CurveSide(i, 1)) + pcs.cycles(pi1)
    for a in fx:
        wa = pcs.project(pi0, pcs.lollipop(pi0, s0 // 3, a))
        for b in fy:
            for inv in (False, True):
                wb = pcs.project(pi1, pcs.lollipop(pi1, s1 // 3, b, inv))
                c = accept(wa + wb)
                if c is not None:
                    return c
    raise NoTransversal(f"no transversal found for curve {i}")


def realize_disjoint(fam: GenericFamily, b: NormalCoordinates) -> NormalCoordinates:
    """Union of the family with a curve isotopic to b and disjoint from it."""
    if b.surface != fam.surface:
        raise SurfaceMismatch("curve and family live on different triangulations")
    for i, a in enumerate(fam.components):
        if intersection_number(a, b):
            err = NotDisjoint(f"curve meets family member {i + 1}")
            err.index = i + 1
            raise err
    return validate(fam.surface, [x + y for x, y in zip(fam.union.weights, b.weights)])


def piece_candidates(fam_union: NormalCoordinates, pi: Optional[int] = None,
                     rng: Optional[random.Random] = None):
    """Closed walks inside cut pieces that may give new disjoint curves.

    Yields (piece index, walk in the ambient triangulation).  Candidates are
    fundamental cycles of the dual graph and band sums of two peripheral loops.
    """
    pcs = _Pieces(fam_union.surface, fam_union.weights)
    idx = range(len(pcs.pieces)) if pi is None else [pi]
    for p in idx:
        cands = []
        for _, _, loop in pcs.cycles(p):
            cands.append(loop)
        feats = pcs.features(p)
        for x in range(len(feats)):
            for y in range(x + 1, len(feats)):
                fx, fy = feats[x], feats[y]
                P = pcs.path(p, fx[1], fy[1])
                back = reverse_walk(pcs.pieces[p].glue, P)
                for inv in (False, True):
                    ly = reverse_walk(pcs.pieces[p].glue, fy[2]) if inv else fy[2]
                    cands.append(fx[2] + P + ly + back)
        if rng is not None:
            rng.shuffle(cands)
        for walk in cands:
            yield p, pcs.project(p, walk)


def piece_signatures(fam_union: NormalCoordinates) -> list:
    from .surface_model import signature_of
    return [signature_of(p) for p in cut_complex(fam_union.surface, fam_union.weights).result.pieces]
