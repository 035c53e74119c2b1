"""Builtin surfaces, seed curves and a random sampler of generic families."""

from __future__ import annotations

import random
import re
from functools import lru_cache
from typing import Optional

from .curve_ops import TwistWord, apply_word_family, curve_from_walk, piece_candidates
from .errors import CurveComplexError
from .multicurve import (ComponentClass, GenericFamily, NormalCoordinates, as_generic_family,
                         classify_component, empty, family_from_curves)
from .surface_model import SurfaceSignature, Triangulation, build_standard_surface

# surfaces used throughout the tests
FIXTURES = {
    "g2": SurfaceSignature(2, 0, 0),
    "t0": SurfaceSignature(1, 0, 0),
    "t1": SurfaceSignature(1, 1, 0),
    "t0b1": SurfaceSignature(1, 0, 1),
    "d3": SurfaceSignature(0, 3, 1),
    "d4": SurfaceSignature(0, 4, 1),
    "d5": SurfaceSignature(0, 5, 1),
    "d6": SurfaceSignature(0, 6, 1),
}

_ALIAS = re.compile(r"^(?:g(\d+)(?:p(\d+))?(?:b(\d+))?|t(\d+)(?:b(\d+))?|d(\d+)(?:b(\d+))?|s(\d+))$")


def parse_signature(text: str) -> SurfaceSignature:
    """Read "g2", "t1", "d5b1", "s4", "g1p2b1" or "g,m,q"."""
    text = text.strip()
    if "," in text:
        parts = text.split(",")
        if len(parts) != 3 or not all(p.strip().isdigit() for p in parts):
            raise ValueError(f"bad signature {text!r}")
        return SurfaceSignature(*(int(p) for p in parts))
    mt = _ALIAS.match(text)
    if not mt:
        raise ValueError(f"bad signature alias {text!r}")
    g, p, b, tm, tb, dm, db, sm = mt.groups()
    if g is not None:
        return SurfaceSignature(int(g), int(p or 0), int(b or 0))
    if tm is not None:
        return SurfaceSignature(1, int(tm), int(tb or 0))
    if dm is not None:
        return SurfaceSignature(0, int(dm), int(db) if db is not None else 1)
    return SurfaceSignature(0, int(sm), 0)


def alias_of(sig: SurfaceSignature) -> str:
    out = f"g{sig.genus}"
    if sig.punctures:
        out += f"p{sig.punctures}"
    if sig.boundary:
        out += f"b{sig.boundary}"
    return out


@lru_cache(maxsize=None)
def surface(sig: SurfaceSignature) -> Triangulation:
    return build_standard_surface(sig)


def _generic(t: Triangulation, c: NormalCoordinates) -> bool:
    try:
        return classify_component(t, c) is ComponentClass.GENERIC
    except CurveComplexError:
        return False


@lru_cache(maxsize=None)
def seed_curves(sig: SurfaceSignature) -> tuple:
    """Generic single curves read off closed walks of the uncut surface, sorted by weights."""
    t = surface(sig)
    found = {}
    for _, walk in piece_candidates(empty(t)):
        c = curve_from_walk(t, walk)
        if c is not None and c.weights not in found and _generic(t, c):
            found[c.weights] = c
    return tuple(found[w] for w in sorted(found))


def empty_family(t: Triangulation) -> GenericFamily:
    return GenericFamily(t, ())


def random_word(rng: random.Random, curves, length: int, max_power: int = 2) -> TwistWord:
    letters = []
    for _ in range(length):
        n = rng.randint(1, max_power) * rng.choice((1, -1))
        letters.append((rng.choice(curves), n))
    return TwistWord(tuple(letters))


def random_family(t: Triangulation, rng: random.Random, moves: int = 6,
                  twist_pool: Optional[tuple] = None, weight_cap: int = 400) -> GenericFamily:
    """Random walk over generic families by adding, dropping and twisting curves.

    Adding draws a curve from random closed walks inside a random cut piece;
    twisting applies a short random word in twists along pool curves.
    """
    from .orbit_enum import extend_family

    fam = empty_family(t)
    pool = list(twist_pool if twist_pool is not None else default_pool(_sig_of(t)))
    for _ in range(moves):
        move = rng.random()
        if move < 0.55 or fam.r == 0:
            nxt = extend_family(fam, rng)
            if nxt is not None:
                fam = nxt
        elif move < 0.75:
            keep = list(fam.components)
            del keep[rng.randrange(len(keep))]
            fam = family_from_curves(keep) if keep else empty_family(t)
        elif pool:
            word = random_word(rng, pool + list(fam.components), rng.randint(1, 2), 1)
            try:
                img = apply_word_family(word, fam)
            except CurveComplexError:
                continue
            if sum(img.union.weights) <= weight_cap:
                fam = img
    return fam


def _sig_of(t: Triangulation) -> SurfaceSignature:
    from .surface_model import signature_of
    return signature_of(t)


def family_of(t: Triangulation, weights) -> GenericFamily:
    from .multicurve import validate
    return as_generic_family(t, validate(t, weights))


def discover_codes(sig: SurfaceSignature, samples: int, rng: random.Random,
                   moves: Optional[int] = None) -> dict:
    """Canonical codes met by classifying random concrete families and all their faces.

    Returns code -> a concrete family realizing it.
    """
    from itertools import combinations

    from .orbit_enum import max_rank
    from .orbit_types import canonicalize, orbit_type_of

    t = surface(sig)
    moves = moves if moves is not None else 2 * max_rank(sig) + 3
    found = {}
    for _ in range(samples):
        fam = random_family(t, rng, moves)
        comps = fam.components
        for k in range(1, len(comps) + 1):
            for sub in combinations(comps, k):
                face = GenericFamily(t, sub)
                code = canonicalize(orbit_type_of(face))
                if code not in found:
                    found[code] = face
    return found


def curve_pool(sig: SurfaceSignature, rng: random.Random, size: int = 12,
               weight_cap: int = 60) -> list:
    """Seed curves, their transversals, and short twist images of these, lightest first."""
    from .curve_ops import dehn_twist, transversal_curve

    t = surface(sig)
    pool = {c.weights: c for c in seed_curves(sig)}
    for c in list(pool.values()):
        try:
            x = transversal_curve(GenericFamily(t, (c,)), 1)
        except CurveComplexError:
            continue
        pool.setdefault(x.weights, x)
    tries = 0
    while len(pool) < size and tries < 20 * size:
        tries += 1
        base = [pool[w] for w in sorted(pool)]
        a, b = rng.choice(base), rng.choice(base)
        img = dehn_twist(a, rng.choice((1, -1)), b)
        if sum(img.weights) <= weight_cap:
            pool.setdefault(img.weights, img)
    return [pool[w] for w in sorted(pool, key=lambda w: (sum(w), w))]


@lru_cache(maxsize=None)
def default_pool(sig: SurfaceSignature) -> tuple:
    return tuple(curve_pool(sig, random.Random(0), size=8, weight_cap=30))
