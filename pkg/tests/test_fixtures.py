import random

import pytest

from curvecomplex.fixtures import (FIXTURES, alias_of, curve_pool, parse_signature, random_family,
                                   seed_curves, surface)
from curvecomplex.multicurve import ComponentClass, classify_component
from curvecomplex.surface_model import SurfaceSignature as S, signature_of


@pytest.mark.parametrize("text,sig", [
    ("g2", S(2, 0, 0)), ("g1p2b1", S(1, 2, 1)), ("t1", S(1, 1, 0)), ("t0b1", S(1, 0, 1)),
    ("d5", S(0, 5, 1)), ("d4b2", S(0, 4, 2)), ("s4", S(0, 4, 0)), ("0,5,1", S(0, 5, 1)),
])
def test_parse_signature(text, sig):
    assert parse_signature(text) == sig
    assert parse_signature(alias_of(sig)) == sig


@pytest.mark.parametrize("text", ["", "x2", "g", "1,2", "1,a,2", "g2q1"])
def test_parse_signature_rejects(text):
    with pytest.raises(ValueError):
        parse_signature(text)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_surfaces_and_seeds(name):
    sig = FIXTURES[name]
    t = surface(sig)
    assert signature_of(t) == sig
    for c in seed_curves(sig):
        assert classify_component(t, c) is ComponentClass.GENERIC
    pool = curve_pool(sig, random.Random(0), size=6)
    assert [(sum(c.weights), c.weights) for c in pool] == sorted((sum(c.weights), c.weights) for c in pool)


def test_random_family_is_deterministic():
    t = surface(S(0, 5, 1))
    assert random_family(t, random.Random(4), 6) == random_family(t, random.Random(4), 6)
