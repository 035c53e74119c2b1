"""Command line front end.

Exit codes: 0 success, 1 domain error (JSON error on stdout), 2 usage error.
"""

from __future__ import annotations

import json
import sys

import click

from . import documents as docs
from .curve_ops import dehn_twist, intersection_number
from .errors import CurveComplexError, SurfaceMismatch
from .orbit_enum import catalogue, complete_to_pantalon_decomposition
from .orbit_types import canonicalize, orbit_type_of, same_orbit
from .stabilizers_actions import (large_action_certificate, self_commensurating_chain,
                                  stabilizer_report)
from .surface_model import SurfaceSignature


class _Failure(click.ClickException):
    exit_code = 1

    def __init__(self, err: CurveComplexError):
        super().__init__(str(err))
        self.err = err

    def show(self, file=None) -> None:
        click.echo(json.dumps(self.err.to_dict(), sort_keys=True))


def _read(path: str, expect=None) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise click.UsageError(f"cannot read {path}: {e.strerror}") from None
    return docs.loads(text, expect)


def _out(doc: dict) -> None:
    click.echo(docs.dumps(doc), nl=False)


class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except CurveComplexError as e:
            raise _Failure(e) from None


nonneg = click.IntRange(min=0)


@click.group(cls=_Group)
@click.option("--step-budget", type=click.IntRange(min=1), default=None,
              help="Cap on elementary steps in twist tightening loops.")
@click.pass_context
def main(ctx, step_budget):
    """Curves, twists and mapping class group orbits on surfaces."""
    ctx.obj = {"budget": step_budget}


@main.command()
@click.argument("g", type=nonneg)
@click.argument("m", type=nonneg)
@click.argument("q", type=nonneg)
@click.argument("r", type=nonneg, required=False)
def orbits(g, m, q, r):
    """Orbit types of generic families on the surface (g, m, q)."""
    cat = catalogue(SurfaceSignature(g, m, q)) if r is None or r >= 1 else None
    if cat is None:
        raise click.BadParameter("rank must be at least 1", param_hint="R")
    _out(docs.catalogue_doc(cat, r))


@main.command()
@click.argument("family_file")
def classify(family_file):
    """Orbit type (decorated dual graph) of a family."""
    fam = docs.load_family(_read(family_file, ("family", "multicurve")))
    _out(docs.orbit_type_doc(orbit_type_of(fam)))


@main.command()
@click.argument("file1")
@click.argument("file2")
def equiv(file1, file2):
    """Whether two families lie in the same mapping class group orbit."""
    f1 = docs.load_family(_read(file1, ("family", "multicurve")))
    f2 = docs.load_family(_read(file2, ("family", "multicurve")))
    same = same_orbit(f1, f2)
    _out(docs.equivalence_doc(same, canonicalize(orbit_type_of(f1)), canonicalize(orbit_type_of(f2))))


@main.command()
@click.argument("file1")
@click.argument("file2")
def intersect(file1, file2):
    """Geometric intersection number of two multicurves."""
    a = docs.load_multicurve(_read(file1, ("multicurve", "family")))
    b = docs.load_multicurve(_read(file2, ("multicurve", "family")))
    click.echo(str(intersection_number(a, b)))


@main.command()
@click.option("--along", "along", required=True, help="Multicurve file with the twist curve.")
@click.option("--power", type=int, default=1, show_default=True)
@click.argument("file")
@click.pass_context
def twist(ctx, along, power, file):
    """Image of a multicurve under a power of a Dehn twist."""
    a = docs.load_multicurve(_read(along, ("multicurve", "family")))
    b = docs.load_multicurve(_read(file, ("multicurve", "family")))
    if a.surface != b.surface:
        raise SurfaceMismatch("twist curve and multicurve live on different surfaces")
    _out(docs.multicurve_doc(dehn_twist(a, power, b, ctx.obj["budget"])))


@main.command()
@click.argument("family_file")
def complete(family_file):
    """Extend a family to a pantalon decomposition."""
    fam = docs.load_family(_read(family_file, ("family", "multicurve")))
    _out(docs.family_doc(complete_to_pantalon_decomposition(fam)))


@main.command()
@click.argument("file")
def stabilizer(file):
    """Stabilizer structure report for an orbit type or a family."""
    doc = _read(file, ("orbit_type", "family", "multicurve"))
    if doc["kind"] == "orbit_type":
        ot = docs.load_orbit_type(doc)
    else:
        ot = orbit_type_of(docs.load_family(doc))
    _out(docs.report_doc(stabilizer_report(ot)))


@main.command("large-action")
@click.argument("file1")
@click.argument("file2")
@click.option("-n", "n", type=click.IntRange(min=1), default=10, show_default=True)
@click.pass_context
def large_action(ctx, file1, file2, n):
    """Certificate that the stabilizer of FILE2 moves FILE1 to N distinct places."""
    alpha = docs.load_family(_read(file1, ("family", "multicurve")))
    beta = docs.load_family(_read(file2, ("family", "multicurve")))
    _out(docs.large_action_doc(large_action_certificate(alpha, beta, n, ctx.obj["budget"])))


@main.command()
@click.argument("g", type=nonneg)
@click.argument("m", type=nonneg)
@click.argument("q", type=nonneg)
def chain(g, m, q):
    """Nested pair of stabilizers from two disjoint curves of different types."""
    _out(docs.chain_doc(self_commensurating_chain(SurfaceSignature(g, m, q))))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
