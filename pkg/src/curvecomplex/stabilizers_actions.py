"""Stabilizer structure reports and action certificates for generic families."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import factorial
from typing import Optional

from .curve_ops import (TwistWord, apply_word_family, intersection_number, realize_disjoint,
                        transversal_curve)
from .errors import EqualClasses, FacePrecondition, NoChain
from .multicurve import GenericFamily, NormalCoordinates, as_generic_family, canonical_eq
from .orbit_enum import PantalonKind, enumerate_orbits, pantalon_kind
from .orbit_types import (CanonicalCode, OrbitType, automorphism_count, canonicalize, is_face,
                          orbit_type_of, sub_type)
from .surface_model import SurfaceSignature

PIECE_GROUPS = {
    PantalonKind.I: "infinite cyclic, half-twist generator",
    PantalonKind.II: "Z^2, boundary Dehn twists",
    PantalonKind.III: "Z^3, boundary Dehn twists",
}

EXACT_SEQUENCE = "1 -> Z^{r} -> M(M_A,P) -> Stab([A]) -> Cub_{r}"


@dataclass(frozen=True)
class PieceReport:
    signature: SurfaceSignature
    kind: PantalonKind
    description: Optional[str]


@dataclass(frozen=True)
class StabilizerReport:
    orbit_type: CanonicalCode
    r: int
    q: int
    twist_lattice_rank: int
    kernel_rank: int
    kernel_generators: tuple
    pieces: tuple
    cub_order: int
    graph_automorphism_count: int
    is_pantalon_decomposition: bool
    virtually_abelian: bool
    exact_sequence: str


def stabilizer_report(ot: OrbitType) -> StabilizerReport:
    """Structure data for the stabilizer of a family of the given type.

    ``virtually_abelian`` is only asserted for pantalon decompositions; False
    elsewhere means the property is not established here.
    """
    r = ot.r
    q = len([k for x in ot.nodes for k in x.labels])
    pieces = []
    for v in range(len(ot.nodes)):
        g, p, b = ot.node_data(v)
        kind = pantalon_kind(g, p, b)
        pieces.append(PieceReport(SurfaceSignature(g, p, b), kind, PIECE_GROUPS.get(kind)))
    pant = all(x.kind is not PantalonKind.NOT_PANTALON for x in pieces)
    return StabilizerReport(
        orbit_type=canonicalize(ot),
        r=r,
        q=q,
        twist_lattice_rank=r + q,
        kernel_rank=r,
        kernel_generators=tuple(f"tau_c{i} tau_c{i}'^-1" for i in range(1, r + 1)),
        pieces=tuple(pieces),
        cub_order=2 ** r * factorial(r),
        graph_automorphism_count=automorphism_count(ot),
        is_pantalon_decomposition=pant,
        virtually_abelian=pant,
        exact_sequence=EXACT_SEQUENCE.format(r=r),
    )


def glued_signature(report: StabilizerReport) -> SurfaceSignature:
    """Glue the report's pieces back along its r curves."""
    chi = sum(2 - 2 * x.signature.genus - x.signature.boundary - x.signature.punctures
              for x in report.pieces)
    m = sum(x.signature.punctures for x in report.pieces)
    g = (2 - chi - m - report.q) // 2
    return SurfaceSignature(g, m, report.q)


# ---------------------------------------------------------------------------
# large action


@dataclass(frozen=True)
class LargeActionCertificate:
    alpha: GenericFamily
    beta: GenericFamily
    twist_curve: NormalCoordinates
    moved_index: int
    images: tuple
    beta_intersections: tuple
    alpha_code: CanonicalCode
    image_codes: tuple

    def verify(self) -> bool:
        """Recheck distinctness, constant type and that the twist fixes beta."""
        if any(intersection_number(self.twist_curve, b) for b in self.beta.components):
            return False
        if any(c != self.alpha_code for c in self.image_codes):
            return False
        for i in range(len(self.images)):
            for j in range(i):
                if _family_eq(self.images[i], self.images[j]):
                    return False
        return True


def _family_eq(f1: GenericFamily, f2: GenericFamily) -> bool:
    return f1.r == f2.r and canonical_eq(f1.union, f2.union)


def _twist_curve_for(alpha: GenericFamily, beta: GenericFamily) -> tuple:
    """(moved component index, twist curve) following the non-face argument."""
    moved = None
    for i, a in enumerate(alpha.components):
        if not any(canonical_eq(a, b) for b in beta.components):
            moved = i
            break
    if moved is None:
        raise FacePrecondition("alpha is a face of beta")
    a = alpha.components[moved]
    for b in beta.components:
        if intersection_number(a, b) > 0:
            return moved, b
    # a misses beta: adjoin it and take a transversal to a missing beta
    fam = as_generic_family(beta.surface, realize_disjoint(beta, a))
    k = next(j for j, c in enumerate(fam.components) if canonical_eq(c, a))
    return moved, transversal_curve(fam, k + 1)


def large_action_certificate(alpha: GenericFamily, beta: GenericFamily, N: int,
                             step_budget: Optional[int] = None) -> LargeActionCertificate:
    """N distinct images of alpha under powers of a twist fixing beta."""
    if N < 1:
        raise ValueError("N must be positive")
    if alpha.surface != beta.surface:
        from .errors import SurfaceMismatch
        raise SurfaceMismatch("families live on different triangulations")
    if is_face(alpha, beta):
        raise FacePrecondition("alpha is a face of beta")
    moved, tc = _twist_curve_for(alpha, beta)
    images = tuple(apply_word_family(TwistWord(((tc, n),)), alpha, step_budget) for n in range(1, N + 1))
    return LargeActionCertificate(
        alpha=alpha,
        beta=beta,
        twist_curve=tc,
        moved_index=moved + 1,
        images=images,
        beta_intersections=tuple(intersection_number(tc, b) for b in beta.components),
        alpha_code=canonicalize(orbit_type_of(alpha)),
        image_codes=tuple(canonicalize(orbit_type_of(f)) for f in images),
    )


@dataclass(frozen=True)
class NoncommensurabilityCertificate:
    """Certificates per direction; ``index_bound`` is the coset count each one shows."""

    alpha_in_beta: Optional[LargeActionCertificate]
    beta_in_alpha: Optional[LargeActionCertificate]
    index_bound: int
    directions: tuple = field(default=())


def noncommensurability_certificate(alpha: GenericFamily, beta: GenericFamily, N: int,
                                    step_budget: Optional[int] = None) -> NoncommensurabilityCertificate:
    if alpha.r == beta.r and _family_eq(alpha, beta):
        raise EqualClasses("alpha and beta are the same class")
    ab = ba = None
    dirs = []
    if not is_face(alpha, beta):
        ab = large_action_certificate(alpha, beta, N, step_budget)
        dirs.append("alpha_under_stab_beta")
    if not is_face(beta, alpha):
        ba = large_action_certificate(beta, alpha, N, step_budget)
        dirs.append("beta_under_stab_alpha")
    return NoncommensurabilityCertificate(ab, ba, N, tuple(dirs))


# ---------------------------------------------------------------------------
# nested stabilizers


@dataclass(frozen=True)
class ChainExample:
    surface: object
    beta: GenericFamily
    alpha: GenericFamily
    report_alpha: StabilizerReport
    report_beta: StabilizerReport
    nonconjugacy_witness: tuple
    induction_identity: str = "Ind_{H_0}^G pi_0 = Ind_{H_1}^G pi_1"


def chain_type(sig: SurfaceSignature) -> Optional[tuple]:
    """First rank-2 type (in code order) whose two curves have different rank-1 types."""
    try:
        types = enumerate_orbits(sig, 2)
    except ValueError:
        return None
    for ot in types:
        c0 = canonicalize(sub_type(ot, [0]))
        c1 = canonicalize(sub_type(ot, [1]))
        if c0 != c1:
            return ot, c0, c1
    return None


def self_commensurating_chain(sig: SurfaceSignature, seed: int = 0,
                              samples: int = 400) -> ChainExample:
    """Realize a chain {a} inside {a, b} with [a] and [b] in different orbits."""
    from .fixtures import random_family, surface

    found = chain_type(sig)
    if found is None:
        raise NoChain(f"no rank-2 type with distinct curve types on {sig}")
    ot, c0, c1 = found
    want = canonicalize(ot)
    t = surface(sig)
    rng = random.Random(seed)
    for _ in range(samples):
        fam = random_family(t, rng, 6)
        if fam.r < 2:
            continue
        for i in range(fam.r):
            for j in range(i + 1, fam.r):
                pair = GenericFamily(t, (fam.components[i], fam.components[j]))
                if canonicalize(orbit_type_of(pair)) != want:
                    continue
                a, b = pair.components
                if canonicalize(orbit_type_of(GenericFamily(t, (a,)))) != c0:
                    a, b = b, a
                alpha = GenericFamily(t, (a,))
                ca = canonicalize(orbit_type_of(alpha))
                cb = canonicalize(orbit_type_of(GenericFamily(t, (b,))))
                if ca != cb:
                    return ChainExample(t, pair, alpha, stabilizer_report(orbit_type_of(alpha)),
                                        stabilizer_report(orbit_type_of(pair)), (ca, cb))
    raise NoChain(f"could not realize the chain type {want} on {sig}")
