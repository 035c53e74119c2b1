"""Exception hierarchy.

Every error raised on purpose by the library derives from ``CurveComplexError``
so callers (and the CLI) can separate domain failures from programming bugs.
"""


class CurveComplexError(Exception):
    """Base class for domain errors."""

    def to_dict(self) -> dict:
        return {"error": type(self).__name__, "message": str(self)}


# surface_model
class UnsupportedSignature(CurveComplexError):
    """No triangulation available for this signature."""

class NonIntegerGenus(CurveComplexError):
    """Euler characteristic inconsistent with an orientable surface."""

class InvalidTriangulation(CurveComplexError):
    """Gluing data violates a triangulation invariant."""

class InvalidCoordinates(CurveComplexError):
    """Weights do not define a normal multicurve."""


# multicurve
class ParityViolation(CurveComplexError):
    """Odd weight sum around a triangle."""

class TriangleInequalityViolation(CurveComplexError):
    """Triangle inequality fails."""

class BoundaryWeightNonzero(CurveComplexError):
    """A boundary edge carries positive weight."""

class MultipleComponents(CurveComplexError):
    """Expected a single-component curve."""

class NonGenericComponent(CurveComplexError):
    """A component is not generic."""

class IsotopicPair(CurveComplexError):
    """Two components are isotopic."""

class SurfaceMismatch(CurveComplexError):
    """Operands live on different triangulations."""


# curve_ops
class NonGenericTwistCurve(CurveComplexError):
    """Twist curve must be a single generic curve."""

class NoTransversal(CurveComplexError):
    """Transversal construction failed."""

class NotDisjoint(CurveComplexError):
    """Curve meets a family member."""

class StepBudgetExceeded(CurveComplexError):
    """Step budget exhausted."""


# orbit_enum / stabilizers
class NoPantalonDecomposition(CurveComplexError):
    """Signature admits no pantalon decomposition."""

class FacePrecondition(CurveComplexError):
    """alpha is a face of beta."""

class EqualClasses(CurveComplexError):
    """alpha and beta are the same class."""

class NoChain(CurveComplexError):
    """No rank-2 type with distinct rank-1 faces."""


# documents
class DocumentError(CurveComplexError):
    """Malformed or unsupported document."""

