"""Exception types raised by hyperfold.

Every error derives from ``GeometryError`` so callers can catch the whole
family at once. Most of them are also ``ValueError`` because they signal an
input outside an operation's domain.
"""


class GeometryError(ValueError):
    """Base class for all hyperfold errors."""


class SingularMatrix(GeometryError):
    """Matrix determinant is too small to normalize."""


class Elliptic(GeometryError):
    """Isometry fixes a point of H^3 and has no translation axis."""


class Parabolic(GeometryError):
    """Isometry has a single fixed point on the sphere at infinity."""


class Identity(GeometryError):
    """Isometry is trivial in PSL(2,C)."""


class SharedEndpoint(GeometryError):
    """Two geodesics share an ideal endpoint, so their distance degenerates."""


class NonRealAngle(GeometryError):
    """A rotation generator was given a non-real angle."""


class NotClosable(GeometryError):
    """Cycle holonomy is not loxodromic, so there is no closed geodesic."""


class OutOfRange(GeometryError):
    """Argument lies outside the admissible interval."""


class ZeroDetour(GeometryError):
    """Inefficiency of a zero-length detour is undefined."""


class BranchAmbiguity(GeometryError):
    """A trigonometric inversion divides by a vanishing factor."""


class CuffMismatch(GeometryError):
    """Glued cuffs have different half-lengths."""


class Infeasible(GeometryError):
    """No solution exists; ``witness`` carries a certificate when available."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class OddCount(GeometryError):
    """A symmetric sample needs an even number of feet."""


class NotApplicable(GeometryError):
    """A growth estimate is requested outside its hypothesis."""


class HypothesisViolated(GeometryError):
    """Inputs do not satisfy the admissibility bounds of an estimate."""


class NotSemiLinear(GeometryError):
    """A frame correspondence fails the semi-linearity condition."""


class DegenerateQuadruple(GeometryError):
    """Cross ratio of a quadruple with repeated points is undefined."""


class UnknownSuite(GeometryError):
    """The verification CLI was asked for a suite it does not know."""


class BadParams(GeometryError):
    """Parameters given to the verification CLI are malformed."""
