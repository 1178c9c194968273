"""2x2 complex matrix algebra for PSL(2,C) in the upper half-space model.

Points of H^3 are pairs ``(z, t)`` with ``t > 0``. Ideal points are complex
numbers or the tagged value ``INF``. Isometries are stored as canonical
SL(2,C) representatives so that equal group elements compare equal.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import Elliptic, Identity, Parabolic, SharedEndpoint, SingularMatrix

INVARIANT_TOL = 1e-12
DERIVED_TOL = 1e-9

_TWO_PI = 2.0 * math.pi
_HUGE = 1e150


class _Infinity:
    """The point at infinity of the Riemann sphere."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()
SpherePoint = Union[complex, _Infinity]


def is_inf(p) -> bool:
    return p is INF


def canonical_phase(y: float) -> float:
    """Reduce an angle into (-pi, pi]."""
    r = math.pi - math.fmod(math.pi - y, _TWO_PI)
    if r > math.pi:
        r -= _TWO_PI
    elif r <= -math.pi:
        r += _TWO_PI
    return r


@dataclass(frozen=True)
class ComplexLength:
    """Element of C / 2 pi i Z with imaginary part in (-pi, pi].

    Real part is a length or signed distance, imaginary part a rotation.
    """

    value: complex

    def __post_init__(self):
        v = complex(self.value)
        object.__setattr__(self, "value", complex(v.real, canonical_phase(v.imag)))

    @property
    def length(self) -> float:
        return self.value.real

    @property
    def phase(self) -> float:
        return self.value.imag

    def __add__(self, other):
        return ComplexLength(self.value + _as_complex(other))

    __radd__ = __add__

    def __sub__(self, other):
        return ComplexLength(self.value - _as_complex(other))

    def __rsub__(self, other):
        return ComplexLength(_as_complex(other) - self.value)

    def __neg__(self):
        return ComplexLength(-self.value)

    def __mul__(self, k):
        # Scales the canonical representative; only meaningful for real k.
        return ComplexLength(self.value * k)

    __rmul__ = __mul__

    def __complex__(self):
        return self.value

    def distance(self, other) -> float:
        """Distance to ``other`` in C / 2 pi i Z."""
        return abs(ComplexLength(self.value - _as_complex(other)).value)

    def to_json(self):
        return [self.value.real, self.value.imag]

    @classmethod
    def from_json(cls, data):
        return cls(complex(data[0], data[1]))


def _as_complex(x) -> complex:
    return x.value if isinstance(x, ComplexLength) else complex(x)


@dataclass(frozen=True)
class Isometry:
    """Canonical SL(2,C) representative of an element of PSL(2,C).

    Build instances with ``canonicalize`` or ``Isometry.from_entries``; the
    raw constructor does not normalize.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    @classmethod
    def from_entries(cls, a, b, c, d) -> "Isometry":
        return canonicalize(np.array([[a, b], [c, d]], dtype=complex))

    @classmethod
    def identity(cls) -> "Isometry":
        return cls(1 + 0j, 0j, 0j, 1 + 0j)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @property
    def trace(self) -> complex:
        return self.a + self.d

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "Isometry") -> "Isometry":
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return _signed(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "Isometry":
        return _signed(self.d, -self.b, -self.c, self.a)

    def conjugate_by(self, g: "Isometry") -> "Isometry":
        """Return g * self * g^-1."""
        return g @ self @ g.inverse()

    def isclose(self, other: "Isometry", tol: float = DERIVED_TOL) -> bool:
        """Equality in PSL(2,C) up to ``tol`` relative to the entry scale."""
        m, n = self.matrix, other.matrix
        scale = max(1.0, float(np.abs(m).max()), float(np.abs(n).max()))
        return min(np.abs(m - n).max(), np.abs(m + n).max()) <= tol * scale

    def act(self, p: SpherePoint) -> SpherePoint:
        """Moebius action on the Riemann sphere."""
        a, b, c, d = self.a, self.b, self.c, self.d
        if is_inf(p):
            out = INF if c == 0 else a / c
        else:
            den = c * p + d
            out = INF if den == 0 else (a * p + b) / den
        # beyond this the point is numerically indistinguishable from infinity
        if not is_inf(out) and abs(out) > _HUGE:
            return INF
        return out

    def act_point(self, z: complex, t: float) -> tuple[complex, float]:
        """Poincare extension acting on the point (z, t) of H^3."""
        w, s = self.act_points(np.asarray([z], dtype=complex), np.asarray([t], dtype=float))
        return complex(w[0]), float(s[0])

    def act_points(self, z: np.ndarray, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized Poincare extension on arrays of heights and positions."""
        a, b, c, d = self.a, self.b, self.c, self.d
        den_z = c * z + d
        den = np.abs(den_z) ** 2 + abs(c) ** 2 * t**2
        w = ((a * z + b) * np.conj(den_z) + a * np.conj(c) * t**2) / den
        return w, t / den

    def act_vector(self, z: complex, t: float, v: tuple[complex, float]) -> tuple[complex, float]:
        """Push a tangent vector at (z, t) forward by the differential.

        Vectors are written (horizontal complex part, vertical part) in the
        Euclidean coordinates of the half-space.
        """
        q = _quat(z, t)
        h = _quat(v[0], v[1])
        image = _qmul(_qadd(_qscale(self.a, q), _qc(self.b)), _qinv(_qadd(_qscale(self.c, q), _qc(self.d))))
        left = _qsub(_qc(self.a), _qmul(image, _qc(self.c)))
        w = _qmul(_qmul(left, h), _qinv(_qadd(_qscale(self.c, q), _qc(self.d))))
        return complex(w[0], w[1]), float(w[2])

    def to_json(self):
        return [[x.real, x.imag] for x in (self.a, self.b, self.c, self.d)]

    @classmethod
    def from_json(cls, data) -> "Isometry":
        a, b, c, d = (complex(x[0], x[1]) for x in data)
        return cls.from_entries(a, b, c, d)


@dataclass(frozen=True)
class Geodesic:
    """Oriented geodesic given by its repelling and attracting endpoints."""

    p_rep: SpherePoint
    p_att: SpherePoint

    def __post_init__(self):
        if _same_point(self.p_rep, self.p_att):
            raise ValueError("geodesic endpoints must be distinct")

    def reversed(self) -> "Geodesic":
        return Geodesic(self.p_att, self.p_rep)

    def image(self, g: Isometry) -> "Geodesic":
        return Geodesic(g.act(self.p_rep), g.act(self.p_att))


def _same_point(p, q, tol: float = 0.0) -> bool:
    if is_inf(p) or is_inf(q):
        return is_inf(p) and is_inf(q)
    return abs(p - q) <= tol * max(1.0, abs(p), abs(q))


# quaternions as (1, i, j, k) coefficient arrays; points of H^3 are z + t j


def _quat(z, t):
    z = complex(z)
    return np.array([z.real, z.imag, float(t), 0.0])


def _qc(w):
    w = complex(w)
    return np.array([w.real, w.imag, 0.0, 0.0])


def _qscale(w, q):
    return _qmul(_qc(w), q)


def _qadd(p, q):
    return p + q


def _qsub(p, q):
    return p - q


def _qmul(p, q):
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return np.array([
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ])


def _qinv(q):
    n = float(q @ q)
    return np.array([q[0], -q[1], -q[2], -q[3]]) / n


def _canonical_from(a, b, c, d) -> Isometry:
    det = a * d - b * c
    scale = max(abs(a), abs(b), abs(c), abs(d)) ** 2
    if abs(det) <= 1e-24:
        raise SingularMatrix(f"determinant {det!r} too small")
    # products of large unimodular matrices lose the determinant to
    # cancellation, so only rescale when it is visibly off one
    if abs(det - 1) > INVARIANT_TOL * max(1.0, scale):
        s = cmath.sqrt(det)
        a, b, c, d = a / s, b / s, c / s, d / s
    return _signed(a, b, c, d)


def _signed(a, b, c, d) -> Isometry:
    """Apply the sign rule to entries already of determinant one."""
    for x in (a, b, c, d):
        if abs(x) > INVARIANT_TOL:
            arg = cmath.phase(x)
            if arg <= -math.pi / 2 or arg > math.pi / 2:
                a, b, c, d = -a, -b, -c, -d
            break
    return Isometry(complex(a), complex(b), complex(c), complex(d))


def canonicalize(m) -> Isometry:
    """Normalize a nonsingular 2x2 complex matrix to its canonical Isometry."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    return _canonical_from(m[0, 0], m[0, 1], m[1, 0], m[1, 1])


def classify(g: Isometry, tol: float = INVARIANT_TOL) -> str:
    """Return one of 'identity', 'parabolic', 'elliptic', 'loxodromic'."""
    tr = g.trace
    scale = max(1.0, abs(g.a), abs(g.b), abs(g.c), abs(g.d))
    if abs(tr.imag) <= tol * scale and abs(tr.real) <= 2.0 + tol * scale:
        if abs(abs(tr.real) - 2.0) <= tol * scale:
            off = max(abs(g.b), abs(g.c), abs(g.a - g.d))
            return "identity" if off <= tol * scale else "parabolic"
        return "elliptic"
    return "loxodromic"


def _require_loxodromic(g: Isometry, tol: float) -> None:
    kind = classify(g, tol)
    if kind == "identity":
        raise Identity("isometry is the identity")
    if kind == "parabolic":
        raise Parabolic(f"trace {g.trace!r} is +-2")
    if kind == "elliptic":
        raise Elliptic(f"trace {g.trace!r} is real with modulus below 2")


def _dominant_eigenvalue(g: Isometry) -> complex:
    tr = g.trace
    root = cmath.sqrt(tr * tr - 4)
    lam = (tr + root) / 2 if abs(tr + root) >= abs(tr - root) else (tr - root) / 2
    # the sign of a PSL element is arbitrary, so pick the lift with Re > 0
    if lam.real < 0 or (lam.real == 0 and lam.imag < 0):
        lam = -lam
    return lam


def half_length(g: Isometry, tol: float = INVARIANT_TOL) -> ComplexLength:
    """Half of the complex translation length of a loxodromic isometry.

    ``g`` is conjugate to diag(e^hl, e^-hl) with Re(hl) > 0, and the closed
    geodesic has complex length 2 * hl.
    """
    _require_loxodromic(g, tol)
    return ComplexLength(cmath.log(_dominant_eigenvalue(g)))


def axis(g: Isometry, tol: float = INVARIANT_TOL) -> Geodesic:
    """Translation axis of a loxodromic isometry, oriented along the motion."""
    _require_loxodromic(g, tol)
    tr = g.trace
    root = cmath.sqrt(tr * tr - 4)
    lam = (tr + root) / 2 if abs(tr + root) >= abs(tr - root) else (tr - root) / 2
    mu = 1 / lam
    a, b, c, d = g.a, g.b, g.c, g.d
    scale = max(abs(a), abs(b), abs(c), abs(d))
    small = INVARIANT_TOL * scale

    # fixed point for eigenvalue e of the column vector (z, 1): c z + d = e
    def fixed(e):
        if abs(c) > small:
            return (e - d) / c
        if abs(b) > small:
            return b / (e - a) if abs(e - a) > small else INF
        return INF if abs(e - a) <= abs(e - d) else 0j

    att = fixed(lam)
    rep = fixed(mu)
    if abs(c) <= small and abs(b) <= small:
        att, rep = (INF, 0j) if abs(a) > abs(d) else (0j, INF)
    elif abs(c) <= small:
        # upper triangular: infinity is one fixed point
        if abs(a) > abs(d):
            att = INF
            rep = b / (d - a)
        else:
            rep = INF
            att = b / (d - a)
    return Geodesic(rep, att)


def _normalizer(p: SpherePoint, q: SpherePoint, r: SpherePoint) -> Isometry:
    """Isometry sending p -> 0, q -> inf, r -> 1."""
    if is_inf(p):
        m = np.array([[0, r - q], [1, -q]], dtype=complex)
    elif is_inf(q):
        m = np.array([[1, -p], [0, r - p]], dtype=complex)
    elif is_inf(r):
        m = np.array([[1, -p], [1, -q]], dtype=complex)
    else:
        m = np.array([[r - q, -p * (r - q)], [r - p, -q * (r - p)]], dtype=complex)
    return canonicalize(m)


def axis_chart(g: Geodesic) -> Isometry:
    """Isometry sending the repelling end of ``g`` to 0 and the attracting end to inf."""
    p, q = g.p_rep, g.p_att
    if is_inf(p):
        return canonicalize(np.array([[0, 1], [1, -q]], dtype=complex))
    if is_inf(q):
        return canonicalize(np.array([[1, -p], [0, 1]], dtype=complex))
    return canonicalize(np.array([[1, -p], [1, -q]], dtype=complex))


def complex_distance(g1: Geodesic, g2: Geodesic, tol: float = INVARIANT_TOL) -> ComplexLength:
    """Complex distance between two oriented geodesics.

    g1 is moved to (0, inf) and g2 to (1, x); the distance is
    ln((1 + sqrt x) / (1 - sqrt x)) with the principal root, so the real part
    is nonnegative and vanishes exactly when the geodesics meet.
    """
    pts = [g1.p_rep, g1.p_att, g2.p_rep, g2.p_att]
    for i in range(4):
        for j in range(i + 1, 4):
            if _same_point(pts[i], pts[j], tol):
                raise SharedEndpoint(f"endpoints {pts[i]!r} and {pts[j]!r} coincide")
    t = _normalizer(g1.p_rep, g1.p_att, g2.p_rep)
    x = t.act(g2.p_att)
    r = cmath.sqrt(x)
    d = cmath.log((1 + r) / (1 - r))
    # rounding can push an intersecting pair to a tiny negative real part
    return ComplexLength(complex(max(0.0, d.real), d.imag))


def hyperbolic_distance(p: tuple[complex, float], q: tuple[complex, float]) -> float:
    """Distance between two points of H^3."""
    (z, t), (w, s) = p, q
    num = abs(z - w) ** 2 + (t - s) ** 2
    return 2.0 * math.asinh(math.sqrt(num / (4.0 * t * s)))


def point_to_axis_distance(p: tuple[complex, float], g: Isometry, tol: float = INVARIANT_TOL) -> float:
    """Distance from a point of H^3 to the translation axis of ``g``."""
    z, t = complex(p[0]), float(p[1])
    if t <= 0:
        raise ValueError("height must be positive")
    ax = axis(g, tol)
    move = canonicalize(np.array([[1, -z], [0, t]], dtype=complex))
    z1, z2 = move.act(ax.p_rep), move.act(ax.p_att)
    if is_inf(z1):
        z1, z2 = z2, z1
    if is_inf(z2):
        return math.asinh(abs(z1))
    return math.asinh(abs((1 + z1 * z2.conjugate()) / (z1 - z2)))
