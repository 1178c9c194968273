"""Complex trigonometry of right-angled hexagons.

Sides are complex lengths in cyclic order. Walking the boundary with
``A(s / 2) * B(pi / 2)`` per side returns to the starting frame exactly when
the six numbers form a hexagon; this walk is the geometric model behind the
cosine and sine rules used here.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchAmbiguity
from .frame_actions import A, B
from .moebius_core import ComplexLength, Isometry

_SMALL = 1e-14
_IPI = 1j * math.pi


def _c(x) -> complex:
    return x.value if isinstance(x, ComplexLength) else complex(x)


def _acosh(w: complex) -> complex:
    """Principal inverse cosh: real part >= 0."""
    r = cmath.acosh(w)
    return -r if r.real < 0 else r


def cosine_rule(left, right, opposite) -> complex:
    """cosh of the side flanked by ``left`` and ``right``."""
    l, r, o = _c(left), _c(right), _c(opposite)
    den = cmath.sinh(l) * cmath.sinh(r)
    if abs(den) < _SMALL:
        raise BranchAmbiguity("flanking sides have vanishing sinh")
    return (cmath.cosh(l) * cmath.cosh(r) + cmath.cosh(o)) / den


def hexagon_opposite(l1, l3, twod) -> ComplexLength:
    """Side opposite ``twod`` in the hexagon where ``twod`` is flanked by l1, l3."""
    l1, l3, twod = _c(l1), _c(l3), _c(twod)
    den = cmath.sinh(l1) * cmath.sinh(l3)
    if abs(den) < _SMALL:
        raise BranchAmbiguity("sinh(l1) sinh(l3) vanishes")
    return ComplexLength(_acosh(cmath.cosh(twod) * den - cmath.cosh(l1) * cmath.cosh(l3)))


def _from_cosh_sinh(ch: complex, sh: complex) -> ComplexLength:
    return ComplexLength(cmath.log(ch + sh))


def quad_solve(x, y, c) -> tuple[ComplexLength, ComplexLength, ComplexLength]:
    """Close the hexagon with consecutive sides x, c, y.

    ``c`` is flanked by x and y; returns (z, a, b) where z is opposite c,
    a sits between z and x and b between y and z. z comes from the cosh
    relation written around c = i pi, then a and b take their sinh from the
    sine rule and their cosh from the cosine rule.
    """
    x, y, c = _c(x), _c(y), _c(c)
    shx, shy = cmath.sinh(x), cmath.sinh(y)
    if abs(shx) < _SMALL or abs(shy) < _SMALL:
        raise BranchAmbiguity("sinh(x) or sinh(y) vanishes")
    rhs = cmath.cosh(x + y) + shx * shy * (cmath.cosh(c - _IPI) - 1)
    zm = _acosh(rhs)
    z = zm + _IPI
    sh_zm = cmath.sinh(zm)
    if abs(sh_zm) < _SMALL:
        raise BranchAmbiguity("sinh(z) vanishes")
    ratio = cmath.sinh(c - _IPI) / sh_zm
    sh_a, sh_b = ratio * shy, ratio * shx
    ch_a = cosine_rule(z, x, y)
    ch_b = cosine_rule(y, z, x)
    return ComplexLength(z), _from_cosh_sinh(ch_a, sh_a), _from_cosh_sinh(ch_b, sh_b)


def ortho_spacing(lam, z0: complex, k: int) -> ComplexLength:
    """Complex distance from the geodesic (0 -> -1) to the k-th lift (z_k -> inf).

    Lifts are related by z_k = exp(-k lam) z0. The root is chosen so that the
    real part is nonnegative.
    """
    lam = _c(lam)
    if lam.real <= 0:
        raise ValueError("translation length must have positive real part")
    if z0 == 0:
        raise ValueError("z0 must be nonzero")
    zk = cmath.exp(-k * lam) * complex(z0)
    # -(1 + 2z + 2 sqrt(z^2 + z)) = -(sqrt z + sqrt(1 + z))^2; asinh keeps
    # the offset from i pi accurate when z is tiny
    d = _IPI + 2 * cmath.asinh(cmath.sqrt(zk))
    if d.real < 0:
        d = -d
    return ComplexLength(d)


def boundary_walk(sides) -> Isometry:
    g = Isometry.identity()
    for s in sides:
        g = g @ A(_c(s) / 2) @ B(math.pi / 2)
    return g


@dataclass(frozen=True)
class Hexagon:
    """Right-angled hexagon given by six complex side lengths in cyclic order."""

    sides: tuple

    def __post_init__(self):
        s = tuple(x if isinstance(x, ComplexLength) else ComplexLength(x) for x in self.sides)
        if len(s) != 6:
            raise ValueError("a hexagon has six sides")
        object.__setattr__(self, "sides", s)

    @classmethod
    def from_consecutive(cls, x, c, y) -> "Hexagon":
        """Hexagon with consecutive sides x, c, y; the rest follow by trigonometry."""
        x, c, y = _c(x), _c(c), _c(y)
        z = _acosh(cmath.cosh(c) * cmath.sinh(x) * cmath.sinh(y) - cmath.cosh(x) * cmath.cosh(y))
        sh_z = cmath.sinh(z)
        if abs(sh_z) < _SMALL:
            raise BranchAmbiguity("degenerate hexagon")
        a = _from_cosh_sinh(cosine_rule(z, x, y), cmath.sinh(c) * cmath.sinh(y) / sh_z)
        b = _from_cosh_sinh(cosine_rule(y, z, x), cmath.sinh(c) * cmath.sinh(x) / sh_z)
        return cls((x, c, y, b, z, a))

    def cosine_residuals(self) -> list[float]:
        """Relative cosine-rule defect at each side."""
        s = [w.value for w in self.sides]
        out = []
        for i in range(6):
            left, mid, right, opp = s[i - 1], s[i], s[(i + 1) % 6], s[(i + 3) % 6]
            lhs = cmath.cosh(mid) * cmath.sinh(left) * cmath.sinh(right)
            rhs = cmath.cosh(left) * cmath.cosh(right) + cmath.cosh(opp)
            out.append(abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)))
        return out

    def closure_defect(self) -> float:
        """Distance of the boundary walk from the identity, relative to its scale."""
        m = boundary_walk(self.sides).matrix
        eye = np.eye(2)
        scale = math.exp(sum(abs(w.length) for w in self.sides) / 2)
        return float(min(np.abs(m - eye).max(), np.abs(m + eye).max())) / scale
