"""Frames of H^3 as group elements.

A frame is a base point with an orthonormal pair (tangent, normal). Fixing
the base frame at (0, 1) with tangent pointing up and normal along the real
axis identifies frames with PSL(2,C): the element g labels the image of the
base frame under g. Left multiplication moves frames by isometries of space;
right multiplication by generators moves a frame along its own axes.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NonRealAngle
from .moebius_core import INVARIANT_TOL, Isometry

BASE_POINT = (0j, 1.0)
BASE_TANGENT = (0j, 1.0)
BASE_NORMAL = (1 + 0j, 0.0)


def generator(kind: str, w) -> Isometry:
    """Named generators of the right action.

    ``A(w) = diag(e^w, e^-w)`` flows the frame forward by distance 2 Re(w)
    and turns the normal by 2 Im(w). ``B(theta)`` turns the tangent towards
    the normal by theta about their common perpendicular.
    """
    if kind == "A":
        e = cmath.exp(complex(w))
        return Isometry.from_entries(e, 0, 0, 1 / e)
    if kind == "B":
        w = complex(w)
        if abs(w.imag) > INVARIANT_TOL:
            raise NonRealAngle(f"rotation angle {w!r} is not real")
        c, s = math.cos(w.real / 2), math.sin(w.real / 2)
        return Isometry.from_entries(c, s, -s, c)
    raise ValueError(f"unknown generator kind {kind!r}")


def A(w) -> Isometry:
    return generator("A", w)


def B(theta) -> Isometry:
    return generator("B", theta)


@dataclass(frozen=True)
class Frame:
    """The frame obtained by moving the base frame with ``g``."""

    g: Isometry

    @classmethod
    def base(cls) -> "Frame":
        return cls(Isometry.identity())

    @property
    def point(self) -> tuple[complex, float]:
        return self.g.act_point(*BASE_POINT)

    @property
    def tangent(self) -> tuple[complex, float]:
        return self.g.act_vector(*BASE_POINT, BASE_TANGENT)

    @property
    def normal(self) -> tuple[complex, float]:
        return self.g.act_vector(*BASE_POINT, BASE_NORMAL)

    def vectors(self):
        """(point, tangent, normal) in Euclidean half-space coordinates."""
        return self.point, self.tangent, self.normal

    def left(self, h: Isometry) -> "Frame":
        """Image of this frame under the isometry ``h``."""
        return Frame(h @ self.g)

    def to_json(self):
        return self.g.to_json()

    @classmethod
    def from_json(cls, data) -> "Frame":
        return cls(Isometry.from_json(data))


def right_act(f: Frame, h: Isometry) -> Frame:
    return Frame(f.g @ h)


def isometry_norm(g: Isometry) -> float:
    """min ||G - I||_F over the two SL(2,C) lifts of g."""
    m = g.matrix
    eye = np.eye(2)
    return float(min(np.linalg.norm(m - eye), np.linalg.norm(m + eye)))


def displacement_metric(u: Frame, v: Frame) -> tuple[Isometry, float]:
    """The isometry taking u to v by the right action, and its size."""
    move = u.g.inverse() @ v.g
    return move, isometry_norm(move)
