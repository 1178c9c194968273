"""Inefficiency of bends and short detours.

A bend of angle theta between two long geodesic segments costs about
``2 ln sec(theta / 2)`` of length. A short detour of complex length 2d
between two long segments costs ``I_l(d) + i I_phi(d)`` of complex length.
Summing these costs over a tame cycle predicts the complex length of the
closed geodesic it shadows.
"""

from __future__ import annotations

import cmath
import math

from .errors import OutOfRange, ZeroDetour
from .moebius_core import ComplexLength, canonical_phase
from .segment_calculus import FramedCycle, closed_length


def angle_inefficiency(theta: float) -> float:
    if theta < 0 or theta >= math.pi:
        raise OutOfRange(f"bending angle {theta!r} outside [0, pi)")
    return 2.0 * math.log(1.0 / math.cos(theta / 2.0))


def complex_inefficiency(d) -> complex:
    """I_l(d) + i I_phi(d) for a detour of complex length 2d."""
    d = complex(d.value if isinstance(d, ComplexLength) else d)
    sh = cmath.sinh(d)
    if d == 0 or sh == 0:
        raise ZeroDetour("detour of zero length")
    length = 2 * d.real - 2 * math.log(abs(sh))
    phase = 2 * d.imag - 2 * cmath.phase(sh)
    return complex(length, phase)


def predict_closure(c: FramedCycle) -> tuple[ComplexLength, tuple[float, float]]:
    """Predicted complex length of the closed geodesic and the residuals.

    The cycle alternates long segments with short detours (even positions).
    Residuals are the length gap and the phase gap measured in R / 2 pi Z,
    each nonnegative and the latter at most pi.
    """
    if len(c.segments) % 2:
        raise ValueError("cycle must have an even number of segments")
    total = sum(w.value for w in c.segments)
    cost = sum(complex_inefficiency(w.value / 2) for w in c.segments[1::2])
    predicted = complex(total.real - cost.real, total.imag - cost.imag)
    actual = closed_length(c)
    length_gap = abs(actual.length - predicted.real)
    phase_gap = abs(canonical_phase(actual.phase - predicted.imag))
    return ComplexLength(predicted), (length_gap, phase_gap)
