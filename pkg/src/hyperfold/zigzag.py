"""Four-segment zigzag cycles: closed-form holonomy and distance to the axis.

A zigzag alternates two long segments (half-lengths ``l1``, ``l3``) with two
short ones whose half-lengths are ``i pi / 2 + l2`` and ``i pi / 2 + l4``.
The offsets ``l2``, ``l4`` are small for a nearly perfect zigzag.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import Elliptic, Identity, NotClosable, Parabolic
from .frame_actions import A, B
from .moebius_core import (
    INF,
    ComplexLength,
    Isometry,
    axis,
    axis_chart,
    _signed,
    canonicalize,
    half_length,
    is_inf,
    point_to_axis_distance,
)
from .segment_calculus import FramedCycle, cycle_holonomy

_IPI2 = 0.5j * math.pi


def _c(x) -> complex:
    return x.value if isinstance(x, ComplexLength) else complex(x)


def zigzag_entries(l1, l2, l3, l4) -> tuple[complex, complex, complex, complex]:
    """Raw matrix entries (a, b, c, d) of the zigzag holonomy."""
    l1, l2, l3, l4 = _c(l1), _c(l2), _c(l3), _c(l4)
    ch2, sh2, ch4, sh4 = cmath.cosh(l2), cmath.sinh(l2), cmath.cosh(l4), cmath.sinh(l4)
    e1, e3 = cmath.exp(l1), cmath.exp(l3)
    a = e1 * (e3 * ch2 * ch4 - sh2 * sh4 / e3)
    b = e1 * (e3 * ch2 * sh4 - sh2 * ch4 / e3)
    c = (ch2 * sh4 / e3 - e3 * sh2 * ch4) / e1
    d = (ch2 * ch4 / e3 - e3 * sh2 * sh4) / e1
    return a, b, c, d


def zigzag_holonomy(l1, l2, l3, l4) -> Isometry:
    # the entries have determinant one by construction; for long segments a
    # numerical determinant cancels to zero, so only the sign rule is applied
    return _signed(*zigzag_entries(l1, l2, l3, l4))


def zigzag_trace(l1, l2, l3, l4) -> complex:
    l1, l2, l3, l4 = _c(l1), _c(l2), _c(l3), _c(l4)
    return 2 * (
        cmath.cosh(l2) * cmath.cosh(l4) * cmath.cosh(l1 + l3)
        - cmath.sinh(l2) * cmath.sinh(l4) * cmath.cosh(l1 - l3)
    )


def zigzag_word(l1, l2, l3, l4) -> Isometry:
    """The same holonomy as an explicit product of generators."""
    q = B(math.pi / 2)
    return A(_c(l1)) @ q @ A(_c(l2) + _IPI2) @ q @ A(_c(l3)) @ q @ A(_c(l4) + _IPI2) @ q


def zigzag_cycle(l1, l2, l3, l4) -> FramedCycle:
    """Continuous framed cycle whose holonomy is the zigzag word."""
    segs = [2 * _c(l1), 2 * (_c(l2) + _IPI2), 2 * _c(l3), 2 * (_c(l4) + _IPI2)]
    return FramedCycle.continuous(segs)


def _eigen(a, b, c, d) -> complex:
    tr = a + d
    root = cmath.sqrt(tr * tr - 4)
    return (tr + root) / 2 if abs(tr + root) >= abs(tr - root) else (tr - root) / 2


def _fixed(a, b, c, d, e):
    # fixed point for eigenvalue e; use the better conditioned of the two forms
    if abs(e - d) >= abs(e - a):
        return INF if c == 0 else (e - d) / c
    return b / (e - a) if e != a else INF


def zigzag_axis_distance(l1, l2, l3, l4) -> float:
    """Distance from the first joint, lifted to (0, 1), to the holonomy axis."""
    a, b, c, d = zigzag_entries(l1, l2, l3, l4)
    g = canonicalize(np.array([[a, b], [c, d]], dtype=complex))
    try:
        half_length(g)
    except (Elliptic, Parabolic, Identity) as exc:
        raise NotClosable(str(exc)) from exc
    a, b, c, d = g.a, g.b, g.c, g.d
    lam = _eigen(a, b, c, d)
    z1 = _fixed(a, b, c, d, lam)
    z2 = _fixed(a, b, c, d, 1 / lam)
    if is_inf(z1) and is_inf(z2):
        return 0.0
    if is_inf(z1):
        z1, z2 = z2, z1
    if is_inf(z2):
        return math.asinh(abs(z1))
    return math.asinh(abs((1 + z1 * z2.conjugate()) / (z1 - z2)))


def zigzag_bounds(L: float, eps: float, R: float, B: float) -> tuple[float, float]:
    """(bound on sinh D for an (L, eps)-zigzag, B e^{-R/2} scale marker)."""
    if L <= 0 or R <= 0:
        raise ValueError("L and R must be positive")
    return 48.0 * eps + 8.0 * math.exp(-2.0 * L), B * math.exp(-R / 2.0)


def _segment_distance(z: np.ndarray, t: np.ndarray, top: float) -> np.ndarray:
    """Exact distance from points to the vertical segment from (0, 1) to (0, top)."""
    foot = np.clip(np.hypot(np.abs(z), t), 1.0, top)
    return 2.0 * np.arcsinh(np.sqrt((np.abs(z) ** 2 + (t - foot) ** 2) / (4.0 * t * foot)))


def hausdorff_oracle(c: FramedCycle, n_samples: int) -> float:
    """Hausdorff distance between the lifted broken path and the axis.

    Each segment is measured in its own chart, where it runs up the vertical
    axis from (0, 1); this keeps coordinates well conditioned when the path
    is long. The path side is exact: distance to a geodesic is convex along a
    geodesic segment, so its maximum over the path sits at a joint. The axis
    side samples one period of the axis at ``n_samples`` points and measures
    each against the segments exactly, so the estimate approaches the true
    value from below as the grid is refined.
    """
    m = len(c.segments)
    charts = [cycle_holonomy(c.rotated(i)) for i in range(m)]
    try:
        axes = [axis(x) for x in charts]
        period = 2.0 * half_length(charts[0]).length
    except (Elliptic, Parabolic, Identity) as exc:
        raise NotClosable(str(exc)) from exc
    path_side = max(point_to_axis_distance((0j, 1.0), x) for x in charts)

    grid = np.linspace(0.0, period, n_samples)
    best = np.full(n_samples, np.inf)
    offset = 0.0
    for ax, w in zip(axes, c.segments):
        norm = axis_chart(ax)
        z0, t0 = norm.act_point(0j, 1.0)
        z1, t1 = norm.act_point(0j, math.exp(w.length))
        h0 = math.hypot(abs(z0), t0)
        yz, yt = norm.inverse().act_points(np.zeros(n_samples, dtype=complex), h0 * np.exp(grid - offset))
        best = np.minimum(best, _segment_distance(yz, yt, math.exp(w.length)))
        offset += math.log(math.hypot(abs(z1), t1) / h0)
    return max(path_side, float(best.max()))
