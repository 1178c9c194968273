"""Framed segments, framed cycles and their holonomy words.

A segment of complex length w starting at frame f ends at ``f * A(w/2)``.
A joint (theta, psi) first turns the normal by psi and then bends the
tangent towards the normal by theta, i.e. right multiplication by
``A(i psi / 2) * B(theta)``. The holonomy of a cycle is the ordered product
of these words; its conjugacy class determines the closed geodesic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import Elliptic, Identity, NotClosable, Parabolic
from .frame_actions import A, B, Frame, right_act
from .moebius_core import INVARIANT_TOL, ComplexLength, Isometry, half_length

# turns the tangent around while keeping the normal
_REVERSER = A(1j * math.pi / 2) @ B(math.pi)
_FLIPPER = A(1j * math.pi / 2)


@dataclass(frozen=True)
class FramedSegment:
    start: Frame
    w: ComplexLength

    def __post_init__(self):
        if not isinstance(self.w, ComplexLength):
            object.__setattr__(self, "w", ComplexLength(self.w))
        if self.w.length < 0:
            raise ValueError("segment length must be nonnegative")

    @property
    def end(self) -> Frame:
        return right_act(self.start, A(self.w.value / 2))

    @property
    def length(self) -> float:
        return self.w.length

    @property
    def phase(self) -> float:
        return self.w.phase


def segment_between(start: Frame, end: Frame, tol: float = 1e-9) -> FramedSegment:
    """Recover the framed segment joining two frames on a common geodesic."""
    m = start.g.inverse() @ end.g
    scale = max(1.0, abs(m.a), abs(m.d))
    if abs(m.b) > tol * scale or abs(m.c) > tol * scale:
        raise ValueError("frames do not lie on a common framed geodesic")
    w = 2 * cmath.log(m.a)
    if w.real < 0:
        w = -w
    return FramedSegment(start, ComplexLength(w))


def transform(s: FramedSegment, kind: str) -> FramedSegment:
    """Orientation reversal, framing flip, or both."""
    if kind == "reverse":
        return FramedSegment(right_act(s.end, _REVERSER), s.w)
    if kind == "flip":
        return FramedSegment(right_act(s.start, _FLIPPER), s.w)
    if kind == "reverse_flip":
        return transform(transform(s, "flip"), "reverse")
    raise ValueError(f"unknown transform {kind!r}")


def same_segment(s: FramedSegment, t: FramedSegment, tol: float = 1e-9) -> bool:
    return s.start.g.isclose(t.start.g, tol) and s.w.distance(t.w) <= tol


@dataclass(frozen=True)
class FramedCycle:
    """Cycle of framed segments stored intrinsically.

    ``joints[i]`` sits between segment i and segment i + 1 (cyclically).
    A chain with one joint fewer than segments is accepted; its word stops
    after the last segment.
    """

    segments: tuple
    joints: tuple = field(default=())

    def __post_init__(self):
        segs = tuple(s if isinstance(s, ComplexLength) else ComplexLength(s) for s in self.segments)
        joints = tuple((float(t), float(p)) for t, p in self.joints)
        if not segs:
            raise ValueError("a cycle needs at least one segment")
        if len(joints) not in (len(segs), len(segs) - 1):
            raise ValueError("joint count must equal segment count, or be one less for a chain")
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "joints", joints)

    @classmethod
    def continuous(cls, segments: Sequence) -> "FramedCycle":
        return cls(tuple(segments), tuple((math.pi / 2, 0.0) for _ in segments))

    @property
    def is_continuous(self) -> bool:
        return len(self.joints) == len(self.segments) and all(
            abs(t - math.pi / 2) <= INVARIANT_TOL and abs(p) <= INVARIANT_TOL for t, p in self.joints
        )

    def rotated(self, k: int) -> "FramedCycle":
        k %= len(self.segments)
        return FramedCycle(self.segments[k:] + self.segments[:k], self.joints[k:] + self.joints[:k])

    def frames(self, start: Frame | None = None) -> list[Frame]:
        """Initial frame of each segment, plus the frame after the full word."""
        f = start or Frame.base()
        out = [f]
        for i, w in enumerate(self.segments):
            f = right_act(f, A(w.value / 2))
            if i < len(self.joints):
                t, p = self.joints[i]
                f = right_act(right_act(f, A(1j * p / 2)), B(t))
            out.append(f)
        return out

    def to_json(self):
        return {"segments": [w.to_json() for w in self.segments], "joints": [list(j) for j in self.joints]}

    @classmethod
    def from_json(cls, data) -> "FramedCycle":
        return cls(tuple(ComplexLength.from_json(w) for w in data["segments"]), tuple(tuple(j) for j in data["joints"]))


def cycle_holonomy(c: FramedCycle) -> Isometry:
    g = Isometry.identity()
    for i, w in enumerate(c.segments):
        g = g @ A(w.value / 2)
        if i < len(c.joints):
            t, p = c.joints[i]
            if p:
                g = g @ A(1j * p / 2)
            g = g @ B(t)
    return g


def closed_length(c: FramedCycle, tol: float = INVARIANT_TOL) -> ComplexLength:
    """Complex length of the closed geodesic homotopic to the cycle."""
    try:
        hl = half_length(cycle_holonomy(c), tol)
    except (Elliptic, Parabolic, Identity) as exc:
        raise NotClosable(str(exc)) from exc
    return ComplexLength(2 * hl.value)


def _as3(v) -> np.ndarray:
    return np.array([v[0].real, v[0].imag, v[1]])


def bending_angles(c: FramedCycle, start: Frame | None = None) -> list[float]:
    """Angle between consecutive tangents at each joint, read off the frames."""
    fs = c.frames(start)
    out = []
    for i in range(len(c.joints)):
        arrive = right_act(fs[i], A(c.segments[i].value / 2)).tangent
        leave = fs[i + 1].tangent
        u, v = _as3(arrive), _as3(leave)
        cos = float(u @ v / (np.linalg.norm(u) * np.linalg.norm(v)))
        out.append(math.acos(max(-1.0, min(1.0, cos))))
    return out


@dataclass(frozen=True)
class TamenessParams:
    L: float
    d: float | None = None
    delta: float | None = None
    theta: float | None = None
    eps: float | None = None


def tameness_check(c: FramedCycle, params: TamenessParams) -> dict:
    """Evaluate each tameness condition separately and report them.

    Conditions whose parameters are missing are reported as ``None``.
    Odd segments are the 1st, 3rd, ... (indices 0, 2, ...).
    """
    lengths = [w.length for w in c.segments]
    L = params.L
    report: dict = {"long_enough": [l > 2 * L for l in lengths]}

    if params.theta is not None and len(c.joints) == len(c.segments):
        bends = [abs(t) for t, _ in c.joints]
        report["lt_tame"] = all(report["long_enough"]) and all(b < params.theta for b in bends)
    else:
        report["lt_tame"] = None

    even_count = len(c.segments) % 2 == 0
    odd = c.segments[0::2]
    even = c.segments[1::2]
    if params.d is not None and params.delta is not None:
        detours = [abs(math.log(abs(cmath.sinh(w.value / 2)))) if w.value != 0 else math.inf for w in even]
        report["detour_log_sinh"] = detours
        report["ldd_tame"] = (
            c.is_continuous
            and even_count
            and all(w.length > 2 * L for w in odd)
            and all(w.length <= 2 * params.d for w in even)
            and all(x <= params.delta for x in detours)
        )
    else:
        report["ldd_tame"] = None

    if params.eps is not None:
        gaps = [w.distance(1j * math.pi) for w in even]
        report["even_gap"] = gaps
        report["zigzag"] = (
            len(c.segments) == 4
            and c.is_continuous
            and all(w.length > 2 * L for w in odd)
            and all(g < 2 * params.eps for g in gaps)
        )
    else:
        report["zigzag"] = None
    return report
