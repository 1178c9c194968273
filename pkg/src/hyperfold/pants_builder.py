"""Pants from cuff half-lengths, shears between glued pants, and spinning.

A pair of pants is two copies of a right-angled hexagon whose alternate
sides are the cuff half-lengths. Cuffs are indexed 0, 1, 2; the seam
``d[k]`` joins cuffs k + 1 and k + 2, so it is the side facing cuff k. The
hexagon is walked in the order (hl0, d2, hl1, d0, hl2, d1).

Spinning replaces each cuff by a zigzag curve that winds ``n`` times around
two of the old cuffs; ``lattice_fit`` chooses the winding numbers so the new
curves come out with nearly equal lengths.
"""

from __future__ import annotations

import cmath
import itertools
import json
import math
from dataclasses import dataclass, field

from .errors import BranchAmbiguity, CuffMismatch, Infeasible
from .foot_matching import TorsorPoint, torsor_distance
from .frame_actions import A, B
from .hexagon_trig import Hexagon, cosine_rule
from .inefficiency import complex_inefficiency
from .moebius_core import INF, ComplexLength, Geodesic, Isometry, is_inf
from .segment_calculus import FramedCycle, closed_length

CUFF_TOL = 1e-9


def _c(x) -> complex:
    return x.value if isinstance(x, ComplexLength) else complex(x)


def _seams(hl: tuple[complex, complex, complex]) -> tuple[complex, complex, complex]:
    h0, h1, h2 = hl
    ch = cosine_rule(h1, h2, h0)
    d0 = cmath.acosh(ch)
    if d0.real < 0:
        d0 = -d0
    # the other two seams take their sinh from the sine rule, which fixes
    # the branch so that the hexagon closes
    hexagon = Hexagon.from_consecutive(h1, d0, h2)
    d1, d2 = hexagon.sides[3].value, hexagon.sides[5].value
    return d0, d1, d2


def _frames(sides) -> list[Isometry]:
    out = [Isometry.identity()]
    for s in sides[:-1]:
        out.append(out[-1] @ A(_c(s) / 2) @ B(math.pi / 2))
    return out


def _line(g: Isometry) -> Geodesic:
    return Geodesic(g.act(0j), g.act(INF))


def _perpendicular_foot(chart: Isometry, target: Geodesic) -> complex:
    """Complex coordinate along the chart's vertical line of the foot of the
    common perpendicular to ``target``, measured from the chart's base point."""
    inv = chart.inverse()
    p, q = inv.act(target.p_rep), inv.act(target.p_att)
    if is_inf(p) or is_inf(q) or p == 0 or q == 0:
        raise BranchAmbiguity("seam meets the cuff at infinity")
    w = cmath.sqrt(p * q)
    # keep the endpoint lying beyond the target
    if abs((p + w) / (p - w)) < 1:
        w = -w
    return cmath.log(w)


@dataclass(frozen=True)
class Pants:
    """Pants with cuff half-lengths ``hl`` placed on their cuffs.

    ``offsets[k]`` is where the foot of the seam arriving at cuff k sits in
    the cuff's own coordinate; the other foot sits ``hl[k]`` further along.
    """

    hl: tuple
    offsets: tuple = (0j, 0j, 0j)
    orientation: int = 1
    d: tuple = field(init=False, repr=False)

    def __post_init__(self):
        hl = tuple(x if isinstance(x, ComplexLength) else ComplexLength(x) for x in self.hl)
        if len(hl) != 3 or any(h.length <= 0 for h in hl):
            raise ValueError("pants need three cuffs with positive real half-length")
        object.__setattr__(self, "hl", hl)
        object.__setattr__(self, "offsets", tuple(complex(o) for o in self.offsets))
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        object.__setattr__(self, "d", tuple(ComplexLength(x) for x in _seams(tuple(h.value for h in hl))))

    @property
    def sides(self) -> tuple:
        h, d = [x.value for x in self.hl], [x.value for x in self.d]
        return (h[0], d[2], h[1], d[0], h[2], d[1])

    def hexagon(self) -> Hexagon:
        return Hexagon(self.sides)

    @property
    def feet(self) -> tuple:
        """Per cuff, the two seam feet as points of C / (2 hl Z + 2 pi i Z)."""
        out = []
        for h, o in zip(self.hl, self.offsets):
            twice = 2 * h.value
            out.append((TorsorPoint(o, twice), TorsorPoint(o + h.value, twice)))
        return tuple(out)

    def foot(self, k: int) -> TorsorPoint:
        """The cuff's foot as a point of C / (hl Z + 2 pi i Z)."""
        return TorsorPoint(self.offsets[k], self.hl[k])

    def third_offset(self, k: int) -> complex:
        """Position, from the first seam foot, of the self-connection's foot on cuff k."""
        sides = self.sides
        frames = _frames(sides)
        cuff, seam = 2 * k, (2 * k + 3) % 6
        return _perpendicular_foot(frames[cuff], _line(frames[seam]))

    def with_offsets(self, offsets, orientation: int | None = None) -> "Pants":
        return Pants(self.hl, tuple(offsets), self.orientation if orientation is None else orientation)

    def to_json(self):
        return {
            "hl": [h.to_json() for h in self.hl],
            "offsets": [[o.real, o.imag] for o in self.offsets],
            "orientation": self.orientation,
        }

    @classmethod
    def from_json(cls, data) -> "Pants":
        return cls(
            tuple(ComplexLength.from_json(h) for h in data["hl"]),
            tuple(complex(*o) for o in data["offsets"]),
            data.get("orientation", 1),
        )


def build_pants(hl1, hl2, hl3) -> Pants:
    return Pants((hl1, hl2, hl3))


def pool_from_feet(hl, footsets) -> list[Pants]:
    """Pants whose cuff k foot is entry i of ``footsets[k]``.

    The three foot sets must list the same pants in the same order with the
    same orientations.
    """
    sizes = {len(fs) for fs in footsets}
    if len(footsets) != 3 or len(sizes) != 1:
        raise ValueError("need three foot sets of equal size")
    pool = []
    for i in range(sizes.pop()):
        feet = [fs.feet[i] for fs in footsets]
        if len({f.orientation for f in feet}) != 1:
            raise ValueError(f"pants {i} has inconsistent orientations")
        pool.append(Pants(tuple(hl), tuple(f.point.value for f in feet), feet[0].orientation))
    return pool


@dataclass(frozen=True)
class Shears:
    short: TorsorPoint
    long: tuple
    residual: float


def shears(p1: Pants, p2: Pants, cuff: int, foot_offsets=(0j, 0j)) -> Shears:
    """Short shear and long shear between two pants sharing ``cuff``.

    ``foot_offsets`` shifts each pants along the shared cuff on top of its
    own offsets. The residual is the distance of t1 + t2 from 2 s in
    C / (2 hl Z + 2 pi i Z).
    """
    h1, h2 = p1.hl[cuff], p2.hl[cuff]
    if h1.distance(h2) > CUFF_TOL * max(1.0, abs(h1.value)):
        raise CuffMismatch(f"cuff {cuff} has half-lengths {h1.value} and {h2.value}")
    hl = h1.value
    a1 = p1.offsets[cuff] + complex(foot_offsets[0])
    b1 = p2.offsets[cuff] + complex(foot_offsets[1])
    u1, u2 = p1.third_offset(cuff), p2.third_offset(cuff)
    alpha = (a1 + u1, a1 - u1)
    beta = (b1 + u2, b1 - u2)
    s = TorsorPoint(b1 - a1, hl)
    t1 = TorsorPoint(beta[0] - alpha[0], 2 * hl)
    t2 = TorsorPoint(beta[1] - alpha[1], 2 * hl)
    residual = torsor_distance(t1.value + t2.value, 2 * (b1 - a1), 2 * hl)
    return Shears(s, (t1, t2), residual)


def ideal_shear(hl1, hl2, hl3, j: int) -> ComplexLength:
    hl = [_c(hl1), _c(hl2), _c(hl3)]
    if any(h.real <= 0 for h in hl):
        raise ValueError("half-lengths need positive real parts")
    return ComplexLength(hl[(j + 1) % 3] + hl[(j + 2) % 3] - hl[j])


@dataclass(frozen=True)
class SpinBase:
    """Arc data of a pants pair used for spinning.

    ``cuffs`` are full complex lengths of the three cuffs. For curve i,
    ``eta_next[i]`` runs along cuff i + 1 and ``eta_prev[i]`` along cuff i - 1
    between the two seams facing cuff i; ``b[i]`` and ``d[i]`` are the
    short arcs across the two pants, framed so the word is continuous.
    """

    cuffs: tuple
    eta_next: tuple
    eta_prev: tuple
    b: tuple
    d: tuple

    def __post_init__(self):
        for name in ("cuffs", "eta_next", "eta_prev", "b", "d"):
            vals = tuple(complex(_c(x)) for x in getattr(self, name))
            if len(vals) != 3:
                raise ValueError(f"{name} needs three entries")
            object.__setattr__(self, name, vals)


@dataclass(frozen=True)
class SpinSpec:
    base: SpinBase
    n: tuple

    def __post_init__(self):
        n = tuple(int(k) for k in self.n)
        if len(n) != 3 or any(k < 1 for k in n):
            raise ValueError("winding numbers must be three positive integers")
        object.__setattr__(self, "n", n)


def regular_base(hl: float = math.log(2 + math.sqrt(3)), eta: complex = 0.5) -> SpinBase:
    """Spin data on three equal cuffs of half-length ``hl``."""
    pants = build_pants(hl, hl, hl)
    cross = pants.d[0].value + 1j * math.pi
    return SpinBase((2 * hl,) * 3, (eta,) * 3, (eta,) * 3, (cross,) * 3, (cross,) * 3)


def sigma(base: SpinBase, i: int) -> complex:
    """Constant term of the spun length: arc lengths less the two detour costs."""
    b, d = base.b[i], base.d[i]
    total = base.eta_next[i] + base.eta_prev[i] + b + d
    return ComplexLength(total - complex_inefficiency(b / 2) - complex_inefficiency(d / 2)).value


def spin_word(spec: SpinSpec, i: int) -> FramedCycle:
    base, n = spec.base, spec.n
    nxt, prv = (i + 1) % 3, (i - 1) % 3
    a = base.eta_next[i] + n[nxt] * base.cuffs[nxt]
    c = base.eta_prev[i] + n[prv] * base.cuffs[prv]
    return FramedCycle.continuous([a, base.b[i], c, base.d[i]])


def spin_prediction(spec: SpinSpec, i: int) -> tuple[ComplexLength, ComplexLength, float]:
    base, n = spec.base, spec.n
    nxt, prv = (i + 1) % 3, (i - 1) % 3
    actual = closed_length(spin_word(spec, i))
    predicted = ComplexLength(n[nxt] * base.cuffs[nxt] + n[prv] * base.cuffs[prv] + sigma(base, i))
    return actual, predicted, actual.distance(predicted)


@dataclass(frozen=True)
class LatticeFit:
    n: tuple
    R: float
    R_prime: float
    errors: tuple
    m1: float
    m2: float
    m: float


def lattice_fit(lengths, sigmas, R0: float, eps: float = 1e-3, n_min: int = 1, tol: float = 1e-9) -> LatticeFit:
    """Winding numbers putting Re(n_i l_i - sigma_i) within m1 of a common R'.

    R' is allowed anywhere in a window of width twice the longest length
    above the lower threshold; inside it the candidates are searched
    exhaustively and R' is placed at the midpoint of the fitted values.
    Ties go to the smaller maximal error, then the smaller total winding.
    """
    ls = [_c(x) for x in lengths]
    sg = [complex(_c(x)) for x in sigmas]
    if len(ls) != 3 or len(sg) != 3:
        raise ValueError("need three lengths and three constants")
    if any(l.real <= 0 for l in ls):
        raise ValueError("lengths need positive real parts")
    if R0 <= 0:
        raise ValueError("R0 must be positive")
    re_l = [l.real for l in ls]
    m1 = max(re_l) / 2 + tol
    r1 = max(n_min * l - s.real for l, s in zip(re_l, sg)) + m1
    lo = max(r1, 2 * R0 + 2 * sum(abs(s) for s in sg), 3 * m1) + 1
    hi = lo + 2 * max(re_l)
    ranges = []
    for l, s in zip(re_l, sg):
        first = max(n_min, math.floor((lo + s.real - m1) / l))
        last = max(first, math.ceil((hi + s.real + m1) / l))
        ranges.append(range(first, last + 1))
    best = None
    for n in itertools.product(*ranges):
        x = [k * l - s.real for k, l, s in zip(n, re_l, sg)]
        r = min(hi, max(lo, (min(x) + max(x)) / 2))
        err = max(abs(v - r) for v in x)
        key = (err, sum(n), n)
        if best is None or key < best[0]:
            best = (key, n, r, x)
    (err, _, _), n, r, x = best
    errors = tuple(abs(v - r) for v in x)
    if err >= m1:
        raise Infeasible(f"best fit misses by {err:.6g} >= m1 = {m1:.6g}")
    two_r = sum(k * l for k, l in zip(n, re_l)) - r
    m2 = (m1 + math.sqrt(2) * eps) / 2
    return LatticeFit(tuple(n), two_r / 2, r, errors, m1, m2, m2 + math.pi)


def goodness_check(hl, shear_values, R: float, delta: float, band: tuple[float, float]) -> dict:
    """Per-cuff margins for |hl - R| < delta and Re(shear) inside the band."""
    lo, hi = band
    cuffs = []
    for k, (h, s) in enumerate(zip(hl, shear_values)):
        h, s = _c(h), _c(s)
        hl_margin = delta - abs(h - R)
        shear_margin = min(s.real - lo, hi - s.real)
        cuffs.append(
            {
                "cuff": k,
                "hl_margin": hl_margin,
                "shear_margin": shear_margin,
                "pass": hl_margin > 0 and shear_margin > 0,
            }
        )
    return {"cuffs": cuffs, "pass": all(c["pass"] for c in cuffs)}


def decomposition_json(hl, shear_values, n, R: float) -> str:
    payload = {
        "hl": [[_c(h).real, _c(h).imag] for h in hl],
        "shears": [[_c(s).real, _c(s).imag] for s in shear_values],
        "n": [int(k) for k in n],
        "R": float(R),
    }
    return json.dumps(payload, sort_keys=True)


@dataclass(frozen=True)
class SpunDecomposition:
    fit: LatticeFit
    hl: tuple
    shears: tuple
    residuals: tuple
    report: dict


def spin_decomposition(base: SpinBase, R0: float, eps: float = 1e-3) -> SpunDecomposition:
    """Fit winding numbers, spin, and test the new cuffs for goodness.

    Shears of the new decomposition are not measured; they are set to the
    ideal-triangle shears of the new half-lengths, and the band is
    R +- 4 m.
    """
    sig = [sigma(base, i) for i in range(3)]
    fit = lattice_fit(base.cuffs, sig, R0, eps)
    spec = SpinSpec(base, fit.n)
    hl, res = [], []
    for i in range(3):
        actual, _, r = spin_prediction(spec, i)
        hl.append(ComplexLength(actual.value / 2))
        res.append(r)
    sh = tuple(ideal_shear(*hl, j) for j in range(3))
    report = goodness_check(hl, sh, fit.R, fit.m, (fit.R - 4 * fit.m, fit.R + 4 * fit.m))
    return SpunDecomposition(fit, tuple(hl), sh, tuple(res), report)
