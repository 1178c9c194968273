"""Frame distortion: product estimates, geodesic sequences, perfect models.

Frames are compared through the left-invariant quasi-metric of
``frame_actions``: the distance from u to v is the size of the isometry
taking u to v by the right action, and the distortion of a correspondence
``e`` on a pair (u, v) is the size of (u -> v)^-1 (e(u) -> e(v)).
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateQuadruple, HypothesisViolated, NotSemiLinear
from .foot_matching import Assembly, Gluing
from .frame_actions import A, B, Frame, isometry_norm
from .moebius_core import (
    INF,
    Geodesic,
    Isometry,
    axis_chart,
    canonical_phase,
    canonicalize,
    complex_distance,
    is_inf,
)

_REVERSER = A(1j * math.pi / 2) @ B(math.pi)


# matrix generators of SL(2, R), extended to complex parameters


def x_flow(t) -> np.ndarray:
    e = cmath.exp(complex(t) / 2)
    return np.array([[e, 0], [0, 1 / e]], dtype=complex)


def rotation(t) -> np.ndarray:
    c, s = cmath.cos(complex(t) / 2), cmath.sin(complex(t) / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def y_flow(t) -> np.ndarray:
    return rotation(math.pi / 2) @ x_flow(t) @ rotation(-math.pi / 2)


def _conjugated(a, b) -> tuple:
    """Entries of Y(b) X(a) Y(-b), in closed form for speed."""
    ch, sh = cmath.cosh(complex(a) / 2), cmath.sinh(complex(a) / 2)
    c2, s2 = cmath.cosh(complex(b)), cmath.sinh(complex(b))
    return (ch + sh * c2, -sh * s2, sh * s2, ch - sh * c2)


def _mul(p: tuple, q: tuple) -> tuple:
    return (
        p[0] * q[0] + p[1] * q[2],
        p[0] * q[1] + p[1] * q[3],
        p[2] * q[0] + p[3] * q[2],
        p[2] * q[1] + p[3] * q[3],
    )


def check_hypotheses(a, b, a2, b2, A_: float, B_: float, eps: float) -> dict:
    """Margins of the admissibility conditions; raises on the first failure."""
    a, b, a2, b2 = (np.asarray(v, dtype=complex) for v in (a, b, a2, b2))
    if not (a.shape == b.shape == a2.shape == b2.shape) or a.ndim != 1:
        raise HypothesisViolated("sequences must be one-dimensional and of equal length")
    gap_a = np.abs(a - a2)
    checks = {
        "eps_small": min(1 / A_, 1 / B_) - eps,
        "total_weight": B_ - float(np.sum(np.abs(a) * np.exp(np.abs(b)))),
        "local_weight": A_ - float(np.max(2 * np.abs(a) * np.exp(np.abs(b.real) + 1), initial=0.0)),
        "b_close": eps - float(np.max(np.abs(b - b2), initial=0.0)),
        # an exact match counts as close even where a vanishes
        "a_close": float(np.min(np.where(gap_a == 0, np.inf, eps * np.abs(a) - gap_a), initial=np.inf)),
    }
    for name, margin in checks.items():
        weak = name in ("total_weight", "local_weight")
        if margin < 0 or (margin == 0 and not weak):
            raise HypothesisViolated(f"condition {name} fails with margin {margin:.3g}")
    return checks


@dataclass(frozen=True)
class ProductEstimate:
    lhs: float
    bound: float
    sum_lhs: float

    @property
    def product_ok(self) -> bool:
        return self.lhs <= self.bound

    @property
    def sum_ok(self) -> bool:
        return self.sum_lhs <= self.bound


def product_estimate(a, b, a2, b2, A_: float, B_: float, eps: float) -> ProductEstimate:
    """Operator-norm gap between the ordered products of Y(b) X(a) Y(-b)
    for the two parameter lists, the same gap for sums, and the bound
    12 e^(A + 2B) B eps."""
    check_hypotheses(a, b, a2, b2, A_, B_, eps)
    p1 = p2 = (1, 0, 0, 1)
    s1 = s2 = (0, 0, 0, 0)
    for ai, bi, ci, di in zip(a, b, a2, b2):
        m1, m2 = _conjugated(ai, bi), _conjugated(ci, di)
        p1, p2 = _mul(p1, m1), _mul(p2, m2)
        s1 = tuple(x + y for x, y in zip(s1, m1))
        s2 = tuple(x + y for x, y in zip(s2, m2))
    bound = 12.0 * math.exp(A_ + 2 * B_) * B_ * eps

    def gap(x, y):
        return float(np.linalg.norm(np.subtract(x, y).reshape(2, 2), 2))

    return ProductEstimate(gap(p1, p2), bound, gap(s1, s2))


def random_admissible(rng: np.random.Generator, n: int, A_: float, B_: float, eps: float):
    """Parameters meeting every admissibility condition, drawn at random."""
    b = rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)
    raw = rng.uniform(0.1, 1, n) * np.exp(1j * rng.uniform(0, 2 * math.pi, n))
    weight = np.exp(np.abs(b))
    scale = min(0.999 * B_ / float(np.sum(np.abs(raw) * weight)),
                0.999 * A_ / float(np.max(2 * np.abs(raw) * np.exp(np.abs(b.real) + 1))))
    a = raw * scale
    db = rng.uniform(0, 0.999 * eps, n) * np.exp(1j * rng.uniform(0, 2 * math.pi, n))
    da = rng.uniform(0, 0.999 * eps, n) * np.exp(1j * rng.uniform(0, 2 * math.pi, n)) * np.abs(a)
    return a, b, a + da, b + db


# geodesic sequences


def _move_normal(u: complex) -> Isometry:
    """Right action translating a frame along its normal by complex distance u."""
    c = canonicalize(np.array([[1, 1], [-1, 1]], dtype=complex))
    e = cmath.exp(complex(u) / 2)
    return c.inverse() @ Isometry.from_entries(e, 0, 0, 1 / e) @ c


def frame_line(f: Frame) -> Geodesic:
    """The oriented geodesic through a frame along its tangent."""
    return Geodesic(f.g.act(0j), f.g.act(INF))


def _beyond(p: complex, q: complex) -> complex:
    """Endpoint of the perpendicular from the vertical axis to (p, q), on the far side."""
    w = cmath.sqrt(p * q)
    if abs((p + w) / (p - w)) < 1:
        w = -w
    return w


def _chart_points(chart: Isometry, g: Geodesic, what: str):
    p, q = chart.act(g.p_rep), chart.act(g.p_att)
    if is_inf(p) or is_inf(q) or abs(p) < 1e-300 or abs(q) < 1e-300:
        raise NotSemiLinear(f"{what}: geodesics share an endpoint")
    return p, q


def _translation(rep, att, u: complex) -> Isometry:
    """Left isometry translating along (rep -> att) by complex distance u."""
    m = axis_chart(Geodesic(rep, att))
    e = cmath.exp(complex(u) / 2)
    return m.inverse() @ Isometry.from_entries(e, 0, 0, 1 / e) @ m


@dataclass(frozen=True)
class GeodesicSequence:
    """Geodesics with common perpendiculars between consecutive members.

    ``u[i]`` is the complex distance from geodesic i to i + 1 along their
    common perpendicular, ``v[i]`` the complex distance along geodesic i
    from the perpendicular arriving from i - 1 to the one leaving for i + 1
    (so ``v[0]`` is unused and set to 0).
    """

    geodesics: tuple

    def __post_init__(self):
        gs = tuple(self.geodesics)
        if len(gs) < 2:
            raise NotSemiLinear("a sequence needs at least two geodesics")
        object.__setattr__(self, "geodesics", gs)
        charts = [axis_chart(g) for g in gs]
        u, out_coord, in_coord, perps, moves = [], [], [None], [], []
        for i in range(len(gs) - 1):
            p, q = _chart_points(charts[i], gs[i + 1], f"pair {i}")
            w = _beyond(p, q)
            back = charts[i].inverse()
            rep, att = back.act(-w), back.act(w)
            local = axis_chart(Geodesic(rep, att))
            _, a2 = _chart_points(local, gs[i], f"pair {i}")
            _, b2 = _chart_points(local, gs[i + 1], f"pair {i}")
            ui = cmath.log(b2 / a2)
            ui = complex(ui.real, canonical_phase(ui.imag))
            if ui.real <= 1e-12:
                raise NotSemiLinear(f"geodesics {i} and {i + 1} meet")
            u.append(ui)
            out_coord.append(cmath.log(w))
            w_in = charts[i + 1].act(rep)
            in_coord.append(cmath.log(-w_in))
            perps.append(Geodesic(rep, att))
            moves.append(_translation(rep, att, ui))
        v = [0j]
        for i in range(1, len(gs) - 1):
            d = out_coord[i] - in_coord[i]
            v.append(complex(d.real, canonical_phase(d.imag)))
        object.__setattr__(self, "_charts", charts)
        object.__setattr__(self, "u", tuple(u))
        object.__setattr__(self, "v", tuple(v))
        object.__setattr__(self, "perpendiculars", tuple(perps))
        object.__setattr__(self, "_out", tuple(out_coord))
        object.__setattr__(self, "_in", tuple(in_coord))
        object.__setattr__(self, "moves", tuple(moves))

    def __len__(self):
        return len(self.geodesics)

    def foot_frame(self, i: int, outgoing: bool = True) -> Frame:
        """Frame on geodesic i at a perpendicular's foot, normal along it."""
        c = self._out[i] if outgoing else self._in[i]
        return Frame(self._charts[i].inverse() @ A(c / 2))

    def coordinate(self, i: int, f: Frame, tol: float = 1e-9) -> complex:
        """Complex position of a frame along geodesic i, or NotSemiLinear if off it."""
        m = self._charts[i] @ f.g
        scale = max(1.0, abs(m.a), abs(m.d))
        if abs(m.b) > tol * scale or abs(m.c) > tol * scale:
            raise NotSemiLinear(f"frame is not carried by geodesic {i}")
        return 2 * cmath.log(m.a)

    def is_linear(self, tol: float = 1e-9) -> bool:
        """All endpoints on the extended real line and all u real."""
        pts = [p for g in self.geodesics for p in (g.p_rep, g.p_att) if not is_inf(p)]
        return all(abs(complex(p).imag) <= tol for p in pts) and all(abs(canonical_phase(x.imag)) <= tol for x in self.u)


def sequence_from_steps(us: Sequence, vs: Sequence, b0: complex = 0j, start: Frame | None = None) -> GeodesicSequence:
    """Sequence built by walking: along the geodesic by b0, across by u0,
    along by v1, across by u1, and so on."""
    if len(vs) != len(us) - 1:
        raise ValueError("need one fewer along-step than across-steps")
    f = start or Frame.base()
    lines = [frame_line(f)]
    f = Frame(f.g @ A(complex(b0) / 2))
    for i, u in enumerate(us):
        if i:
            f = Frame(f.g @ A(complex(vs[i - 1]) / 2))
        f = Frame(f.g @ _move_normal(u))
        lines.append(frame_line(f))
    return GeodesicSequence(tuple(lines))


def homologous_frames(seq: GeodesicSequence, x0: Frame) -> list[Frame]:
    seq.coordinate(0, x0)
    out = [x0]
    for g in seq.moves:
        out.append(out[-1].left(g))
    return out


@dataclass(frozen=True)
class SequenceParams:
    R: float
    B: float
    eps: float
    B_minus: float
    B_plus: float
    K: float = 1.0


def sequence_checks(seq: GeodesicSequence, seq2: GeodesicSequence | None, seq3: GeodesicSequence | None, params: SequenceParams) -> dict:
    """Well-matched conditions against ``seq2``, related conditions against
    ``seq3`` and the sum bound on ``seq3`` when it is linear.

    Each entry lists per-index margins (positive means satisfied).
    """
    P = params
    n = len(seq)
    report: dict = {"well_matched": None, "related": None, "sum_bound": None}
    inner = range(1, n - 1)
    scale = math.exp(P.R / 2)

    def u_band(x):
        return min(abs(x) * scale - 1 / P.B, P.B - abs(x) * scale)

    def v_band(x):
        return min(x.real - P.B_minus, P.B_plus - x.real)

    if seq2 is not None:
        if len(seq2) != n:
            raise ValueError("sequences must have equal length")
        conds = {
            "v_band": [v_band(seq.v[i]) for i in inner],
            "v_close": [P.B_minus * P.eps / (2 * P.R) - abs(seq2.v[i] - seq.v[i]) for i in inner],
            "u_band": [u_band(x) for x in seq.u],
            "u_close": [P.eps * abs(x) - abs(y - x) for x, y in zip(seq.u, seq2.u)],
        }
        report["well_matched"] = {
            k: {"margins": m, "pass": all(x > 0 for x in m)} for k, m in conds.items()
        }
    if seq3 is not None:
        if len(seq3) != n:
            raise ValueError("sequences must have equal length")
        conds = {
            "u_band": [min(u_band(x), u_band(y)) for x, y in zip(seq.u, seq3.u)],
            "v_band": [min(v_band(seq.v[i]), v_band(seq3.v[i])) for i in inner],
            "v_real_close": [1 / P.R - abs(seq.v[i].real - seq3.v[i].real) for i in inner],
        }
        report["related"] = {k: {"margins": m, "pass": all(x > 0 for x in m)} for k, m in conds.items()}
        if seq3.is_linear():
            report["sum_bound"] = sum_bound(seq3)
    return report


def sum_bound(seq: GeodesicSequence) -> dict:
    """|sum of v| against D + 2 ln D - ln u0 - ln u_last + 3 for a linear sequence."""
    D = complex_distance(seq.geodesics[0], seq.geodesics[-1]).length
    u0, un = seq.u[0].real, seq.u[-1].real
    if D <= 0 or u0 >= 1 or un >= 1:
        return {"applicable": False}
    lhs = abs(sum(seq.v[1:]))
    rhs = D + 2 * math.log(D) - math.log(u0) - math.log(un) + 3
    return {"applicable": True, "lhs": lhs, "rhs": rhs, "slack": rhs - lhs, "pass": lhs <= rhs}


def corresponding_start(seq: GeodesicSequence, seq2: GeodesicSequence, x0: Frame) -> Frame:
    """Image of x0 under the isometric match of the first geodesics that
    sends the outgoing foot to the outgoing foot."""
    c = seq.coordinate(0, x0) - seq._out[0]
    return Frame(seq2.foot_frame(0).g @ A(c / 2))


def endpoint_distortion(seq: GeodesicSequence, seq2: GeodesicSequence, x0: Frame, x0_prime: Frame | None = None) -> float:
    if len(seq) != len(seq2):
        raise ValueError("sequences must have equal length")
    if x0_prime is None:
        x0_prime = corresponding_start(seq, seq2, x0)
    xs, ys = homologous_frames(seq, x0), homologous_frames(seq2, x0_prime)
    m1 = xs[0].g.inverse() @ xs[-1].g
    m2 = ys[0].g.inverse() @ ys[-1].g
    return isometry_norm(m1.inverse() @ m2)


@dataclass(frozen=True)
class FrameCorrespondence:
    pairs: tuple

    def distortion(self, D: float) -> float:
        """Max over pairs (u, v) with d(u, v) < D of d(u -> v, e(u) -> e(v))."""
        worst = 0.0
        for (u, eu), (v, ev) in itertools.permutations(self.pairs, 2):
            m1 = u.g.inverse() @ v.g
            if isometry_norm(m1) >= D:
                continue
            m2 = eu.g.inverse() @ ev.g
            worst = max(worst, isometry_norm(m1.inverse() @ m2))
        return worst


def chain_discrepancy(steps_u: Sequence[Isometry], steps_v: Sequence[Isometry]) -> float:
    """End-to-end gap d(u0 -> uk, v0 -> vk) given the step isometries."""
    pu, pv = Isometry.identity(), Isometry.identity()
    for a, b in zip(steps_u, steps_v):
        pu, pv = pu @ a, pv @ b
    return isometry_norm(pu.inverse() @ pv)


def _random_isometry(rng: np.random.Generator, size: float) -> Isometry:
    m = np.eye(2, dtype=complex) + size * (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    return canonicalize(m)


def chain_delta(eps: float, D: float, k: int, trials: int = 200, seed: int = 0, grid=None) -> float:
    """Largest step gap on a grid for which every sampled chain of k steps,
    each of size below D, keeps its end-to-end gap below eps."""
    rng = np.random.default_rng(seed)
    chains = []
    for _ in range(trials):
        steps, noise = [], []
        while len(steps) < k:
            g = _random_isometry(rng, D / 4)
            if isometry_norm(g) < D:
                steps.append(g)
                noise.append(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        chains.append((steps, noise))
    grid = np.geomspace(1e-8, 1.0, 81) if grid is None else np.asarray(grid)
    best = 0.0
    for delta in grid:
        ok = True
        for steps, noise in chains:
            moved = []
            for g, z in zip(steps, noise):
                h = canonicalize(g.matrix @ (np.eye(2) + z * (delta / (4 * np.linalg.norm(z)))))
                moved.append(h if isometry_norm(g.inverse() @ h) < delta else g)
            if chain_discrepancy(steps, moved) >= eps:
                ok = False
                break
        if not ok:
            break
        best = float(delta)
    return best


# perfect models of assemblies


def _walk_step(side: complex) -> Isometry:
    return A(side / 2) @ B(math.pi / 2)


def _glue(shear: complex) -> Isometry:
    return A((complex(shear) + 1j * math.pi) / 2) @ _REVERSER


def _moves(asm: Assembly, shears: Sequence[complex], sides: Sequence) -> dict:
    """Labelled moves from each (pants, vertex)."""
    out: dict = {}
    for p in range(len(asm.pants)):
        for v in range(6):
            fwd = _walk_step(sides[p][v])
            back = _walk_step(sides[p][(v - 1) % 6]).inverse()
            out[(p, v)] = [("f", (p, (v + 1) % 6), fwd), ("b", (p, (v - 1) % 6), back)]
    for g, s in zip(asm.gluings, shears):
        step = _glue(s)
        k = 2 * g.curve
        out[(g.plus, k)].append((("g", g.curve), (g.minus, k), step))
        out[(g.minus, k)].append((("g", g.curve), (g.plus, k), step.inverse()))
    return out


def perfect_model(asm: Assembly) -> Assembly:
    from .pants_builder import Pants

    hl = tuple(h for h, _ in asm.targets)
    pants = tuple(Pants(hl, p.offsets, p.orientation) for p in asm.pants)
    gluings = tuple(Gluing(g.plus, g.minus, g.curve, asm.targets[g.curve][1], 0.0) for g in asm.gluings)
    return Assembly(pants, gluings, asm.targets)


def perfect_model_scan(asm: Assembly, D: float = 10.0, depth: int = 6) -> tuple[Assembly, float]:
    """Compare frames of an assembly with its perfect model.

    Frames sit at the hexagon vertices of every pants. Starting from each of
    them, words of up to ``depth`` moves (along a hexagon side either way, or
    across a gluing) are followed in both the model and the assembly; the
    distortion is the largest gap between the two words over all words whose
    model displacement is below D.
    """
    problems = asm.validate()
    if problems:
        raise ValueError("; ".join(problems))
    model = perfect_model(asm)
    real_moves = _moves(asm, [g.shear for g in asm.gluings], [p.sides for p in asm.pants])
    model_moves = _moves(model, [g.shear for g in model.gluings], [p.sides for p in model.pants])
    eye = np.eye(2, dtype=complex)
    worst = 0.0
    for start in real_moves:
        frontier = [(start, None, eye, np.zeros((2, 2), dtype=complex))]
        for _ in range(depth):
            nxt = []
            for state, last, wm, gap in frontier:
                for (label, target, step), (_, _, mstep) in zip(real_moves[state], model_moves[state]):
                    if _undoes(last, label):
                        continue
                    m, g = _advance(wm, gap, mstep.matrix, step.matrix)
                    if isometry_norm(canonicalize(m)) < D:
                        worst = max(worst, _gap_norm(g))
                    nxt.append((target, label, m, g))
            frontier = nxt
    return model, worst


def _sl2_inverse(m: np.ndarray) -> np.ndarray:
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])


def _advance(wm: np.ndarray, gap: np.ndarray, mstep: np.ndarray, rstep: np.ndarray):
    """Extend the model word by ``mstep`` and the gap E = Wm^-1 Wr - I by
    the matching steps. The step difference is formed before multiplying,
    so identical steps add nothing and rounding stays relative to the gap."""
    if np.linalg.norm(rstep + mstep) < np.linalg.norm(rstep - mstep):
        rstep = -rstep
    inv = _sl2_inverse(mstep)
    return wm @ mstep, inv @ (gap @ rstep) + inv @ (rstep - mstep)


def _gap_norm(gap: np.ndarray) -> float:
    eye = np.eye(2)
    return float(min(np.linalg.norm(gap), np.linalg.norm(gap + 2 * eye)))


def _undoes(last, label) -> bool:
    if last is None:
        return False
    if last in ("f", "b"):
        return label in ("f", "b") and label != last
    return label == last


def perturbed_assembly(asm: Assembly, eps: float, seed: int = 0) -> Assembly:
    """Copy of ``asm`` with each curve's half-length and each gluing's shear
    moved by at most eps in a random direction; targets are kept."""
    from .pants_builder import Pants

    rng = np.random.default_rng(seed)

    def kick():
        return eps * cmath.exp(2j * math.pi * rng.random()) * rng.random()

    hl = tuple(complex(h) + kick() for h, _ in asm.targets)
    pants = tuple(Pants(hl, p.offsets, p.orientation) for p in asm.pants)
    gluings = tuple(Gluing(g.plus, g.minus, g.curve, g.shear + kick(), abs(g.error) + eps) for g in asm.gluings)
    return Assembly(pants, gluings, asm.targets)


# cross ratios


def cross_ratio(z1, z2, z3, z4) -> complex:
    pts = [complex(z) for z in (z1, z2, z3, z4)]
    if len({(p.real, p.imag) for p in pts}) < 4:
        raise DegenerateQuadruple("quadruple has a repeated point")
    return ((pts[0] - pts[2]) * (pts[1] - pts[3])) / ((pts[0] - pts[3]) * (pts[1] - pts[2]))


@dataclass(frozen=True)
class CrossRatioWindow:
    """Cross ratios with lo <= |c| <= hi and |c - 1| >= gap."""

    lo: float = 0.1
    hi: float = 10.0
    gap: float = 0.1

    def contains(self, c: complex) -> bool:
        return self.lo <= abs(c) <= self.hi and abs(c - 1) >= self.gap


def quasisymmetry_defect(pairs: Sequence, window: CrossRatioWindow = CrossRatioWindow(), n_samples: int | None = None, seed: int = 0) -> float:
    """Largest cross-ratio displacement over quadruples inside the window.

    All ordered-by-index quadruples are used when ``n_samples`` is None,
    otherwise that many random quadruples of distinct indices.
    """
    if len(pairs) < 4:
        raise DegenerateQuadruple("need at least four point pairs")
    src = [complex(z) for z, _ in pairs]
    dst = [complex(w) for _, w in pairs]
    for pts in (src, dst):
        if len({(p.real, p.imag) for p in pts}) < len(pts):
            raise DegenerateQuadruple("repeated boundary point")
    if n_samples is None:
        quads = itertools.combinations(range(len(pairs)), 4)
    else:
        rng = np.random.default_rng(seed)
        quads = (tuple(rng.choice(len(pairs), 4, replace=False)) for _ in range(n_samples))
    worst = 0.0
    for q in quads:
        c = cross_ratio(*(src[i] for i in q))
        if window.contains(c):
            worst = max(worst, abs(cross_ratio(*(dst[i] for i in q)) - c))
    return worst
