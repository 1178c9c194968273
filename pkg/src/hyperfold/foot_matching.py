"""Feet on the unit normal torsor of a cuff, matching them, and gluing pants.

The torsor of a cuff with half-length ``hl`` is ``C / (hl Z + 2 pi i Z)``.
Each foot carries an orientation: +1 for pants inducing the cuff's
orientation and -1 for the others. Gluing pairs a positive foot ``v`` with a
negative foot close to ``tau(v) = v + i pi + s``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import Infeasible, NotApplicable, OddCount
from .moebius_core import ComplexLength, canonical_phase

_TWO_PI = 2.0 * math.pi


def _modulus(hl) -> complex:
    m = hl.value if isinstance(hl, ComplexLength) else complex(hl)
    if m.real <= 0:
        raise ValueError("torsor modulus needs a positive real part")
    return m


def reduce(z: complex, hl) -> complex:
    """Representative of z in [0, Re hl) x (-pi, pi]."""
    m = _modulus(hl)
    z = complex(z)
    k = math.floor(z.real / m.real)
    z -= k * m
    # rounding may land exactly on the right edge
    while z.real >= m.real:
        z -= m
    while z.real < 0:
        z += m
    return complex(z.real, canonical_phase(z.imag))


def torsor_distance(z: complex, w: complex, hl) -> float:
    """Distance between the classes of z and w in C / (hl Z + 2 pi i Z)."""
    m = _modulus(hl)
    diff = reduce(complex(z) - complex(w), m)
    reach = math.ceil(math.pi / m.real) + 2
    best = math.inf
    for k in range(-reach, reach + 1):
        d = diff - k * m
        best = min(best, math.hypot(d.real, canonical_phase(d.imag)))
    return best


@dataclass(frozen=True)
class TorsorPoint:
    value: complex
    modulus: ComplexLength

    def __post_init__(self):
        if not isinstance(self.modulus, ComplexLength):
            object.__setattr__(self, "modulus", ComplexLength(self.modulus))
        object.__setattr__(self, "value", reduce(self.value, self.modulus))

    def __add__(self, s) -> "TorsorPoint":
        return TorsorPoint(self.value + complex(s), self.modulus)

    def __sub__(self, other) -> complex:
        """Shortest representative of the difference."""
        if isinstance(other, TorsorPoint):
            other = other.value
        return shortest(self.value - complex(other), self.modulus)

    def distance(self, other: "TorsorPoint") -> float:
        return torsor_distance(self.value, other.value, self.modulus)


def shortest(z: complex, hl) -> complex:
    """The representative of z's class with the smallest modulus."""
    m = _modulus(hl)
    diff = reduce(z, m)
    reach = math.ceil(math.pi / m.real) + 2
    best, arg = math.inf, diff
    for k in range(-reach, reach + 1):
        d = diff - k * m
        d = complex(d.real, canonical_phase(d.imag))
        if abs(d) < best:
            best, arg = abs(d), d
    return arg


def tau_shift(v: TorsorPoint, s) -> TorsorPoint:
    return v + (1j * math.pi + complex(s))


@dataclass(frozen=True)
class Foot:
    point: TorsorPoint
    orientation: int
    pants_id: int

    def __post_init__(self):
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")


@dataclass(frozen=True)
class FootSet:
    feet: tuple

    def __post_init__(self):
        feet = tuple(self.feet)
        if feet:
            m = feet[0].point.modulus
            if any(f.point.modulus != m for f in feet):
                raise ValueError("feet must share one torsor modulus")
        object.__setattr__(self, "feet", feet)

    @property
    def modulus(self) -> ComplexLength:
        return self.feet[0].point.modulus

    def __len__(self):
        return len(self.feet)

    def signed(self, orientation: int) -> list[int]:
        return [i for i, f in enumerate(self.feet) if f.orientation == orientation]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["value_re", "value_im", "orientation", "pants_id"])
        for f in self.feet:
            w.writerow([repr(f.point.value.real), repr(f.point.value.imag), f.orientation, f.pants_id])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, hl) -> "FootSet":
        rows = csv.DictReader(io.StringIO(text))
        return cls(
            tuple(
                Foot(TorsorPoint(complex(float(r["value_re"]), float(r["value_im"])), hl), int(r["orientation"]), int(r["pants_id"]))
                for r in rows
            )
        )


@dataclass(frozen=True)
class TauSymmetric:
    s: complex
    jitter: float = 0.0


def _uniform_point(rng: np.random.Generator, m: complex) -> complex:
    x, y = rng.random(2)
    return complex(x * m.real, math.pi - _TWO_PI * y)


def sample_feet(n: int, hl, mode="uniform", seed: int = 0) -> FootSet:
    """Synthetic feet: uniform on the torsor, or in tau-partnered pairs.

    In the paired mode the first half are positive feet ``v`` and the second
    half their negative partners ``tau(v) + delta`` with ``|delta| < jitter``,
    in the same order. Pants ids are the positions in the list.
    """
    if n < 1:
        raise ValueError("need at least one foot")
    m = _modulus(hl)
    rng = np.random.default_rng(seed)
    if mode == "uniform":
        pts = [TorsorPoint(_uniform_point(rng, m), m) for _ in range(n)]
        signs = rng.choice([1, -1], size=n)
        return FootSet(tuple(Foot(p, int(o), i) for i, (p, o) in enumerate(zip(pts, signs))))
    if not isinstance(mode, TauSymmetric):
        raise ValueError(f"unknown sampling mode {mode!r}")
    if n % 2:
        raise OddCount(f"tau-symmetric sampling needs an even count, got {n}")
    half = n // 2
    pos = [TorsorPoint(_uniform_point(rng, m), m) for _ in range(half)]
    neg = []
    for v in pos:
        r = mode.jitter * math.sqrt(rng.random()) * 0.999
        phi = _TWO_PI * rng.random()
        neg.append(tau_shift(v, mode.s) + complex(r * math.cos(phi), r * math.sin(phi)))
    feet = [Foot(p, 1, i) for i, p in enumerate(pos)] + [Foot(p, -1, half + i) for i, p in enumerate(neg)]
    return FootSet(tuple(feet))


def _adjacency(fs: FootSet, s, tol: float) -> tuple[list[int], list[int], np.ndarray]:
    plus, minus = fs.signed(1), fs.signed(-1)
    adj = np.zeros((len(plus), len(minus)), dtype=bool)
    for a, i in enumerate(plus):
        target = tau_shift(fs.feet[i].point, s)
        for b, j in enumerate(minus):
            adj[a, b] = fs.feet[j].point.distance(target) < tol
    return plus, minus, adj


def _hall_witness(adj: np.ndarray, match_row: np.ndarray) -> list[int]:
    """Rows reachable from an unmatched row by alternating paths.

    Every neighbour of this set is matched back into it, so its
    neighbourhood is smaller than the set itself.
    """
    match_col = np.full(adj.shape[1], -1)
    for r, c in enumerate(match_row):
        if c >= 0:
            match_col[c] = r
    start = next(r for r in range(adj.shape[0]) if match_row[r] < 0)
    seen_rows, seen_cols, stack = {start}, set(), [start]
    while stack:
        r = stack.pop()
        for c in np.flatnonzero(adj[r]):
            if c in seen_cols:
                continue
            seen_cols.add(int(c))
            nxt = int(match_col[c])
            if nxt >= 0 and nxt not in seen_rows:
                seen_rows.add(nxt)
                stack.append(nxt)
    return sorted(seen_rows)


def _max_matching(adj: np.ndarray) -> np.ndarray:
    if adj.size == 0:
        return np.full(adj.shape[0], -1)
    return maximum_bipartite_matching(csr_matrix(adj.astype(np.int8)), perm_type="column")


def match_feet(fs: FootSet, s, tol: float) -> dict[int, int]:
    """Pair every positive foot with a negative foot near its tau image.

    Returns a map from positive foot index to negative foot index (indices
    into ``fs.feet``). Raises Infeasible carrying a deficient set of foot
    indices when no perfect matching exists.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    plus, minus, adj = _adjacency(fs, s, tol)
    rows = _max_matching(adj)
    if len(plus) == len(minus) and np.all(rows >= 0):
        return {plus[a]: minus[int(b)] for a, b in enumerate(rows)}
    if np.any(rows < 0):
        witness = [plus[a] for a in _hall_witness(adj, rows)]
        side = "positive"
    else:
        cols = _max_matching(adj.T)
        witness = [minus[b] for b in _hall_witness(adj.T, cols)]
        side = "negative"
    raise Infeasible(f"no perfect matching: {len(witness)} {side} feet see too few partners", witness=witness)


def hall_neighbourhood(fs: FootSet, s, tol: float, subset: Iterable[int]) -> set[int]:
    """Foot indices adjacent to ``subset`` (positive feet see negatives and back)."""
    out = set()
    for i in subset:
        f = fs.feet[i]
        for j, g in enumerate(fs.feet):
            if g.orientation == f.orientation:
                continue
            p, q = (f, g) if f.orientation == 1 else (g, f)
            if q.point.distance(tau_shift(p.point, s)) < tol:
                out.add(j)
    return out


# rectangles are (x, y, width, height) in torsor coordinates (Re, Im)
Rect = tuple


def _pieces(rect: Rect, m: complex) -> list[tuple[float, float, float, float]]:
    """Translates of ``rect`` clipped to the box [0, Re m) x [-pi, pi)."""
    x, y, w, h = rect
    if w <= 0 or h <= 0:
        return []
    out = []
    klo = math.floor((-w - x) / m.real)
    khi = math.ceil((m.real - x) / m.real)
    for k in range(klo, khi + 1):
        x0, y0 = x + k * m.real, y + k * m.imag
        if x0 + w <= 0 or x0 >= m.real:
            continue
        jlo = math.floor((-math.pi - (y0 + h)) / _TWO_PI)
        jhi = math.ceil((math.pi - y0) / _TWO_PI)
        for j in range(jlo, jhi + 1):
            y1 = y0 + j * _TWO_PI
            lo_x, hi_x = max(x0, 0.0), min(x0 + w, m.real)
            lo_y, hi_y = max(y1, -math.pi), min(y1 + h, math.pi)
            if lo_x < hi_x and lo_y < hi_y:
                out.append((lo_x, lo_y, hi_x, hi_y))
    return out


def union_area(rects: Sequence[Rect], hl) -> float:
    """Exact area of a union of rectangles on the torus."""
    m = _modulus(hl)
    boxes = [p for r in rects for p in _pieces(r, m)]
    if not boxes:
        return 0.0
    xs = np.unique([v for b in boxes for v in (b[0], b[2])])
    ys = np.unique([v for b in boxes for v in (b[1], b[3])])
    cover = np.zeros((len(xs) - 1, len(ys) - 1), dtype=bool)
    for x0, y0, x1, y1 in boxes:
        i0, i1 = np.searchsorted(xs, [x0, x1])
        j0, j1 = np.searchsorted(ys, [y0, y1])
        cover[i0:i1, j0:j1] = True
    return float(np.diff(xs) @ cover @ np.diff(ys))


def torus_area(hl) -> float:
    return _modulus(hl).real * _TWO_PI


@dataclass(frozen=True)
class GrowthResult:
    ratio: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.ratio > self.bound


def neighborhood_growth(rects: Sequence[Rect], eta: float, Rbar: float, hl) -> GrowthResult:
    """Area ratio of the box eta-neighbourhood of a rectangle union to the union.

    The neighbourhood of each rectangle is the rectangle widened by eta on
    every side. Raises NotApplicable when the neighbourhood covers more than
    half the torus.
    """
    if eta <= 0 or Rbar <= 0:
        raise ValueError("eta and Rbar must be positive")
    area = union_area(rects, hl)
    if area <= 0:
        raise ValueError("the rectangle union has zero area")
    grown = [(x - eta, y - eta, w + 2 * eta, h + 2 * eta) for x, y, w, h in rects]
    big = union_area(grown, hl)
    if big > 0.5 * torus_area(hl):
        raise NotApplicable("the neighbourhood covers more than half of the torus")
    return GrowthResult(big / area, 1.0 + eta / (2.0 * Rbar))


@dataclass(frozen=True)
class Gluing:
    plus: int
    minus: int
    curve: int
    shear: complex
    error: float


@dataclass(frozen=True)
class Assembly:
    """Oriented pants glued cuff to cuff.

    Cuff k of every pants lies on curve k. Each gluing joins a positively
    oriented pants to a negatively oriented one along one curve. ``targets``
    holds the ideal (half-length, shear) of each curve.
    """

    pants: tuple
    gluings: tuple
    targets: tuple = ()

    def validate(self, hl_tol: float = 1e-9) -> list[str]:
        problems = []
        seen = {}
        for g in self.gluings:
            for side in (g.plus, g.minus):
                key = (side, g.curve)
                seen[key] = seen.get(key, 0) + 1
            p, q = self.pants[g.plus], self.pants[g.minus]
            if p.orientation != 1 or q.orientation != -1:
                problems.append(f"gluing {g.plus}-{g.minus} on curve {g.curve} does not reverse orientation")
            if p.hl[g.curve].distance(q.hl[g.curve]) > hl_tol:
                problems.append(f"gluing {g.plus}-{g.minus} on curve {g.curve} joins unequal cuffs")
        for i in range(len(self.pants)):
            for k in range(3):
                count = seen.get((i, k), 0)
                if count != 1:
                    problems.append(f"pants {i} cuff {k} is glued {count} times")
        return problems

    def to_json(self) -> str:
        nodes = [dict(id=i, **p.to_json()) for i, p in enumerate(self.pants)]
        edges = [
            {
                "plus": g.plus,
                "minus": g.minus,
                "curve": g.curve,
                "shear": [g.shear.real, g.shear.imag],
                "error": g.error,
            }
            for g in self.gluings
        ]
        targets = [[h.real, h.imag, s.real, s.imag] for h, s in self.targets]
        return json.dumps({"nodes": nodes, "edges": edges, "targets": targets}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Assembly":
        from .pants_builder import Pants

        data = json.loads(text)
        pants = tuple(Pants.from_json(n) for n in sorted(data["nodes"], key=lambda n: n["id"]))
        gluings = tuple(
            Gluing(e["plus"], e["minus"], e["curve"], complex(*e["shear"]), e["error"]) for e in data["edges"]
        )
        targets = tuple((complex(t[0], t[1]), complex(t[2], t[3])) for t in data["targets"])
        return cls(pants, gluings, targets)


def double(pool: Sequence, shears: Sequence) -> list:
    """Each pants followed by an oppositely oriented mirror copy.

    The mirror sits at the tau image of every foot, so a lone pants glues
    to its own mirror with no error.
    """
    out = []
    for p in pool:
        mirror = [tau_shift(p.foot(k), shears[k]).value for k in range(3)]
        out.append(p.with_offsets(p.offsets, 1))
        out.append(p.with_offsets(mirror, -1))
    return out


def assemble(pants_pool: Sequence, shears: Sequence, tol: float, doubled: bool = False) -> Assembly:
    """Glue a pool of oriented pants along each of the three curves.

    With ``doubled`` the pool is first replaced by pants plus mirror copies.
    Every gluing error is |alpha1 - alpha2 - (s + i pi)| measured in the
    curve's torsor.
    """
    pool = double(pants_pool, shears) if doubled else list(pants_pool)
    gluings = []
    for k in range(3):
        hl = pool[0].hl[k]
        feet = FootSet(tuple(Foot(TorsorPoint(p.offsets[k], hl), p.orientation, i) for i, p in enumerate(pool)))
        try:
            pairs = match_feet(feet, shears[k], tol)
        except Infeasible as exc:
            raise Infeasible(f"curve {k}: {exc}", witness=exc.witness) from exc
        for a, b in sorted(pairs.items()):
            fa, fb = feet.feet[a].point, feet.feet[b].point
            miss = fb - tau_shift(fa, shears[k])
            shear = complex(shears[k]) + miss
            error = abs(miss)
            gluings.append(Gluing(a, b, k, shear, error))
    targets = tuple((pool[0].hl[k].value, complex(shears[k])) for k in range(3))
    asm = Assembly(tuple(pool), tuple(gluings), targets)
    problems = asm.validate()
    if problems:
        raise Infeasible("; ".join(problems))
    return asm
