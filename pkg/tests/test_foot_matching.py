import itertools
import math

import numpy as np
import pytest

from hyperfold.errors import Infeasible, NotApplicable, OddCount
from hyperfold.foot_matching import (
    Assembly,
    Foot,
    FootSet,
    TauSymmetric,
    TorsorPoint,
    assemble,
    match_feet,
    neighborhood_growth,
    sample_feet,
    tau_shift,
    torsor_distance,
    union_area,
)
from hyperfold.pants_builder import Pants, ideal_shear, pool_from_feet


def lattice_distance(z, w, m, reach=None):
    """Brute-force distance in C / (m Z + 2 pi i Z)."""
    d = complex(z) - complex(w)
    if reach is None:
        reach = int(abs(d.real) / m.real) + 4
    k = np.arange(-reach, reach + 1)
    shifted = d - k * m
    jr = int((abs(shifted.imag).max() + 1) / (2 * math.pi)) + 2
    j = np.arange(-jr, jr + 1)
    return float(np.abs(shifted[:, None] - 2j * math.pi * j[None, :]).min())


def test_torsor_distance_matches_lattice_search(rng):
    for _ in range(300):
        m = complex(rng.uniform(0.3, 4), rng.uniform(-3, 3))
        z, w = (complex(*rng.normal(scale=5, size=2)) for _ in range(2))
        assert abs(torsor_distance(z, w, m) - lattice_distance(z, w, m)) < 1e-10


def test_tau_with_minus_i_pi_is_identity(rng):
    v = TorsorPoint(complex(*rng.normal(size=2)), 2.0)
    assert tau_shift(v, -1j * math.pi).distance(v) < 1e-12


def test_tau_twice_shifts_by_twice_s():
    v = TorsorPoint(0.3 + 1j, 2.5)
    s = 0.7
    assert tau_shift(tau_shift(v, s), s).distance(v + 2 * s) < 1e-12


def test_tau_displacement(rng):
    for _ in range(100):
        m = complex(rng.uniform(0.5, 3), rng.uniform(-1, 1))
        v = TorsorPoint(complex(*rng.normal(size=2)), m)
        s = complex(*rng.normal(size=2))
        got = tau_shift(v, s).distance(v)
        assert abs(got - lattice_distance(1j * math.pi + s, 0, m)) < 1e-10


def test_tau_pair_without_jitter_matches_exactly():
    fs = sample_feet(2, 1.5, TauSymmetric(0.4 + 0.1j, 0.0), seed=3)
    assert match_feet(fs, 0.4 + 0.1j, 1e-9) == {0: 1}
    assert fs.feet[1].point.distance(tau_shift(fs.feet[0].point, 0.4 + 0.1j)) < 1e-12


def test_sampling_is_deterministic():
    a = sample_feet(50, 2.0, "uniform", seed=11)
    b = sample_feet(50, 2.0, "uniform", seed=11)
    assert a.to_csv() == b.to_csv()


def test_csv_round_trip():
    fs = sample_feet(10, 2.0 + 0.5j, TauSymmetric(0.2, 1e-3), seed=1)
    back = FootSet.from_csv(fs.to_csv(), 2.0 + 0.5j)
    assert back == fs


def test_odd_count_rejected():
    with pytest.raises(OddCount):
        sample_feet(5, 2.0, TauSymmetric(0.0), seed=0)


def test_uniform_density_per_quarter():
    m = 3.0
    fs = sample_feet(10_000, m, "uniform", seed=5)
    pts = np.array([f.point.value for f in fs.feet])
    quarters = np.histogram2d(pts.real, pts.imag, bins=2, range=[[0, m], [-math.pi, math.pi]])[0].ravel()
    assert np.all(np.abs(quarters / 10_000 - 0.25) < 0.05 * 0.25)


def test_tau_symmetric_sets_match(rng):
    for seed in range(30):
        s = complex(rng.uniform(0, 2), rng.uniform(-3, 3))
        fs = sample_feet(40, 2.0, TauSymmetric(s, 1e-4), seed=seed)
        pairs = match_feet(fs, s, 1e-3)
        assert len(pairs) == 20
        for a, b in pairs.items():
            assert fs.feet[b].point.distance(tau_shift(fs.feet[a].point, s)) < 1e-3


def test_isolated_foot_has_singleton_witness():
    m, s = 2.0, 0.3
    plus = [TorsorPoint(0.1, m), TorsorPoint(1.0 + 1j, m)]
    minus = [tau_shift(plus[0], s), tau_shift(plus[0], s) + 0.001]
    fs = FootSet(tuple(Foot(p, 1, i) for i, p in enumerate(plus)) + tuple(Foot(p, -1, 2 + i) for i, p in enumerate(minus)))
    with pytest.raises(Infeasible) as exc:
        match_feet(fs, s, 0.01)
    assert exc.value.witness == [1]


def hall_feasible(fs, s, tol):
    """Exhaustive Hall check with an independently computed adjacency."""
    m = fs.modulus.value
    plus = [f for f in fs.feet if f.orientation == 1]
    minus = [f for f in fs.feet if f.orientation == -1]
    if len(plus) != len(minus):
        return False
    adj = [
        {j for j, g in enumerate(minus) if lattice_distance(g.point.value, f.point.value + 1j * math.pi + s, m, 3) < tol}
        for f in plus
    ]
    for size in range(1, len(plus) + 1):
        for subset in itertools.combinations(range(len(plus)), size):
            if len(set().union(*(adj[i] for i in subset))) < size:
                return False
    return True


def test_feasibility_agrees_with_hall_oracle(rng):
    outcomes = set()
    for trial in range(150):
        n = int(rng.integers(1, 7)) * 2
        s = complex(rng.uniform(0, 1), rng.uniform(-3, 3))
        fs = sample_feet(n, 1.0, TauSymmetric(s, 0.6), seed=trial)
        expected = hall_feasible(fs, s, 0.5)
        try:
            match_feet(fs, s, 0.5)
            got = True
        except Infeasible as exc:
            got = False
            assert exc.witness
        assert got == expected
        outcomes.add(got)
    assert outcomes == {True, False}


def test_single_rectangle_growth():
    a, b, eta = 1.0, 1.0, 0.1
    g = neighborhood_growth([(0.5, 0.0, a, b)], eta, 20.0, 5.0)
    assert abs(g.ratio - (a + 2 * eta) * (b + 2 * eta) / (a * b)) < 1e-12
    assert abs(g.ratio - 1.44) < 1e-12 and abs(g.bound - 1.0025) < 1e-15
    assert g.holds


def test_growth_gate():
    with pytest.raises(NotApplicable):
        neighborhood_growth([(0.0, -math.pi, 2.0, 2 * math.pi)], 0.1, 20.0, 3.0)


def test_union_area_wraps_around():
    m = 2.0 + 0.5j
    # a rectangle sticking out of the fundamental box keeps its area
    assert abs(union_area([(1.5, 2.5, 1.0, 2.0)], m) - 2.0) < 1e-12
    assert abs(union_area([(0, 0, 1, 1), (0.5, 0.5, 1, 1)], m) - 1.75) < 1e-12


def regular_setup():
    hl = (3.0, 3.0, 3.0)
    sh = tuple(ideal_shear(*hl, j).value for j in range(3))
    return hl, sh


def test_lone_pants_glues_to_mirror():
    hl, sh = regular_setup()
    asm = assemble([Pants(hl, (0.2, 0.5j, 1.0))], sh, 1e-6, doubled=True)
    assert len(asm.pants) == 2
    assert all(g.error < 1e-12 for g in asm.gluings)


def test_tau_pools_close_up():
    hl, sh = regular_setup()
    footsets = [sample_feet(16, hl[k], TauSymmetric(sh[k], 1e-4), seed=k) for k in range(3)]
    asm = assemble(pool_from_feet(hl, footsets), sh, 1e-2)
    degree = {}
    for g in asm.gluings:
        for side in (g.plus, g.minus):
            degree[(side, g.curve)] = degree.get((side, g.curve), 0) + 1
    assert degree == {(i, k): 1 for i in range(16) for k in range(3)}
    assert max(g.error for g in asm.gluings) < 1e-2
    again = Assembly.from_json(asm.to_json())
    assert again.to_json() == asm.to_json()


def test_unmatchable_pool_names_curve():
    hl, sh = regular_setup()
    footsets = [sample_feet(4, hl[k], TauSymmetric(sh[k], 1e-4), seed=k) for k in range(3)]
    pool = pool_from_feet(hl, footsets)
    p = pool[3]
    pool[3] = p.with_offsets((p.offsets[0], p.offsets[1] + 1.0, p.offsets[2]))
    with pytest.raises(Infeasible, match="curve 1"):
        assemble(pool, sh, 1e-2)
