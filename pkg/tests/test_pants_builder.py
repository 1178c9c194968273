import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperfold.errors import CuffMismatch
from hyperfold.foot_matching import torsor_distance
from hyperfold.hexagon_trig import boundary_walk
from hyperfold.inefficiency import complex_inefficiency
from hyperfold.pants_builder import (
    Pants,
    SpinBase,
    SpinSpec,
    build_pants,
    goodness_check,
    ideal_shear,
    lattice_fit,
    regular_base,
    shears,
    sigma,
    spin_decomposition,
    spin_prediction,
)

REGULAR = math.log(2 + math.sqrt(3))
cuff = st.tuples(st.floats(0.2, 3), st.floats(-1.5, 1.5)).map(lambda t: complex(*t))


def test_regular_pants_seams():
    p = build_pants(REGULAR, REGULAR, REGULAR)
    for d in p.d:
        assert d.distance(REGULAR) < 1e-12


def test_real_cuffs_give_real_seams(rng):
    for _ in range(20):
        p = build_pants(*rng.uniform(0.2, 3, 3))
        assert all(abs(d.value.imag) < 1e-12 for d in p.d)


@settings(max_examples=200, deadline=None)
@given(cuff, cuff, cuff)
def test_hexagon_closes(h0, h1, h2):
    p = Pants((h0, h1, h2))
    g = boundary_walk(p.sides)
    m = g.matrix
    scale = math.exp(sum(abs(x.real) for x in p.sides) / 2)
    assert min(np.abs(m - np.eye(2)).max(), np.abs(m + np.eye(2)).max()) < 1e-9 * scale


def test_identical_pants_have_zero_shear():
    p = build_pants(1.0 + 0.2j, 1.3, 0.8 - 0.1j)
    for k in range(3):
        assert abs(shears(p, p, k).short.value) < 1e-12
        moved = shears(p, p, k, foot_offsets=(0, p.hl[k].value))
        assert moved.short.distance(type(moved.short)(0, p.hl[k])) < 1e-12


def test_long_shears_sum_to_twice_short(rng):
    for _ in range(100):
        hl = tuple(complex(rng.uniform(0.3, 3), rng.uniform(-1, 1)) for _ in range(3))
        p1 = Pants(hl, tuple(complex(*rng.normal(size=2)) for _ in range(3)))
        p2 = Pants(hl, tuple(complex(*rng.normal(size=2)) for _ in range(3)), -1)
        for k in range(3):
            r = shears(p1, p2, k)
            t1, t2 = r.long
            # direct torsor arithmetic
            assert torsor_distance(t1.value + t2.value, 2 * r.short.value, 2 * hl[k]) < 1e-10


def test_unequal_cuffs_rejected():
    with pytest.raises(CuffMismatch):
        shears(build_pants(1, 1, 1), build_pants(1.1, 1, 1), 0)


def test_ideal_shear_examples(rng):
    R, m = 12.0, 0.4
    assert ideal_shear(R, R, R, 0).distance(R) < 1e-12
    s = ideal_shear(R - m, R, R + m, 0).value
    assert R - 3 * m < s.real < R + 3 * m
    for _ in range(20):
        hl = [complex(rng.uniform(1, 5), rng.uniform(-1, 1)) for _ in range(3)]
        total = sum(ideal_shear(*hl, j).value for j in range(3))
        assert abs(total - sum(hl)) < 1e-12


def test_pants_json_round_trip():
    p = Pants((1 + 0.1j, 2.0, 1.5), (0.1j, 0.2, 0.3 + 0.3j), -1)
    q = Pants.from_json(p.to_json())
    assert q.orientation == -1
    assert all(a.distance(b) < 1e-15 for a, b in zip(p.hl, q.hl))
    assert q.offsets == p.offsets


def test_spin_residual_small_for_large_windings():
    base = regular_base()
    for n in (20, 25):
        spec = SpinSpec(base, (n, n + 1, n + 3))
        for i in range(3):
            assert spin_prediction(spec, i)[2] < math.sqrt(2) * 1e-3


def test_spin_residual_decays():
    base = regular_base()
    res = [spin_prediction(SpinSpec(base, (n, n, n)), 0)[2] for n in (1, 2, 3, 4, 5, 6)]
    assert all(b < a for a, b in zip(res, res[1:]))


def test_right_angle_arcs_need_no_correction():
    base = SpinBase((2.0, 2.0, 2.0), (0.5,) * 3, (0.4,) * 3, (1j * math.pi,) * 3, (1j * math.pi,) * 3)
    assert abs(complex_inefficiency(1j * math.pi / 2)) < 1e-15
    assert abs(sigma(base, 0) - 0.9) < 1e-12


def test_lattice_fit_exact_point():
    fit = lattice_fit((2, 2, 2), (0, 0, 0), 40)
    assert fit.n[0] == fit.n[1] == fit.n[2]
    assert fit.errors == (0.0, 0.0, 0.0)
    assert fit.R_prime == 2 * fit.n[0]
    assert fit.R_prime > 80


def test_lattice_fit_errors_below_m1():
    lengths = (2.0, 2.1, 2.3)
    fit = lattice_fit(lengths, (0, 0, 0), 40)
    assert abs(fit.m1 - 1.15) < 1e-8
    assert max(fit.errors) < 1.15
    # brute force: some winding triple in [1, 200]^3 fits a common value above 80
    n = np.arange(1, 201)
    x = [n * l for l in lengths]
    best = math.inf
    for a in x[0][x[0] > 80]:
        near = [v[np.argmin(np.abs(v - a))] for v in x[1:]]
        vals = [a] + near
        best = min(best, (max(vals) - min(vals)) / 2)
    assert best < 1.15
    for k, l in zip(fit.n, lengths):
        assert 1 <= k <= 200


def test_lattice_fit_rejects_bad_input():
    with pytest.raises(ValueError):
        lattice_fit((2, -1, 2), (0, 0, 0), 40)
    with pytest.raises(ValueError):
        lattice_fit((2, 2, 2), (0, 0, 0), 0)


def test_spun_half_lengths_near_target():
    spun = spin_decomposition(regular_base(), 4.0)
    for h in spun.hl:
        assert abs(h.value.real - spun.fit.R) < spun.fit.m
    assert spun.report["pass"]
    assert max(spun.residuals) < math.sqrt(2) * 1e-3


def test_goodness_examples():
    R, m = 20.0, 1.0
    band = (R - 4 * m, R + 4 * m)
    good = goodness_check([R] * 3, [R] * 3, R, 0.1, band)
    assert good["pass"] and all(c["hl_margin"] > 0 and c["shear_margin"] > 0 for c in good["cuffs"])
    bad = goodness_check([R] * 3, [R, band[1] + 0.1, R], R, 0.1, band)
    assert not bad["pass"]
    assert [c["pass"] for c in bad["cuffs"]] == [True, False, True]
