import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_sl2
from hyperfold.errors import Elliptic, SharedEndpoint
from hyperfold.frame_actions import A, B
from hyperfold.moebius_core import (
    INF,
    ComplexLength,
    Geodesic,
    Isometry,
    axis,
    axis_chart,
    canonicalize,
    classify,
    complex_distance,
    half_length,
    is_inf,
    point_to_axis_distance,
)

finite = st.floats(-3, 3, allow_nan=False)


def test_identity_and_minus_identity():
    assert canonicalize(np.eye(2)).isclose(Isometry.identity(), 0.0)
    g = canonicalize(-np.eye(2))
    assert np.allclose(g.matrix, np.eye(2), atol=0)


def test_rescales_to_unit_determinant():
    e = math.e
    g = canonicalize(np.array([[2 * e, 0], [0, 2 / e]]))
    assert abs(g.det - 1) < 1e-15
    assert np.allclose(g.matrix, np.diag([e, 1 / e]), rtol=1e-15)


def test_singular_matrix_rejected():
    with pytest.raises(ValueError):
        canonicalize(np.array([[1, 2], [2, 4]]))


def test_half_length_of_diagonal():
    w = 1 + 1j * math.pi / 6
    hl = half_length(canonicalize(np.diag([cmath.exp(w), cmath.exp(-w)])))
    assert abs(hl.value - w) < 1e-14


def test_rotation_by_pi_is_elliptic():
    g = canonicalize(np.array([[0, -1], [1, 0]]))
    assert classify(g) == "elliptic"
    with pytest.raises(Elliptic):
        half_length(g)
    with pytest.raises(Elliptic):
        axis(g)


def test_half_length_conjugation_invariant(rng):
    target = 0.7 + 0.3j
    for _ in range(100):
        g = random_sl2(rng)
        h = g @ A(target) @ g.inverse()
        # eigenvalue oracle: the dominant root of the characteristic polynomial
        lam = np.linalg.eigvals(h.matrix)
        lam = lam[np.argmax(np.abs(lam))]
        assert abs(cmath.log(lam) - target) < 1e-9 or abs(cmath.log(-lam) - target) < 1e-9
        assert half_length(h).distance(target) < 1e-9


def test_axis_of_diagonal_translation():
    ax = axis(A(1))
    assert ax.p_rep == 0 and is_inf(ax.p_att)


def test_axis_moves_with_conjugation(rng):
    for _ in range(50):
        g = random_sl2(rng)
        ax = axis(g @ A(1) @ g.inverse())
        for got, want in ((ax.p_rep, g.act(0j)), (ax.p_att, g.act(INF))):
            if is_inf(want):
                assert is_inf(got) or abs(got) > 1e10
            else:
                assert abs(got - want) < 1e-10 * max(1.0, abs(want))


def test_complex_distance_examples():
    d = complex_distance(Geodesic(0j, INF), Geodesic(1 + 0j, 0.25 + 0j))
    assert abs(d.value - math.log(3)) < 1e-14
    d = complex_distance(Geodesic(0j, INF), Geodesic(-1 + 0j, 1 + 0j))
    assert d.distance(1j * math.pi / 2) < 1e-14
    with pytest.raises(SharedEndpoint):
        complex_distance(Geodesic(0j, INF), Geodesic(0j, 1 + 0j))


@settings(max_examples=60, deadline=None)
@given(finite, finite, finite, finite)
def test_complex_distance_invariant_under_isometries(x, y, a, b):
    g = A(x + 1j * y) @ B(a) @ A(b + 0.5j)
    g1, g2 = Geodesic(0j, INF), Geodesic(1 + 0j, -2 + 0.5j)
    d0 = complex_distance(g1, g2)
    d1 = complex_distance(g1.image(g), g2.image(g))
    assert d0.distance(d1) < 1e-8
    assert d0.length >= 0


def test_point_on_axis_has_zero_distance():
    assert point_to_axis_distance((0j, 1.0), A(1)) == 0
    assert point_to_axis_distance((0j, math.e), A(1)) == 0


def test_point_to_axis_matches_dense_sampling(rng):
    for _ in range(10):
        g = random_sl2(rng)
        p = (complex(*rng.normal(size=2)), float(rng.uniform(0.3, 3)))
        chart = axis_chart(axis(g)).inverse()

        def sampled(ts):
            z, t = chart.act_points(np.zeros(len(ts), dtype=complex), np.exp(ts))
            num = np.abs(z - p[0]) ** 2 + (t - p[1]) ** 2
            return 2 * np.arcsinh(np.sqrt(num / (4 * t * p[1])))

        grid = np.linspace(-20, 20, 10_000)
        best = grid[np.argmin(sampled(grid))]
        fine = np.linspace(best - 0.01, best + 0.01, 10_000)
        assert abs(point_to_axis_distance(p, g) - sampled(fine).min()) < 1e-6


def test_complex_length_reduces_phase():
    w = ComplexLength(1 + 3j * math.pi)
    assert abs(w.phase - math.pi) < 1e-14
    assert w.distance(1 - 1j * math.pi) < 1e-14
