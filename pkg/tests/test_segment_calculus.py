import cmath
import math

import pytest

from conftest import random_sl2
from hyperfold.errors import NotClosable
from hyperfold.frame_actions import A, Frame
from hyperfold.inefficiency import predict_closure
from hyperfold.segment_calculus import (
    FramedCycle,
    FramedSegment,
    TamenessParams,
    closed_length,
    cycle_holonomy,
    same_segment,
    segment_between,
    tameness_check,
    transform,
)
from hyperfold.verify_cli import tame_cycle


def random_segment(rng):
    w = complex(rng.uniform(0, 4), rng.uniform(-math.pi, math.pi))
    return FramedSegment(Frame(random_sl2(rng)), w)


@pytest.mark.parametrize("kind", ["reverse", "flip", "reverse_flip"])
def test_transforms_are_involutions(rng, kind):
    for _ in range(20):
        s = random_segment(rng)
        assert same_segment(transform(transform(s, kind), kind), s)


def test_reverse_keeps_complex_length(rng):
    for _ in range(100):
        s = random_segment(rng)
        r = transform(s, "reverse")
        # recompute from the frames alone
        back = segment_between(r.start, r.end)
        assert back.w.distance(s.w) < 1e-9


def test_unknown_transform(rng):
    with pytest.raises(ValueError):
        transform(random_segment(rng), "twist")


def test_single_segment_chain():
    w = 1.3 + 0.4j
    g = cycle_holonomy(FramedCycle((w,), ()))
    assert g.isclose(A(w / 2), 1e-15)


@pytest.mark.parametrize("l1,l3", [(1.0, 1.0), (2 + 0.5j, 0.7 - 1j)])
def test_right_angle_detours_cancel(l1, l3):
    # M A(l3) M = A(l3) with M = diag(1, -1), so the word collapses
    c = FramedCycle.continuous([2 * l1, 1j * math.pi, 2 * l3, 1j * math.pi])
    assert cycle_holonomy(c).isclose(A(l1 + l3), 1e-12)


def test_collapsed_zigzag_length():
    c = FramedCycle.continuous([2.0, 1j * math.pi, 2.0, 1j * math.pi])
    assert closed_length(c).distance(4.0) < 1e-12


def test_elliptic_cycle_not_closable():
    with pytest.raises(NotClosable):
        closed_length(FramedCycle((0.0,), ((math.pi / 2, 0.0),)))


def test_tame_cycle_close_to_prediction(rng):
    for _ in range(20):
        c = tame_cycle(rng, 8.0, 3, 2.0)
        predicted, _ = predict_closure(c)
        actual = closed_length(c)
        assert actual.distance(predicted) < 1e-5


def test_json_round_trip(rng):
    c = FramedCycle((1 + 1j, 2.0), ((0.3, 0.1), (1.0, -0.2)))
    again = FramedCycle.from_json(c.to_json())
    assert cycle_holonomy(again).isclose(cycle_holonomy(c), 1e-15)


def test_perfect_zigzag_is_zigzag_for_any_eps():
    c = FramedCycle.continuous([21.0, 1j * math.pi, 21.0, 1j * math.pi])
    for eps in (1e-12, 1e-3, 1.0):
        assert tameness_check(c, TamenessParams(L=10, eps=eps))["zigzag"]


def test_short_long_segment_fails():
    c = FramedCycle.continuous([19.9, 1j * math.pi, 21.0, 1j * math.pi])
    rep = tameness_check(c, TamenessParams(L=10, eps=1e-3))
    assert rep["long_enough"][0] is False
    assert rep["zigzag"] is False


def test_missing_parameters_report_none():
    c = FramedCycle.continuous([21.0, 1j * math.pi])
    rep = tameness_check(c, TamenessParams(L=10))
    assert rep["lt_tame"] is None and rep["ldd_tame"] is None and rep["zigzag"] is None


def test_tameness_matches_direct_evaluation(rng):
    for _ in range(50):
        L, d, delta = 5.0, float(rng.uniform(0.5, 2)), float(rng.uniform(0.5, 2))
        segs = []
        for k in range(6):
            if k % 2 == 0:
                segs.append(complex(rng.uniform(9, 12), rng.uniform(-3, 3)))
            else:
                segs.append(complex(rng.uniform(0.1, 4), rng.uniform(-3, 3)))
        c = FramedCycle.continuous(segs)
        rep = tameness_check(c, TamenessParams(L=L, d=d, delta=delta))
        ok = True
        for k, w in enumerate(segs):
            if k % 2 == 0:
                ok &= w.real > 2 * L
            else:
                ok &= w.real <= 2 * d
                ok &= abs(math.log(abs(cmath.sinh(w / 2)))) <= delta
        assert rep["ldd_tame"] == ok
