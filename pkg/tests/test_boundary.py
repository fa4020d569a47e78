import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mis_lab.boundary import (SpeedSpec, boundary_coefficients, classify_level, distribute_tau,
                              empirical_h_boundary, h_boundary, h_boundary_limit, realize, thresholds_A)
from mis_lab.counting import MisSpec, mis_entropy
from mis_lab.errors import DegenerateRegion, TargetOutOfRange, ZeroTau
from mis_lab.subshift import SubshiftSpec


def test_classify_level_half_open():
    assert classify_level(Fraction(1, 2), 6) == 1
    assert classify_level(Fraction(1, 6), 6) == 2
    assert classify_level(Fraction(1, 7), 6) == 2
    assert classify_level(1, 6) == 1
    with pytest.raises(ZeroTau):
        classify_level(0, 6)


def test_level_one_gives_log_r(mis23):
    # above 1/P every chain meets the frame in a single point
    h = h_boundary(mis23, Fraction(1, 2))
    assert float(h.mid) == pytest.approx(math.log(2))


def test_tau_one_degenerate(mis23):
    with pytest.raises(DegenerateRegion):
        h_boundary(mis23, 1)


def test_tau_zero_is_entropy(mis23):
    assert h_boundary(mis23, 0).overlaps(mis_entropy(mis23, prec=64))


def test_continuity_at_band_edges(mis23):
    for k in range(1, 5):
        edge = Fraction(1, 6 ** k)
        a = h_boundary(mis23, edge, level=k)
        b = h_boundary(mis23, edge, level=k + 1)
        assert abs(float((a - b).mid)) < 1e-15


def test_thresholds_are_edge_values(mis23):
    for k in range(2, 7):
        edge = h_boundary(mis23, Fraction(1, 6 ** (k - 1)))
        assert abs(float((thresholds_A(mis23, k) - edge).mid)) < 1e-15


@given(st.fractions(min_value=Fraction(1, 10 ** 5), max_value=Fraction(99, 100), max_denominator=10 ** 6))
def test_closed_form_matches_general_limit(tau):
    mis = MisSpec.make((2, 3), SubshiftSpec.golden_mean())
    slopes = distribute_tau(tau, (2, 3))
    assert math.prod(slopes) == tau
    a, b = h_boundary(mis, tau), h_boundary_limit(mis, slopes)
    assert abs(float((a - b).mid)) < 1e-14


@given(st.fractions(min_value=Fraction(1, 10 ** 4), max_value=Fraction(99, 100), max_denominator=10 ** 5))
def test_boundary_between_entropy_and_log_r(tau):
    mis = MisSpec.make((2,), SubshiftSpec.golden_mean())
    h = float(h_boundary(mis, tau).mid)
    assert float(mis_entropy(mis).mid) - 1e-12 <= h <= math.log(2) + 1e-12


def test_coefficients_sum_for_full_shift():
    # with log|W_i| = i log r the combination must collapse to log r
    for ell in range(1, 6):
        for tau in (Fraction(1, 3 ** ell) + Fraction(1, 10 ** 6), Fraction(1, 3 ** (ell - 1))):
            if tau >= 1:
                continue
            c = boundary_coefficients(3, tau, ell)
            assert sum(i * v for i, v in c.items()) == 1


@given(st.fractions(min_value=0, max_value=1, max_denominator=1000))
def test_realize_round_trip(w):
    mis = MisSpec.make((2, 3), SubshiftSpec.golden_mean())
    lo, hi = mis_entropy(mis, prec=96), math.log(2)
    target = lo * (1 - w) + Fraction(hi) * w if w else lo
    res = realize(mis, target, 64)
    assert res.abs_err <= 1e-10


def test_realize_out_of_range(mis23):
    with pytest.raises(TargetOutOfRange):
        realize(mis23, Fraction(1, 10))
    with pytest.raises(TargetOutOfRange):
        realize(mis23, 1)


def test_empirical_approaches_formula(mis2):
    tau = Fraction(1, 3)
    emp = empirical_h_boundary(mis2, (2 ** 12,), SpeedSpec((tau,)))
    assert abs(float((emp - h_boundary(mis2, tau)).mid)) < 1e-3


def test_speed_spec_inner():
    s = SpeedSpec((Fraction(1, 2), Fraction(1, 3)))
    assert s.tau == Fraction(1, 6)
    assert s.inner((10, 10)) == (5, 3)
