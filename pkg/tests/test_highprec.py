import math
from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given, strategies as st

from mis_lab.highprec import HighPrecReal, hp_sum, mpfr_to_fraction

fracs = st.fractions(min_value=-1000, max_value=1000, max_denominator=10 ** 6)


def test_exact_contains_value():
    x = HighPrecReal.exact(Fraction(1, 3), 64)
    assert x.contains(Fraction(1, 3))
    assert x.lo < x.hi


def test_log_int_encloses_float_log():
    x = HighPrecReal.log_int(7, 128)
    with gmpy2.context(gmpy2.get_context(), precision=300):
        ref = gmpy2.log(7)
    assert x.contains(mpfr_to_fraction(ref))
    assert abs(float(x) - math.log(7)) < 1e-15
    assert x.width < 2 ** -120


def test_log_of_one_is_exact_zero():
    x = HighPrecReal.log_int(1, 64)
    assert x.lo == x.hi == 0


@given(fracs, fracs)
def test_arithmetic_encloses_exact_result(a, b):
    x, y = HighPrecReal.exact(a, 64), HighPrecReal.exact(b, 64)
    assert (x + y).contains(a + b)
    assert (x - y).contains(a - b)
    assert (x * y).contains(a * b)
    if b != 0:
        assert (x / y).contains(a / b)


@given(fracs)
def test_negation_keeps_enclosure(a):
    x = HighPrecReal.exact(a, 200) * HighPrecReal.exact(Fraction(1, 7), 200)
    assert (-x).contains(-a / 7)
    assert abs(x).contains(abs(a) / 7)


def test_division_by_interval_containing_zero():
    with pytest.raises(ZeroDivisionError):
        HighPrecReal.exact(1, 64) / HighPrecReal.from_bounds(-1, 1, 64)


def test_to_decimal_is_deterministic():
    x = HighPrecReal.log_int(2, 128)
    assert x.to_decimal(15) == x.to_decimal(15)
    assert x.to_decimal(15).startswith("0.69314718055994")


def test_hp_sum_and_ordering():
    s = hp_sum([Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)], 64)
    assert s.contains(1)
    assert HighPrecReal.exact(1, 64).certainly_lt(HighPrecReal.exact(2, 64))
    assert not s.certainly_lt(1)


def test_mpfr_to_fraction_round_trip():
    v = gmpy2.mpfr("0.375")
    assert mpfr_to_fraction(v) == Fraction(3, 8)
