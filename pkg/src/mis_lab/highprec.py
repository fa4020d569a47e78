"""Certified arbitrary-precision reals as closed intervals of MPFR floats.

Every operation rounds the lower endpoint down and the upper endpoint up,
so the true value is always bracketed.  gmpy2 contexts are thread-local,
which keeps the arithmetic free of shared state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Rational

import gmpy2
from gmpy2 import mpfr, mpq, mpz

DOWN = gmpy2.RoundDown
UP = gmpy2.RoundUp


def _ctx(prec: int, rnd):
    return gmpy2.context(gmpy2.get_context(), precision=prec, round=rnd)


def _to_mpfr(x, prec: int, rnd) -> mpfr:
    with _ctx(prec, rnd):
        if isinstance(x, Integral):
            return mpfr(mpz(int(x)))
        if isinstance(x, Rational):
            return mpfr(mpq(int(x.numerator), int(x.denominator)))
        return mpfr(x)


@dataclass(frozen=True)
class HighPrecReal:
    """A real number known to lie in ``[lo, hi]``, computed at ``prec`` bits."""

    lo: mpfr
    hi: mpfr
    prec: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    # construction

    @classmethod
    def exact(cls, value, prec: int = 64) -> "HighPrecReal":
        """Enclose an int, Fraction or decimal string."""
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, float):
            value = Fraction(value)
        return cls(_to_mpfr(value, prec, DOWN), _to_mpfr(value, prec, UP), prec)

    @classmethod
    def from_bounds(cls, lo, hi, prec: int) -> "HighPrecReal":
        return cls(_to_mpfr(lo, prec, DOWN), _to_mpfr(hi, prec, UP), prec)

    @classmethod
    def log_int(cls, n: int, prec: int) -> "HighPrecReal":
        """Natural log of a positive integer."""
        if n <= 0:
            raise ValueError("log of non-positive integer")
        if n == 1:
            zero = mpfr(0)
            return cls(zero, zero, prec)
        with _ctx(prec, DOWN):
            lo = gmpy2.log(mpz(n))
        with _ctx(prec, UP):
            hi = gmpy2.log(mpz(n))
        return cls(lo, hi, prec)

    # views

    @property
    def mid(self) -> mpfr:
        with _ctx(self.prec + 2, gmpy2.RoundToNearest):
            return (self.lo + self.hi) / 2

    @property
    def rad(self) -> mpfr:
        """Absolute error bound of ``mid``."""
        with _ctx(64, UP):
            return (self.hi - self.lo) / 2

    @property
    def width(self) -> mpfr:
        with _ctx(64, UP):
            return self.hi - self.lo

    def rel_error(self) -> float:
        m = abs(self.mid)
        if m == 0:
            return 0.0 if self.width == 0 else math.inf
        return float(self.rad / m)

    def __float__(self) -> float:
        return float(self.mid)

    def contains(self, x) -> bool:
        if isinstance(x, HighPrecReal):
            return self.lo <= x.lo and x.hi <= self.hi
        lo = _to_mpfr(x, self.prec + 64, DOWN) if not isinstance(x, mpfr) else x
        hi = _to_mpfr(x, self.prec + 64, UP) if not isinstance(x, mpfr) else x
        return self.lo <= lo and hi <= self.hi

    def overlaps(self, other: "HighPrecReal") -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def certainly_lt(self, other) -> bool:
        other = _coerce(other, self.prec)
        return self.hi < other.lo

    def certainly_le(self, other) -> bool:
        other = _coerce(other, self.prec)
        return self.hi <= other.lo

    def to_decimal(self, digits: int = 20) -> str:
        """Midpoint as a fixed-format decimal string (deterministic)."""
        m = self.mid
        if m == 0:
            return "0"
        return format(m, f".{digits}g")

    def __repr__(self) -> str:
        return f"HighPrecReal({self.to_decimal(17)} ± {format(self.rad, '.3g')}, prec={self.prec})"

    def with_prec(self, prec: int) -> "HighPrecReal":
        return HighPrecReal(_to_mpfr(self.lo, prec, DOWN), _to_mpfr(self.hi, prec, UP), prec)

    # arithmetic

    def _exact_prec(self) -> int:
        return max(self.prec, self.lo.precision, self.hi.precision)

    def __neg__(self) -> "HighPrecReal":
        # negation is exact, but only if the context keeps every bit
        with _ctx(self._exact_prec(), DOWN):
            lo, hi = -self.hi, -self.lo
        return HighPrecReal(lo, hi, self.prec)

    def __abs__(self) -> "HighPrecReal":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        with _ctx(self._exact_prec(), UP):
            hi = max(-self.lo, self.hi)
        return HighPrecReal(mpfr(0), hi, self.prec)

    def __add__(self, other) -> "HighPrecReal":
        other = _coerce(other, self.prec)
        prec = max(self.prec, other.prec)
        with _ctx(prec, DOWN):
            lo = self.lo + other.lo
        with _ctx(prec, UP):
            hi = self.hi + other.hi
        return HighPrecReal(lo, hi, prec)

    __radd__ = __add__

    def __sub__(self, other) -> "HighPrecReal":
        return self + (-_coerce(other, self.prec))

    def __rsub__(self, other) -> "HighPrecReal":
        return _coerce(other, self.prec) + (-self)

    def __mul__(self, other) -> "HighPrecReal":
        other = _coerce(other, self.prec)
        prec = max(self.prec, other.prec)
        ends = [(self.lo, other.lo), (self.lo, other.hi), (self.hi, other.lo), (self.hi, other.hi)]
        with _ctx(prec, DOWN):
            lo = min(a * b for a, b in ends)
        with _ctx(prec, UP):
            hi = max(a * b for a, b in ends)
        return HighPrecReal(lo, hi, prec)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "HighPrecReal":
        other = _coerce(other, self.prec)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("divisor interval contains zero")
        prec = max(self.prec, other.prec)
        ends = [(self.lo, other.lo), (self.lo, other.hi), (self.hi, other.lo), (self.hi, other.hi)]
        with _ctx(prec, DOWN):
            lo = min(a / b for a, b in ends)
        with _ctx(prec, UP):
            hi = max(a / b for a, b in ends)
        return HighPrecReal(lo, hi, prec)

    def __rtruediv__(self, other) -> "HighPrecReal":
        return _coerce(other, self.prec) / self

    def log(self) -> "HighPrecReal":
        if self.lo <= 0:
            raise ValueError("log of interval touching zero")
        with _ctx(self.prec, DOWN):
            lo = gmpy2.log(self.lo)
        with _ctx(self.prec, UP):
            hi = gmpy2.log(self.hi)
        return HighPrecReal(lo, hi, self.prec)

    def hull(self, other: "HighPrecReal") -> "HighPrecReal":
        return HighPrecReal(min(self.lo, other.lo), max(self.hi, other.hi), max(self.prec, other.prec))


def _coerce(x, prec: int) -> HighPrecReal:
    if isinstance(x, HighPrecReal):
        return x
    if isinstance(x, (Integral, Rational, float, str)):
        return HighPrecReal.exact(x, prec)
    if isinstance(x, mpfr):
        return HighPrecReal(x, x, prec)
    raise TypeError(f"cannot use {type(x).__name__} as HighPrecReal")


def hp_sum(terms, prec: int) -> HighPrecReal:
    total = HighPrecReal.exact(0, prec)
    for t in terms:
        total = total + t
    return total


def mpfr_to_fraction(x) -> Fraction:
    """Exact rational value of an MPFR float."""
    q = mpq(x)
    return Fraction(int(q.numerator), int(q.denominator))
