"""Surface corrections log|patterns on box| - volume * h without cancellation.

Writing K_ell = vol (P-1)^2 / P^(ell+1) + R_ell, the correction is

    sum_{ell <= L} R_ell log|W_ell|  -  vol sum_{ell > L} (P-1)^2/P^(ell+1) log|W_ell|

where L is the longest chain in the box.  The residuals R_ell are exact
rationals of size O(sum of sides), and the tail is a fast geometric series
with a certified remainder, so neither huge term is ever formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .counting import MisSpec, counts_upto, entropy_tail_bound
from .errors import InvalidSpec, NotMixing, PrecisionBudgetExceeded
from .highprec import HighPrecReal
from .lattice import Box, hist_K, ilog
from .subshift import ShiftKind, entropy_rate_1d

DEFAULT_PREC_BUDGET = 1 << 17


def auto_prec(volume: int) -> int:
    return 64 + 4 * max(1, (volume - 1).bit_length())


def chain_depth(box: Box, p: Sequence[int]) -> int:
    """r_n: the largest e with p_j^e <= N_j on every axis."""
    return min(ilog(n, q) for n, q in zip(box.sides, p))


@dataclass(frozen=True)
class CorrectionSeries:
    box: Box
    r_n: int
    level_terms: tuple  # (ell, R_ell as Fraction, log|W_ell|)
    tail: HighPrecReal
    total: HighPrecReal
    prec: int


def _log_count(words, ell: int, prec: int, omega) -> HighPrecReal:
    if omega.kind is ShiftKind.FULL:
        return HighPrecReal.log_int(omega.alphabet_size, prec) * ell
    return HighPrecReal.log_int(words[ell], prec)


def _bits(x: Fraction) -> int:
    if x == 0:
        return 0
    return max(1, abs(x.numerator).bit_length() - x.denominator.bit_length() + 1)


def surface_correction(mis: MisSpec, box: Box, prec: int | None = None) -> CorrectionSeries:
    """Correction with certified absolute error at most 2^-(prec/2)."""
    if box.d != mis.d:
        raise InvalidSpec("box and system differ in dimension")
    vol = box.volume
    prec = max(prec or 0, auto_prec(vol))
    P = mis.P
    r_n = chain_depth(box, mis.multipliers.p)
    L = r_n + 1
    K = hist_K(box, mis.multipliers)
    target = prec // 2 + 2
    r = mis.omega.alphabet_size
    log_r_upper = Fraction(math.ceil(math.log(r) * 1024) + 1, 1024)

    # how far the tail must run before its remainder is negligible
    M = L
    while r > 1 and vol * entropy_tail_bound(mis, M) * log_r_upper > Fraction(1, 1 << (target + 2)):
        M += 1
    words = counts_upto(mis.omega, M)
    n_terms = M + 2
    guard = n_terms.bit_length() + 8

    level_terms = []
    total = HighPrecReal.exact(0, prec)
    for ell in range(1, L + 1):
        R = K[ell] - Fraction(vol * (P - 1) ** 2, P ** (ell + 1))
        w = _bits(R) + ell.bit_length() + target + guard
        g = _log_count(words, ell, w, mis.omega)
        level_terms.append((ell, R, g))
        if R:
            total = total + g * HighPrecReal.exact(R, w)

    tail = HighPrecReal.exact(0, prec)
    for ell in range(L + 1, M + 1):
        c = Fraction(vol * (P - 1) ** 2, P ** (ell + 1))
        w = _bits(c) + ell.bit_length() + target + guard
        g = _log_count(words, ell, w, mis.omega)
        tail = tail - g * HighPrecReal.exact(c, w)
    if r > 1:
        rem = HighPrecReal.log_int(r, 64) * (vol * entropy_tail_bound(mis, M))
        tail = tail + HighPrecReal.from_bounds(-rem.hi, 0, prec)
    total = total + tail
    return CorrectionSeries(box, r_n, tuple(level_terms), tail, total, prec)


def naive_correction(mis: MisSpec, box: Box, prec: int) -> HighPrecReal:
    """log count - vol * h formed directly; only sensible at high precision and small boxes."""
    from .counting import log_pattern_count, mis_entropy

    vol = box.volume
    work = prec + 2 * vol.bit_length()
    return log_pattern_count(mis, box, work) - mis_entropy(mis, prec=work) * vol


def leading_tail_estimate(mis: MisSpec, box: Box, count_shift: int = 0, prec: int = 128) -> HighPrecReal:
    """-(1 - 1/P)^2 sum_{i > r_n} vol / P^(i-1) * log|W_(i + count_shift)|.

    With count_shift = 0 this is the leading tail of the correction.  The
    shifted variant is kept as a diagnostic for tabulated values.
    """
    vol = box.volume
    P = mis.P
    r_n = chain_depth(box, mis.multipliers.p)
    r = mis.omega.alphabet_size
    M = r_n + 1
    work = prec + 2 * vol.bit_length() + 16
    while vol * entropy_tail_bound(mis, M - count_shift) * 4 > Fraction(1, 1 << prec):
        M += 1
    words = counts_upto(mis.omega, M + count_shift)
    total = HighPrecReal.exact(0, work)
    for i in range(r_n + 1, M + 1):
        c = Fraction(vol * (P - 1) ** 2, P ** (i + 1))
        total = total - _log_count(words, i + count_shift, work, mis.omega) * c
    return total.with_prec(prec)


# sequences of boxes

@dataclass(frozen=True)
class PowerPair:
    """x_n^(j) = p_j^(k_j n)."""

    exponents: tuple[int, ...]

    def sides(self, mis: MisSpec, n: int) -> tuple[int, ...]:
        if len(self.exponents) != mis.d:
            raise InvalidSpec("one exponent per axis is needed")
        return tuple(q ** (k * n) for q, k in zip(mis.multipliers.p, self.exponents))


@dataclass(frozen=True)
class PowerOffset:
    """x_n = y_n = p^n + sign * k."""

    p: int
    k: int
    sign: int = -1

    def __post_init__(self):
        if self.sign not in (-1, 1):
            raise InvalidSpec("sign must be +1 or -1")
        if not 1 <= self.k <= self.p:
            raise InvalidSpec("offset needs 1 <= k <= p")

    def sides(self, mis: MisSpec, n: int) -> tuple[int, ...]:
        x = self.p ** n + self.sign * self.k
        if x < 1:
            raise InvalidSpec(f"side {x} is not positive at n={n}")
        return (x,) * mis.d


def scale_for(mis: MisSpec, box: Box) -> Fraction:
    """r_n * vol / P^r_n, the size of the leading correction."""
    r_n = chain_depth(box, mis.multipliers.p)
    return Fraction(r_n * box.volume, mis.P ** r_n)


def predicted_correction(mis: MisSpec, box: Box, prec: int = 64) -> HighPrecReal:
    """-(1 - 1/P) log(lambda) r_n vol / P^r_n for a mixing system."""
    omega = mis.omega
    if omega.kind is ShiftKind.SFT and not omega.is_primitive:
        raise NotMixing("slope prediction needs a mixing system")
    rate = entropy_rate_1d(omega, prec)
    return -(rate * (1 - Fraction(1, mis.P)) * scale_for(mis, box))


def predicted_correction_power(mis: MisSpec, exponents: Sequence[int], n: int, prec: int = 64) -> HighPrecReal:
    box = Box(PowerPair(tuple(exponents)).sides(mis, n))
    return predicted_correction(mis, box, prec)


@dataclass
class TableRow:
    n: int
    sides: tuple
    correction: HighPrecReal
    scaled: HighPrecReal
    predicted: HighPrecReal | None
    deviation: HighPrecReal | None


def convergence_table(mis: MisSpec, seq, n_values: Sequence[int], prec: int | str = "auto",
                      prec_budget: int = DEFAULT_PREC_BUDGET) -> list[TableRow]:
    """Rows (n, sides, correction, correction/scale, predicted slope, |difference|)."""
    rows = []
    for n in n_values:
        box = Box(seq.sides(mis, n))
        want = auto_prec(box.volume) if prec == "auto" else int(prec)
        if want > prec_budget:
            raise PrecisionBudgetExceeded(f"n={n} needs {want} bits (budget {prec_budget})")
        series = surface_correction(mis, box, want)
        if isinstance(seq, PowerPair):
            scale = scale_for(mis, box)
            scaled = series.total / scale
            slope = -(entropy_rate_1d(mis.omega, 64) * (1 - Fraction(1, mis.P)))
            deviation = abs(scaled - slope)
        else:
            scaled = series.total / n
            slope = deviation = None
        rows.append(TableRow(n, box.sides, series.total, scaled, slope, deviation))
    return rows


@dataclass
class OffsetBound:
    C: float
    middle_max: float
    last_max: float
    stable: bool
    ratios: list = field(default_factory=list)


def bounded_correction_offset(mis: MisSpec, p: int, k: int, n_range: Sequence[int], sign: int = -1) -> OffsetBound:
    """Fit |correction(n)| <= C n along x = y = p^n + sign k and test that C settles.

    ``stable`` means the largest ratio over the last third of the range is
    within 10% of the largest over the middle third.
    """
    if mis.d != 2 or mis.multipliers.p != (p, p):
        raise InvalidSpec("offset sequences need d = 2 and p_1 = p_2 = p")
    seq = PowerOffset(p, k, sign)
    ns = list(n_range)
    ratios = []
    for n in ns:
        total = surface_correction(mis, Box(seq.sides(mis, n))).total
        ratios.append(abs(float(total.mid)) / n)
    third = len(ns) // 3
    middle = max(ratios[third:2 * third]) if third else max(ratios)
    last = max(ratios[2 * third:])
    return OffsetBound(max(ratios), middle, last, last <= 1.1 * middle, ratios)
