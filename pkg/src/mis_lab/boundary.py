"""Boundary complexity of frames outer \\ inner with inner sides f_k(m) ~ t_k m.

With P the product of the multipliers and tau the product of the slopes,
the limiting normalized log-count depends only on tau once every slope
sits in the same band 1/p_k^l < t_k <= 1/p_k^(l-1).  Targets in
[h(X), log r] are realized by inverting that formula band by band.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .counting import BoundaryRegion, MisSpec, log_counts, log_pattern_count_region, mis_entropy
from .errors import DegenerateRegion, InvalidSpec, TargetOutOfRange, ZeroTau
from .highprec import HighPrecReal, mpfr_to_fraction
from .lattice import Box


@dataclass(frozen=True)
class SpeedSpec:
    """Per-axis slopes; the inner side on axis k is floor(t_k * m_k)."""

    slopes: tuple[Fraction, ...]

    def __post_init__(self):
        s = tuple(Fraction(v) for v in self.slopes)
        if not s or any(not 0 <= v <= 1 for v in s):
            raise InvalidSpec("slopes must lie in [0, 1]")
        object.__setattr__(self, "slopes", s)

    @property
    def tau(self) -> Fraction:
        return math.prod(self.slopes, start=Fraction(1))

    def inner(self, sides: Sequence[int]) -> tuple[int, ...]:
        return tuple(math.floor(t * m) for t, m in zip(self.slopes, sides))


@dataclass(frozen=True)
class RealizationResult:
    """``level`` is None (and tau 0) when the target is the entropy itself."""

    target: HighPrecReal
    level: int | None
    tau: Fraction
    achieved_h: HighPrecReal
    abs_err: float


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def classify_level(tau, P: int) -> int:
    """Unique l >= 1 with 1/P^l < tau <= 1/P^(l-1)."""
    tau = _frac(tau)
    if tau <= 0:
        raise ZeroTau("tau = 0 has no finite level; the boundary complexity is the entropy")
    if tau > 1:
        raise InvalidSpec("tau must be at most 1")
    ell = 1
    while tau * P ** ell <= 1:
        ell += 1
    return ell


def _g(mis: MisSpec, upto: int, prec: int) -> list[HighPrecReal]:
    return log_counts(mis.omega, upto, prec)


def _combine(coeffs: dict, g: list[HighPrecReal], prec: int) -> HighPrecReal:
    total = HighPrecReal.exact(0, prec)
    for i, c in sorted(coeffs.items()):
        if c:
            total = total + g[i] * c
    return total


def boundary_coefficients(P: int, tau: Fraction, ell: int) -> dict:
    """Exact coefficients c_i with h = sum_i c_i log|W_i| at level ell."""
    tau = _frac(tau)
    # log|W_0| = 0, so terms on index 0 are dropped
    zeta = {i: Fraction(P - 1, P ** i) for i in range(1, ell - 1)}
    if ell >= 2:
        zeta[ell - 1] = Fraction(1, P ** (ell - 2)) - P * tau
    eta = {ell: Fraction(1, P ** (ell - 1)) - tau}
    if ell >= 2:
        eta[ell - 1] = P * tau - Fraction(1, P ** (ell - 1))
    out: dict = {}
    for i, c in zeta.items():
        out[i] = out.get(i, 0) + (1 - Fraction(1, P)) * c
    for i, c in eta.items():
        out[i] = out.get(i, 0) + c
    scale = 1 / (1 - tau)
    return {i: c * scale for i, c in out.items() if c}


def h_boundary(mis: MisSpec, tau, prec: int = 64, level: int | None = None) -> HighPrecReal:
    """Closed-form boundary complexity for product slope tau."""
    tau = _frac(tau)
    if tau == 1:
        raise DegenerateRegion("tau = 1 leaves an empty frame")
    if tau == 0:
        return mis_entropy(mis, prec=prec)
    ell = level if level is not None else classify_level(tau, mis.P)
    work = prec + 16
    g = _g(mis, ell, work)
    return _combine(boundary_coefficients(mis.P, tau, ell), g, work).with_prec(prec)


def h_boundary_limit(mis: MisSpec, slopes: Sequence, prec: int = 64) -> HighPrecReal:
    """Limit of the frame log-count per cell for arbitrary per-axis slopes.

    Counts region points by forward chain length in the limit and telescopes
    the chain words; needs no band hypothesis, so it serves as an independent
    check of the closed form.
    """
    t = [_frac(v) for v in slopes]
    p = mis.multipliers.p
    tau = math.prod(t, start=Fraction(1))
    if tau == 1:
        raise DegenerateRegion("tau = 1 leaves an empty frame")
    if tau == 0:
        return mis_entropy(mis, prec=prec)
    P = mis.P
    # beyond this level every slope dominates p_k^-(l-1) and the terms vanish
    top = max(classify_level(v, q) if v > 0 else 1 for v, q in zip(t, p)) + 1
    work = prec + 16
    g = _g(mis, top, work)
    coeffs = {}
    for ell in range(1, top + 1):
        outer = Fraction(1, P ** (ell - 1)) - Fraction(1, P ** ell)
        inner = (math.prod((min(v, Fraction(1, q ** (ell - 1))) for v, q in zip(t, p)), start=Fraction(1))
                 - math.prod((min(v, Fraction(1, q ** ell)) for v, q in zip(t, p)), start=Fraction(1)))
        w = (outer - inner) / (1 - tau)
        coeffs[ell] = coeffs.get(ell, 0) + w
        coeffs[ell - 1] = coeffs.get(ell - 1, 0) - w
    coeffs.pop(0, None)
    return _combine(coeffs, g, work).with_prec(prec)


def thresholds_A(mis: MisSpec, k: int, prec: int = 64) -> HighPrecReal:
    """Top of the level-k band of achievable values (A_2 = log r)."""
    if k < 2:
        raise InvalidSpec("thresholds start at k = 2")
    P = mis.P
    work = prec + 16
    g = _g(mis, k, work)
    coeffs = {i: (1 - Fraction(1, P)) * (P - 1) / Fraction(P ** i) for i in range(1, k - 1)}
    coeffs[k - 1] = coeffs.get(k - 1, 0) + Fraction(1, P ** (k - 2)) - Fraction(1, P ** (k - 1))
    scale = 1 / (1 - Fraction(1, P ** (k - 1)))
    return (_combine(coeffs, g, work) * scale).with_prec(prec)


def _to_hpr(x, prec: int) -> HighPrecReal:
    if isinstance(x, HighPrecReal):
        return x
    return HighPrecReal.exact(_frac(x), prec)


def realize(mis: MisSpec, target_h, prec: int = 64) -> RealizationResult:
    """Find tau whose boundary complexity equals target_h."""
    work = prec + 32
    target = _to_hpr(target_h, work)
    tol = HighPrecReal.exact(Fraction(1, 1 << (prec - 4)), work)
    g = _g(mis, 2, work)
    h_x = mis_entropy(mis, prec=work)
    if target.certainly_lt(h_x - tol) or (g[1] + tol).certainly_lt(target):
        raise TargetOutOfRange(f"target {target.to_decimal(12)} outside [{h_x.to_decimal(12)}, {g[1].to_decimal(12)}]")
    P = mis.P
    if abs(target - g[1]).hi <= tol.lo:
        tau = (1 + Fraction(1, P)) / 2
        return _result(mis, target, 1, tau, prec)
    if abs(target - h_x).hi <= tol.lo:
        return _result(mis, target, None, Fraction(0), prec)

    k = 2
    a_k = thresholds_A(mis, 2, work)
    while True:
        a_next = thresholds_A(mis, k + 1, work)
        if a_k.certainly_lt(a_next):
            warnings.warn(f"thresholds not decreasing at k={k}: A_k={a_k.to_decimal(12)} < A_k+1={a_next.to_decimal(12)}")
        if a_next.certainly_lt(target):
            break
        k += 1
        a_k = a_next
        if k > 4 * work:
            return _result(mis, target, None, Fraction(0), prec)

    g = _g(mis, k, work)
    num = {i: (1 - Fraction(1, P)) * (P - 1) / Fraction(P ** i) for i in range(1, k - 1)}
    num[k - 1] = num.get(k - 1, 0) + Fraction(1, P ** (k - 2)) - Fraction(2, P ** (k - 1))
    num[k] = num.get(k, 0) + Fraction(1, P ** (k - 1))
    tau_hp = (_combine(num, g, work) - target) / (g[k] - g[k - 1] - target)
    tau = mpfr_to_fraction(tau_hp.mid)
    lo, hi = Fraction(1, P ** k), Fraction(1, P ** (k - 1))
    if not lo < tau <= hi:
        # target sits on a band edge up to rounding; snap to the closed end
        tau = hi if abs(tau - hi) < abs(tau - lo) else lo + (hi - lo) / (1 << work)
    return _result(mis, target, k, tau, prec)


def _result(mis, target, level, tau, prec) -> RealizationResult:
    achieved = h_boundary(mis, tau, prec + 16, level=level) if tau else mis_entropy(mis, prec=prec + 16)
    err = float(abs(achieved - target).mid)
    return RealizationResult(target.with_prec(prec), level, tau, achieved.with_prec(prec), err)


def distribute_tau(tau, p: Sequence[int], max_den: int = 10 ** 12) -> tuple[Fraction, ...]:
    """Split tau into per-axis slopes with exact product tau, all in one level band.

    Axis k gets about p_k^-theta / p_k^(l-1) where tau P^(l-1) = P^-theta, so
    each slope lands inside its own band (1/p_k^l, 1/p_k^(l-1)].
    """
    tau = _frac(tau)
    p = tuple(p)
    if len(p) == 1:
        return (tau,)
    P = math.prod(p)
    ell = classify_level(tau, P)
    c = tau * P ** (ell - 1)
    theta = -math.log(c) / math.log(P) if c < 1 else 0.0
    den = max_den
    while den >= 1:
        u = [Fraction(q ** -theta).limit_denominator(den) for q in p[:-1]]
        last = c / math.prod(u, start=Fraction(1))
        u.append(last)
        if all(Fraction(1, q) < v <= 1 for v, q in zip(u, p)):
            return tuple(v / q ** (ell - 1) for v, q in zip(u, p))
        den //= 10
    raise InvalidSpec(f"cannot split tau={tau} into per-axis slopes in one band")


def empirical_h_boundary(mis: MisSpec, m: Sequence[int], speed: SpeedSpec, prec: int = 64) -> HighPrecReal:
    """Finite-size normalized log-count of the frame outer \\ inner."""
    outer = Box(tuple(m))
    region = BoundaryRegion(outer, speed.inner(outer.sides))
    if region.size == 0:
        raise DegenerateRegion("frame is empty")
    return log_pattern_count_region(mis, region, prec) / region.size
