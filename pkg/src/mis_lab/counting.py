"""Pattern counts and entropy for 2-multiplicative integer systems.

Chains are independent, and a chain meeting a box in ell points carries any
admissible word of length ell, so the box count is prod_ell |W_ell|^K_ell.
Regions outer \\ inner are handled the same way: each chain meets the region
in a contiguous segment, and for irreducible systems every admissible word
of length s can fill a segment of length s.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import BoxTooLarge, InvalidSpec, NotIrreducible, ResultTooLarge
from .highprec import HighPrecReal
from .lattice import Box, MultiplierVector, chain_length_in_box, hist_K, is_index_head
from .subshift import ShiftKind, SubshiftSpec, word_counts

RESULT_MAX_BITS = 10 ** 7
BRUTE_MAX_CONFIGS = 2 ** 24
HEAD_ENUM_MAX = 10 ** 6


@dataclass(frozen=True)
class MisSpec:
    multipliers: MultiplierVector
    omega: SubshiftSpec

    @property
    def d(self) -> int:
        return self.multipliers.d

    @property
    def P(self) -> int:
        return self.multipliers.P

    @classmethod
    def make(cls, p: Sequence[int], omega: SubshiftSpec) -> "MisSpec":
        return cls(MultiplierVector(tuple(p)), omega)


@dataclass(frozen=True)
class BoundaryRegion:
    """Points of the outer box that are not in the inner box (inner sides may be 0)."""

    outer: Box
    inner: tuple[int, ...]

    def __post_init__(self):
        inner = tuple(int(v) for v in self.inner)
        if len(inner) != self.outer.d:
            raise InvalidSpec("inner and outer boxes differ in dimension")
        if any(not 0 <= f <= m for f, m in zip(inner, self.outer.sides)):
            raise InvalidSpec("inner sides must satisfy 0 <= f_k <= m_k")
        object.__setattr__(self, "inner", inner)

    @property
    def size(self) -> int:
        return self.outer.volume - math.prod(self.inner)

    def contains(self, point: Sequence[int]) -> bool:
        return self.outer.contains(point) and not all(1 <= x <= f for x, f in zip(point, self.inner))


# word counts and their logs, cached per system

@lru_cache(maxsize=64)
def _counts_cached(omega: SubshiftSpec, upto: int) -> tuple[int, ...]:
    return tuple(word_counts(omega, upto))


def counts_upto(omega: SubshiftSpec, upto: int) -> tuple[int, ...]:
    # round up so neighbouring requests share a cache entry
    size = max(16, 1 << max(upto, 1).bit_length())
    return _counts_cached(omega, size)[: upto + 1]


def log_counts(omega: SubshiftSpec, upto: int, prec: int) -> list[HighPrecReal]:
    """``[log|W_0|, ..., log|W_upto|]`` with log|W_0| = 0."""
    if omega.kind is ShiftKind.FULL:
        lr = HighPrecReal.log_int(omega.alphabet_size, prec)
        return [lr * k for k in range(upto + 1)]
    return [HighPrecReal.log_int(c, prec) for c in counts_upto(omega, upto)]


def _check(mis: MisSpec, box: Box):
    if box.d != mis.d:
        raise InvalidSpec(f"box has dimension {box.d}, system has {mis.d}")


# boxes

def pattern_count_exact(mis: MisSpec, box: Box) -> int:
    _check(mis, box)
    K = hist_K(box, mis.multipliers)
    words = counts_upto(mis.omega, K.max_length)
    bits = sum(c * math.log2(words[ell]) for ell, c in K.counts.items())
    if bits > RESULT_MAX_BITS:
        raise ResultTooLarge(f"count has about {bits:.0f} bits (limit {RESULT_MAX_BITS})")
    out = 1
    for ell, c in sorted(K.counts.items()):
        out *= words[ell] ** c
    return out


def log_pattern_count(mis: MisSpec, box: Box, prec: int = 64) -> HighPrecReal:
    """Natural log of the number of box patterns, sum_ell K_ell log|W_ell|."""
    _check(mis, box)
    K = hist_K(box, mis.multipliers)
    work = prec + 8 + max(1, len(K.counts)).bit_length()
    if mis.omega.kind is ShiftKind.FULL:
        return (HighPrecReal.log_int(mis.omega.alphabet_size, work) * box.volume).with_prec(prec)
    logs = log_counts(mis.omega, K.max_length, work)
    total = HighPrecReal.exact(0, work)
    for ell, c in sorted(K.counts.items()):
        total = total + logs[ell] * c
    return total


def entropy_tail_bound(mis: MisSpec, L: int) -> Fraction:
    """(P-1)^2 * sum_{ell > L} ell / P^(ell+1), to be multiplied by log r."""
    P = mis.P
    x = Fraction(1, P)
    s = x ** (L + 1) * ((L + 1) - L * x) / (1 - x) ** 2
    return (P - 1) ** 2 * s / P


def mis_entropy(mis: MisSpec, tol: float | Fraction | None = None, prec: int | None = None) -> HighPrecReal:
    """Topological entropy h = sum_ell (P-1)^2/P^(ell+1) log|W_ell|.

    The returned interval includes the truncation remainder, which lies in
    [0, bound] because log|W_ell| <= ell log r.
    """
    if tol is None and prec is None:
        prec = 64
    if tol is None:
        tol = Fraction(1, 1 << prec)
    tol = Fraction(tol)
    if tol <= 0:
        raise InvalidSpec("tol must be positive")
    if prec is None:
        prec = max(64, -math.floor(math.log2(tol)) + 16)
    work = prec + 16
    r = mis.omega.alphabet_size
    if mis.omega.kind is ShiftKind.FULL:
        return HighPrecReal.log_int(r, prec)
    L = 1
    while entropy_tail_bound(mis, L) * math.log(r) * 1.01 > tol / 2:
        L += 1
    P = mis.P
    logs = log_counts(mis.omega, L, work)
    total = HighPrecReal.exact(0, work)
    for ell in range(1, L + 1):
        total = total + logs[ell] * Fraction((P - 1) ** 2, P ** (ell + 1))
    bound = HighPrecReal.log_int(r, work) * entropy_tail_bound(mis, L)
    total = total + HighPrecReal.from_bounds(0, bound.hi, work)
    return total.with_prec(prec)


# regions

def _prod_min(inner: Sequence[int], sides: Sequence[int], p: Sequence[int], e: int) -> int:
    return math.prod(min(f, m // q ** e) for f, m, q in zip(inner, sides, p))


def forward_length_histogram(region: BoundaryRegion, p: MultiplierVector) -> dict:
    """D[ell] = number of region points whose forward chain has exactly ell region points."""
    m, f = region.outer.sides, region.inner
    D = {}
    ell = 1
    reach = math.prod(m)
    while reach:
        nxt = math.prod(n // q ** ell for n, q in zip(m, p.p))
        inner = _prod_min(f, m, p.p, ell - 1) - _prod_min(f, m, p.p, ell)
        if reach - nxt - inner:
            D[ell] = reach - nxt - inner
        reach = nxt
        ell += 1
    return D


def segment_histogram(region: BoundaryRegion, p: MultiplierVector) -> dict:
    """S[s] = number of chains meeting the region in exactly s points (closed form)."""
    D = forward_length_histogram(region, p)
    S = {}
    for s in D:
        v = D[s] - D.get(s + 1, 0)
        if v:
            S[s] = v
    return S


def segment_histogram_by_heads(region: BoundaryRegion, p: MultiplierVector) -> dict:
    """Same histogram by walking every chain head of the outer box."""
    m, f = region.outer.sides, region.inner
    if region.outer.volume > HEAD_ENUM_MAX:
        raise BoxTooLarge("head enumeration limited to 10^6 points")
    S: dict = {}
    for i in itertools.product(*(range(1, n + 1) for n in m)):
        if not is_index_head(i, p):
            continue
        a = chain_length_in_box(i, p, m)
        b = chain_length_in_box(i, p, f) if all(f) else 0
        if a - b:
            S[a - b] = S.get(a - b, 0) + 1
    return S


def log_pattern_count_region(mis: MisSpec, region: BoundaryRegion, prec: int = 64) -> HighPrecReal:
    """Natural log of the number of region patterns seen through valid box configurations."""
    _check(mis, region.outer)
    if mis.omega.kind is ShiftKind.SFT and not mis.omega.is_irreducible:
        raise NotIrreducible("region counting needs an irreducible system")
    S = segment_histogram(region, mis.multipliers)
    work = prec + 8 + max(1, len(S)).bit_length()
    logs = log_counts(mis.omega, max(S, default=0), work)
    total = HighPrecReal.exact(0, work)
    for s, c in sorted(S.items()):
        total = total + logs[s] * c
    return total


# brute-force oracles

def _cells(box: Box) -> list[tuple[int, ...]]:
    return list(itertools.product(*(range(1, n + 1) for n in box.sides)))


def _valid_configs(mis: MisSpec, box: Box, chunk: int = 1 << 20):
    """Yield (codes, digits) for chunks of valid configurations on the box."""
    cells = _cells(box)
    r = mis.omega.alphabet_size
    n = len(cells)
    total = r ** n
    if total > BRUTE_MAX_CONFIGS:
        raise BoxTooLarge(f"{total} configurations exceed {BRUTE_MAX_CONFIGS}")
    index = {c: k for k, c in enumerate(cells)}
    pairs = []
    for c in cells:
        nxt = tuple(x * q for x, q in zip(c, mis.multipliers.p))
        if nxt in index:
            pairs.append((index[c], index[nxt]))
    allowed = np.array(mis.omega.matrix, dtype=bool)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = np.empty((n, len(codes)), dtype=np.int64)
        rest = codes.copy()
        for k in range(n):
            digits[k] = rest % r
            rest //= r
        ok = np.ones(len(codes), dtype=bool)
        for a, b in pairs:
            ok &= allowed[digits[a], digits[b]]
        yield codes[ok], digits[:, ok]


def pattern_count_bruteforce(mis: MisSpec, box: Box) -> int:
    """Count assignments on the box whose every chain word is admissible."""
    _check(mis, box)
    return sum(len(codes) for codes, _ in _valid_configs(mis, box))


def region_projection_bruteforce(mis: MisSpec, region: BoundaryRegion) -> int:
    """Distinct restrictions to the region of valid configurations on the outer box."""
    _check(mis, region.outer)
    cells = _cells(region.outer)
    keep = [k for k, c in enumerate(cells) if region.contains(c)]
    r = mis.omega.alphabet_size
    seen: set = set()
    for _, digits in _valid_configs(mis, region.outer):
        code = np.zeros(digits.shape[1], dtype=np.int64)
        for k in reversed(keep):
            code = code * r + digits[k]
        seen.update(np.unique(code).tolist())
    return len(seen)
