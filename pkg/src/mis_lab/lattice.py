"""Multiplicative chains in N^d and their length histograms on boxes.

A chain is the progression i, i*p, i*p^2, ... (componentwise powers).  Every
lattice point lies on exactly one chain whose head has some coordinate not
divisible by the matching multiplier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BoxTooLarge, InvalidSpec, OutOfBox

ORACLE_MAX_VOLUME = 10 ** 7


@dataclass(frozen=True)
class MultiplierVector:
    p: tuple[int, ...]

    def __post_init__(self):
        p = tuple(int(v) for v in self.p)
        if not p:
            raise InvalidSpec("multiplier vector is empty")
        if any(v < 2 for v in p):
            raise InvalidSpec("every multiplier p_j must be >= 2")
        object.__setattr__(self, "p", p)

    @property
    def d(self) -> int:
        return len(self.p)

    @property
    def P(self) -> int:
        return math.prod(self.p)


@dataclass(frozen=True)
class Box:
    sides: tuple[int, ...]

    def __post_init__(self):
        s = tuple(int(v) for v in self.sides)
        if not s:
            raise InvalidSpec("box needs at least one side")
        if any(v < 1 for v in s):
            raise InvalidSpec("box sides must be >= 1")
        object.__setattr__(self, "sides", s)

    @property
    def d(self) -> int:
        return len(self.sides)

    @property
    def volume(self) -> int:
        return math.prod(self.sides)

    def contains(self, point: Sequence[int]) -> bool:
        return len(point) == self.d and all(1 <= x <= n for x, n in zip(point, self.sides))


@dataclass(frozen=True)
class ChainHistogram:
    """``counts[ell]`` for ell >= 1; zero entries are omitted."""

    counts: dict
    flavor: str

    def __getitem__(self, ell: int) -> int:
        return self.counts.get(ell, 0)

    @property
    def max_length(self) -> int:
        return max(self.counts, default=0)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def weighted_total(self) -> int:
        return sum(ell * c for ell, c in self.counts.items())

    def to_json(self) -> dict:
        return {str(ell): str(c) for ell, c in sorted(self.counts.items())}

    def __eq__(self, other):
        if not isinstance(other, ChainHistogram):
            return NotImplemented
        return self.flavor == other.flavor and self.counts == other.counts

    def __hash__(self):
        return hash((self.flavor, tuple(sorted(self.counts.items()))))


def _check_dims(box: Box, p: MultiplierVector):
    if box.d != p.d:
        raise InvalidSpec(f"box has dimension {box.d} but multipliers have {p.d}")


def ilog(x: int, p: int) -> int:
    """Largest e with p**e <= x (x >= 1), using integer arithmetic only."""
    if x < 1:
        raise ValueError("ilog needs x >= 1")
    e = max(0, int(x.bit_length() / math.log2(p)) - 1)
    while p ** e > x:
        e -= 1
    while p ** (e + 1) <= x:
        e += 1
    return e


def is_index_head(i: Sequence[int], p: MultiplierVector) -> bool:
    return any(x % q for x, q in zip(i, p.p))


def chain_in_box(i: Sequence[int], p: MultiplierVector, box: Box) -> list[tuple[int, ...]]:
    if not box.contains(i):
        raise OutOfBox(f"point {tuple(i)} lies outside box {box.sides}")
    out = []
    cur = tuple(i)
    while box.contains(cur):
        out.append(cur)
        cur = tuple(x * q for x, q in zip(cur, p.p))
    return out


def chain_length_in_box(i: Sequence[int], p: MultiplierVector, sides: Sequence[int]) -> int:
    """Number of chain points i*p^m (m >= 0) inside the box; 0 if i is outside."""
    return min(ilog(n // x, q) + 1 if x <= n else 0 for x, q, n in zip(i, p.p, sides))


def _prod_floor(sides: Sequence[int], p: Sequence[int], e: int) -> int:
    return math.prod(n // q ** e for n, q in zip(sides, p))


def _hist_J_sides(sides: Sequence[int], p: Sequence[int]) -> dict:
    counts = {}
    if any(n < 1 for n in sides):
        return counts
    ell = 1
    prev = _prod_floor(sides, p, 0)
    while prev:
        nxt = _prod_floor(sides, p, ell)
        if prev - nxt:
            counts[ell] = prev - nxt
        prev = nxt
        ell += 1
    return counts


def hist_J(box: Box, p: MultiplierVector) -> ChainHistogram:
    """Lattice points whose chain (from that point on) has exactly ell points in the box."""
    _check_dims(box, p)
    return ChainHistogram(_hist_J_sides(box.sides, p.p), "J")


def hist_K(box: Box, p: MultiplierVector) -> ChainHistogram:
    """Chain heads whose chain meets the box in exactly ell points."""
    _check_dims(box, p)
    outer = _hist_J_sides(box.sides, p.p)
    inner = _hist_J_sides([n // q for n, q in zip(box.sides, p.p)], p.p)
    counts = {}
    for ell, c in outer.items():
        diff = c - inner.get(ell, 0)
        if diff:
            counts[ell] = diff
    return ChainHistogram(counts, "K")


def _axis_lengths(n: int, q: int, max_len: int) -> np.ndarray:
    """For x = 1..n, number of m >= 0 with x*q^m <= n (clipped to max_len)."""
    x = np.arange(1, n + 1, dtype=np.int64)
    out = np.zeros(n, dtype=np.int64)
    cur = x.copy()
    for _ in range(max_len + 1):
        inside = cur <= n
        if not inside.any():
            break
        out += inside
        cur = cur * q
    return out


def enumerate_hist_oracle(box: Box, p: MultiplierVector) -> tuple[ChainHistogram, ChainHistogram]:
    """J and K histograms by visiting every lattice point (no closed forms).

    The chain length from a point is the minimum over axes of the per-axis
    count of powers that stay inside, so the box is swept as an outer
    minimum of per-axis arrays, one slab of the first axis at a time.
    """
    _check_dims(box, p)
    if box.volume > ORACLE_MAX_VOLUME:
        raise BoxTooLarge(f"oracle volume {box.volume} exceeds {ORACLE_MAX_VOLUME}")
    max_len = max(box.sides).bit_length() + 1
    axes = [_axis_lengths(n, q, max_len) for n, q in zip(box.sides, p.p)]
    divisible = [(np.arange(1, n + 1) % q) == 0 for n, q in zip(box.sides, p.p)]

    rest_len = np.full((), max_len + 1, dtype=np.int64)
    rest_div = np.ones((), dtype=bool)
    for ax, dv in zip(axes[1:], divisible[1:]):
        rest_len = np.minimum.outer(rest_len, ax)
        rest_div = np.logical_and.outer(rest_div, dv)
    rest_len = rest_len.ravel()
    rest_div = rest_div.ravel()

    j_counts = np.zeros(max_len + 2, dtype=np.int64)
    k_counts = np.zeros(max_len + 2, dtype=np.int64)
    for x_len, x_div in zip(axes[0], divisible[0]):
        lengths = np.minimum(rest_len, x_len)
        j_counts += np.bincount(lengths, minlength=max_len + 2)
        heads = lengths if not x_div else lengths[~rest_div]
        k_counts += np.bincount(heads, minlength=max_len + 2)

    def pack(arr, flavor):
        return ChainHistogram({ell: int(c) for ell, c in enumerate(arr) if ell >= 1 and c}, flavor)

    return pack(j_counts, "J"), pack(k_counts, "K")
