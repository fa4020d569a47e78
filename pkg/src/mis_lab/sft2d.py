"""Two-dimensional SFTs given by allowed 2x2 blocks.

A block [a,b;c,d] has a top-left, b top-right, c bottom-left, d bottom-right.
Strip systems: V_i lives on vertical strips of width i (states are rows of
width i, stacked upward); H_i lives on horizontal strips of height i (states
are columns of height i, placed left to right).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BadWeights, DegenerateInterval, EmptyStates, InvalidSpec, TargetOutOfRange, TooLarge
from .highprec import HighPrecReal, mpfr_to_fraction
from .subshift import is_irreducible, spectral_radius

Block = tuple[int, int, int, int]

MAX_ROW_STATES = 1 << 16
MAX_LAYER_SUBSETS = 200_000
BRUTE_MAX_CELLS = 22


@dataclass(frozen=True)
class Sft2dSpec:
    alphabet_size: int
    allowed: frozenset

    def __post_init__(self):
        r = self.alphabet_size
        if not isinstance(r, int) or r < 1:
            raise InvalidSpec("alphabet_size must be a positive integer")
        allowed = frozenset(tuple(int(s) for s in b) for b in self.allowed)
        for b in allowed:
            if len(b) != 4 or any(not 0 <= s < r for s in b):
                raise InvalidSpec(f"bad 2x2 block {b}")
        object.__setattr__(self, "allowed", allowed)
        if not _has_3x3(self):
            raise InvalidSpec("no admissible 3x3 pattern: the language is empty")

    @classmethod
    def from_strings(cls, alphabet_size: int, blocks: Iterable[str]) -> "Sft2dSpec":
        """Blocks as strings 'abcd' (one digit per symbol)."""
        out = []
        for s in blocks:
            if len(s) != 4 or not s.isdigit():
                raise InvalidSpec(f"block string {s!r} must be four digits")
            out.append(tuple(int(ch) for ch in s))
        return cls(alphabet_size, frozenset(out))

    @classmethod
    def from_forbidden(cls, alphabet_size: int, forbidden: Iterable[str]) -> "Sft2dSpec":
        bad = {tuple(int(ch) for ch in s) for s in forbidden}
        every = itertools.product(range(alphabet_size), repeat=4)
        return cls(alphabet_size, frozenset(b for b in every if b not in bad))

    @classmethod
    def full(cls, r: int) -> "Sft2dSpec":
        return cls(r, frozenset(itertools.product(range(r), repeat=4)))

    def block_strings(self) -> list[str]:
        return sorted("".join(map(str, b)) for b in self.allowed)

    def transposed(self) -> "Sft2dSpec":
        """Mirror through the line joining bottom-left and top-right corners."""
        return Sft2dSpec(self.alphabet_size, frozenset((d, b, c, a) for a, b, c, d in self.allowed))

    def rows_ok(self, top: Sequence[int], bottom: Sequence[int]) -> bool:
        return all((top[c], top[c + 1], bottom[c], bottom[c + 1]) in self.allowed for c in range(len(top) - 1))


def _has_3x3(spec: Sft2dSpec) -> bool:
    rows = list(itertools.product(range(spec.alphabet_size), repeat=3))
    nxt = {u: [v for v in rows if spec.rows_ok(u, v)] for u in rows}
    return any(nxt[v] for u in rows for v in nxt[u])


# strips

@dataclass(frozen=True)
class StripSystem:
    direction: int
    thickness: int
    states: tuple
    transition: tuple

    @property
    def irreducible(self) -> bool:
        return is_irreducible(self.transition)


def _essential(states: list, adj: list[list[int]]) -> tuple[list, list[list[int]]]:
    """Drop states that cannot be continued forever in both directions."""
    alive = set(range(len(states)))
    changed = True
    while changed:
        changed = False
        for u in list(alive):
            has_out = any(adj[u][v] for v in alive)
            has_in = any(adj[v][u] for v in alive)
            if not (has_out and has_in):
                alive.discard(u)
                changed = True
    keep = sorted(alive)
    return [states[u] for u in keep], [[adj[u][v] for v in keep] for u in keep]


def _pair_ok(spec: Sft2dSpec, direction: int, u: tuple, v: tuple) -> bool:
    if len(u) == 1:
        # a single line has no 2x2 window; a pair is allowed when it occurs in some block
        a, b = u[0], v[0]
        if direction == 1:
            # v above u: vertical pairs (top, bottom) = (v, u)
            return any((blk[0], blk[2]) == (b, a) or (blk[1], blk[3]) == (b, a) for blk in spec.allowed)
        return any((blk[0], blk[1]) == (a, b) or (blk[2], blk[3]) == (a, b) for blk in spec.allowed)
    if direction == 1:
        return spec.rows_ok(v, u)
    # columns listed top to bottom, v to the right of u
    return all((u[j], v[j], u[j + 1], v[j + 1]) in spec.allowed for j in range(len(u) - 1))


def build_strip(spec: Sft2dSpec, direction: int, thickness: int) -> StripSystem:
    """Transfer system of the width-``thickness`` strip (direction 1 = V, 2 = H)."""
    if direction not in (1, 2):
        raise InvalidSpec("direction must be 1 (vertical strips) or 2 (horizontal strips)")
    if thickness < 1:
        raise InvalidSpec("thickness must be >= 1")
    if spec.alphabet_size ** thickness > 4096:
        raise TooLarge(f"{spec.alphabet_size}^{thickness} cross-sections")
    states = list(itertools.product(range(spec.alphabet_size), repeat=thickness))
    adj = [[int(_pair_ok(spec, direction, u, v)) for v in states] for u in states]
    states, adj = _essential(states, adj)
    if not states:
        raise EmptyStates(f"no bi-infinite strip of thickness {thickness} in direction {direction}")
    return StripSystem(direction, thickness, tuple(states), tuple(tuple(row) for row in adj))


def strip_entropy(spec: Sft2dSpec, direction: int, thickness: int, prec: int = 64) -> HighPrecReal:
    """log of the Perron value of the strip transfer matrix (largest class if reducible)."""
    strip = build_strip(spec, direction, thickness)
    lam = spectral_radius(strip.transition, prec + 8)
    return lam.log().with_prec(prec)


# mixing along frames

def sft_boundary_complexity(rates: Sequence, i: int, weights: Sequence) -> Fraction | HighPrecReal:
    """Weighted strip rates: sum_k prod_{l != k} w_l / (sum of those) * rate_k / i.

    ``rates[k]`` is the strip entropy in direction k+1 at thickness i.  When
    every product vanishes (one nonzero weight, d >= 3) the limit of the
    formula is used: the mean of the other axes' rates.
    """
    w = [Fraction(v) for v in weights]
    if len(w) != len(rates):
        raise BadWeights("one weight per direction is needed")
    if any(v < 0 for v in w) or sum(w) != 1:
        raise BadWeights("weights must be nonnegative and sum to 1")
    if i < 1:
        raise BadWeights("thickness must be >= 1")
    d = len(w)
    prods = [math.prod((w[l] for l in range(d) if l != k), start=Fraction(1)) for k in range(d)]
    total = sum(prods)
    if total == 0:
        k0 = next(k for k in range(d) if w[k])
        prods = [Fraction(0) if k == k0 else Fraction(1) for k in range(d)]
        total = Fraction(d - 1)
    out = 0
    for c, rate in zip(prods, rates):
        if c:
            out = rate * (c / (total * i)) + out
    return out


def mix_2d(rate_v, rate_h, i: int, t) -> Fraction | HighPrecReal:
    """(1-t)/i * rate_V + t/i * rate_H, i.e. weights (t, 1-t)."""
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise BadWeights("t must lie in [0, 1]")
    return sft_boundary_complexity([rate_v, rate_h], i, [t, 1 - t])


def sft_realize_t(rate_v, rate_h, i: int, target, prec: int = 64) -> Fraction:
    """t in [0, 1] with mix_2d(rate_v, rate_h, i, t) == target."""
    v = _hp(rate_v, prec) / i
    h = _hp(rate_h, prec) / i
    tgt = _hp(target, prec)
    tol = Fraction(1, 1 << (prec - 8))
    lo, hi = (v, h) if v.mid <= h.mid else (h, v)
    if tgt.mid < lo.mid - tol or tgt.mid > hi.mid + tol:
        raise TargetOutOfRange("target is not between the two strip rates")
    if abs(h - v).hi <= tol:
        if abs(tgt - v).hi <= tol:
            return Fraction(0)
        raise DegenerateInterval("strip rates coincide but the target differs")
    t = (tgt - v) / (h - v)
    return min(Fraction(1), max(Fraction(0), mpfr_to_fraction(t.mid)))


def _hp(x, prec: int) -> HighPrecReal:
    if isinstance(x, HighPrecReal):
        return x
    return HighPrecReal.exact(Fraction(x), prec)


# frame counting

def _frame_visible(m: int, n: int, i: int, margin: int, t: int) -> tuple[int, ...]:
    """Visible column indices of extended row t (rows counted from the top)."""
    if t < margin:
        return ()
    if t < margin + i:
        return tuple(range(m))
    return tuple(range(max(0, m - i), m))


def frame_count_empirical(spec: Sft2dSpec, m: int, n: int, i: int, margin: int = 2,
                          budget: int = MAX_LAYER_SUBSETS) -> int:
    """Distinct frame patterns (top i rows and right i columns of the m x n box).

    Box patterns count when they extend to a locally admissible pattern on the
    box enlarged by ``margin`` rows above and columns to the right, which is
    the direction a configuration on N^2 continues.  Rows are scanned top to
    bottom; the state is the set of full rows consistent with what has been
    seen, so each frame pattern is counted exactly once.
    """
    if m < 1 or n < 1 or i < 1:
        raise InvalidSpec("m, n and i must be >= 1")
    i = min(i, max(m, n))
    if m > n:
        # mirror so rows are the short side; top rows and right columns swap
        spec, m, n = spec.transposed(), n, m
    r = spec.alphabet_size
    width = m + margin
    height = n + margin
    n_rows = r ** width
    if n_rows > MAX_ROW_STATES:
        raise TooLarge(f"{n_rows} row states exceed {MAX_ROW_STATES}")
    rows = list(itertools.product(range(r), repeat=width))
    below = []
    for u in rows:
        mask = 0
        for k, v in enumerate(rows):
            if spec.rows_ok(u, v):
                mask |= 1 << k
        below.append(mask)

    def groups(vis):
        out: dict = {}
        for k, row in enumerate(rows):
            key = tuple(row[c] for c in vis)
            out[key] = out.get(key, 0) | (1 << k)
        return list(out.values())

    group_cache: dict = {}

    def split(mask: int, t: int):
        vis = _frame_visible(m, n, i, margin, t)
        if vis not in group_cache:
            group_cache[vis] = groups(vis)
        for g in group_cache[vis]:
            part = mask & g
            if part:
                yield part

    layer: dict = {}
    for part in split((1 << n_rows) - 1, 0):
        layer[part] = layer.get(part, 0) + 1
    for t in range(1, height):
        nxt: dict = {}
        for mask, cnt in layer.items():
            succ = 0
            bits = mask
            while bits:
                low = bits & -bits
                succ |= below[low.bit_length() - 1]
                bits ^= low
            for part in split(succ, t):
                nxt[part] = nxt.get(part, 0) + cnt
        if len(nxt) > budget:
            raise TooLarge(f"{len(nxt)} reachable row sets exceed budget {budget}")
        layer = nxt
    return sum(layer.values())


def frame_count_bruteforce(spec: Sft2dSpec, m: int, n: int, i: int, margin: int = 2) -> int:
    """Same count by enumerating every pattern on the enlarged box (tiny sizes only)."""
    width, height = m + margin, n + margin
    cells = width * height
    if cells > BRUTE_MAX_CELLS:
        raise TooLarge(f"{cells} cells exceed brute-force limit {BRUTE_MAX_CELLS}")
    r = spec.alphabet_size
    seen = set()
    for flat in itertools.product(range(r), repeat=cells):
        grid = [flat[t * width:(t + 1) * width] for t in range(height)]
        if all(spec.rows_ok(grid[t], grid[t + 1]) for t in range(height - 1)):
            seen.add(tuple(grid[t][c] for t in range(height) for c in _frame_visible(m, n, i, margin, t)))
    return len(seen)


def pattern_count_2d(spec: Sft2dSpec, m: int, n: int, margin: int = 2) -> int:
    """Distinct patterns on the whole m x n box (frame as thick as the box)."""
    return frame_count_empirical(spec, m, n, max(m, n), margin)


# gluing probe

@dataclass(frozen=True)
class GluingProbe:
    verified: bool
    gap: int
    window: int
    counterexample: tuple | None = None

    def to_json(self) -> dict:
        out = {"verified": self.verified, "gap": self.gap, "window": self.window}
        if self.counterexample is not None:
            left, right, direction = self.counterexample
            out["counterexample"] = {"left": [list(x) for x in left], "right": [list(x) for x in right],
                                     "direction": direction}
        return out


def _bool_matmul(a, b):
    n = len(a)
    return [[int(any(a[i][k] and b[k][j] for k in range(n))) for j in range(n)] for i in range(n)]


def block_gluing_probe(spec: Sft2dSpec, candidate_N: int, window: int) -> GluingProbe:
    """Bounded check that window x window blocks glue across ``candidate_N`` free lines.

    Both horizontal and vertical placements are tested: for every pair of
    admissible blocks, the last line of the first must reach the first line
    of the second in exactly N+1 steps of the strip transfer graph.  Passing
    is necessary for block gluing, not a proof of it.
    """
    if not 1 <= window <= 6:
        raise InvalidSpec("window must be between 1 and 6")
    if candidate_N < 0:
        raise InvalidSpec("gap must be >= 0")
    for direction, name in ((2, "horizontal"), (1, "vertical")):
        strip = build_strip(spec, direction, window)
        adj = [list(row) for row in strip.transition]
        n = len(adj)
        reach = [[int(a == b) for b in range(n)] for a in range(n)]
        for _ in range(candidate_N + 1):
            reach = _bool_matmul(reach, adj)
        # in the essential graph every state starts and ends some window-long block
        for a in range(n):
            for b in range(n):
                if not reach[a][b]:
                    return GluingProbe(False, candidate_N, window,
                                       ((strip.states[a],), (strip.states[b],), name))
    return GluingProbe(True, candidate_N, window)


# preset systems: at most one 1 per window; no two 1s stacked in a column (and at most
# two 1s); alternating checkerboard; single 1s or a main-diagonal pair; even parity

PRESET_SPECS = {
    "sparse_ones": ("allowed", ["0000", "1000", "0100", "0010", "0001"]),
    "no_vertical_pair": ("forbidden", ["0101", "1010", "0111", "1011", "1101", "1110", "1111"]),
    "checkerboard": ("allowed", ["0110", "1001"]),
    "diagonal_ones": ("allowed", ["1000", "0100", "0010", "0001", "1001"]),
    "even_parity": ("forbidden", ["1000", "0100", "0010", "0001", "0111", "1011", "1101", "1110"]),
}


def preset_spec(name: str) -> Sft2dSpec:
    kind, blocks = PRESET_SPECS[name]
    if kind == "allowed":
        return Sft2dSpec.from_strings(2, blocks)
    return Sft2dSpec.from_forbidden(2, blocks)
