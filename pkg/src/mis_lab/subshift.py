"""One-dimensional systems: full shifts and vertex SFTs.

Word counts are exact integers.  The Perron eigenvalue is enclosed
rigorously with the Collatz-Wielandt bounds

    min_i (Bx)_i / x_i  <=  lambda_B  <=  max_i (Bx)_i / x_i

for B = I + A, which is primitive whenever A is irreducible (so the power
method converges even for periodic A), and lambda_A = lambda_B - 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InvalidSpec, NonConvergence, ReducibleMatrix
from .highprec import HighPrecReal, DOWN, UP, _to_mpfr

Matrix = tuple[tuple[int, ...], ...]

MAX_SQUARINGS = 60


class ShiftKind(enum.Enum):
    FULL = "full"
    SFT = "sft"


@dataclass(frozen=True)
class SubshiftSpec:
    """A full shift on ``alphabet_size`` symbols or a vertex SFT given by a 0/1 matrix."""

    alphabet_size: int
    kind: ShiftKind = ShiftKind.FULL
    transition: Matrix | None = None

    def __post_init__(self):
        r = self.alphabet_size
        if not isinstance(r, int) or r < 1:
            raise InvalidSpec("alphabet_size must be a positive integer")
        if self.kind is ShiftKind.SFT:
            t = self.transition
            if t is None:
                raise InvalidSpec("vertex SFT needs a transition matrix")
            t = tuple(tuple(int(v) for v in row) for row in t)
            if len(t) != r or any(len(row) != r for row in t):
                raise InvalidSpec(f"transition must be {r}x{r}")
            if any(v not in (0, 1) for row in t for v in row):
                raise InvalidSpec("transition entries must be 0 or 1")
            object.__setattr__(self, "transition", t)
        elif self.transition is not None:
            raise InvalidSpec("full shift takes no transition matrix")

    @classmethod
    def full(cls, r: int) -> "SubshiftSpec":
        return cls(r, ShiftKind.FULL)

    @classmethod
    def sft(cls, transition: Sequence[Sequence[int]]) -> "SubshiftSpec":
        return cls(len(transition), ShiftKind.SFT, tuple(tuple(row) for row in transition))

    @classmethod
    def golden_mean(cls) -> "SubshiftSpec":
        return cls.sft([[1, 1], [1, 0]])

    @property
    def matrix(self) -> Matrix:
        if self.kind is ShiftKind.FULL:
            return tuple((1,) * self.alphabet_size for _ in range(self.alphabet_size))
        return self.transition

    @property
    def is_irreducible(self) -> bool:
        return is_irreducible(self.matrix)

    @property
    def period(self) -> int:
        return period(self.matrix)

    @property
    def is_primitive(self) -> bool:
        """Irreducible and aperiodic (mixing)."""
        return self.is_irreducible and self.period == 1

    def to_json(self) -> dict:
        if self.kind is ShiftKind.FULL:
            return {"kind": "full", "alphabet_size": self.alphabet_size}
        return {"kind": "sft", "alphabet_size": self.alphabet_size,
                "transition": [list(row) for row in self.transition]}


# graph helpers

def _reach(matrix: Matrix, start: int) -> set[int]:
    """Vertices reachable from ``start`` by paths of length >= 1."""
    n = len(matrix)
    seen: set[int] = set()
    stack = [start]
    while stack:
        u = stack.pop()
        for v in range(n):
            if matrix[u][v] and v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def is_irreducible(matrix: Matrix) -> bool:
    n = len(matrix)
    if n == 0:
        return False
    full = set(range(n))
    return all(_reach(matrix, u) == full for u in range(n))


def period(matrix: Matrix) -> int:
    """Period of an irreducible matrix (gcd of cycle lengths), via BFS levels."""
    n = len(matrix)
    level = {0: 0}
    queue = [0]
    g = 0
    for u in queue:
        for v in range(n):
            if not matrix[u][v]:
                continue
            if v not in level:
                level[v] = level[u] + 1
                queue.append(v)
            else:
                g = math.gcd(g, level[u] + 1 - level[v])
    return abs(g) if g else 0


def strongly_connected_components(matrix: Matrix) -> list[list[int]]:
    """Tarjan, iterative; components in discovery order."""
    n = len(matrix)
    adj = [[v for v in range(n) if matrix[u][v]] for u in range(n)]
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            u, i = work.pop()
            if i == 0:
                index[u] = low[u] = counter
                counter += 1
                stack.append(u)
                on_stack.add(u)
            recurse = False
            for j in range(i, len(adj[u])):
                v = adj[u][j]
                if v not in index:
                    work.append((u, j + 1))
                    work.append((v, 0))
                    recurse = True
                    break
                if v in on_stack:
                    low[u] = min(low[u], index[v])
            if recurse:
                continue
            if low[u] == index[u]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == u:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[u])
    return comps


# exact integer linear algebra

def _matmul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def _matvec(a, x):
    return [sum(v * w for v, w in zip(row, x)) for row in a]


def matrix_power(matrix: Matrix, e: int):
    n = len(matrix)
    result = [[int(i == j) for j in range(n)] for i in range(n)]
    base = [list(row) for row in matrix]
    while e:
        if e & 1:
            result = _matmul(result, base)
        e >>= 1
        if e:
            base = _matmul(base, base)
    return result


def word_count(omega: SubshiftSpec, length: int) -> int:
    """Number of admissible words of the given length."""
    if length < 1:
        raise ValueError("length must be >= 1")
    if omega.kind is ShiftKind.FULL:
        return omega.alphabet_size ** length
    return sum(map(sum, matrix_power(omega.matrix, length - 1)))


def word_counts(omega: SubshiftSpec, upto: int) -> list[int]:
    """``[1, |W_1|, ..., |W_upto|]``; index 0 is the empty word."""
    out = [1]
    if upto < 1:
        return out
    if omega.kind is ShiftKind.FULL:
        r = omega.alphabet_size
        return [r ** k for k in range(upto + 1)]
    a = omega.matrix
    v = [1] * len(a)
    out.append(sum(v))
    for _ in range(upto - 1):
        v = _matvec(a, v)
        out.append(sum(v))
    return out


# Perron data

@dataclass(frozen=True)
class PerronData:
    """Dominant eigenvalue with left/right eigenvectors normalized to l.r = 1.

    ``lam`` is a rigorous enclosure.  The eigenvector radii are a posteriori
    estimates derived from the eigenvalue bracket and the spectral gap proxy.
    """

    lam: HighPrecReal
    left: tuple[HighPrecReal, ...]
    right: tuple[HighPrecReal, ...]
    prec: int

    @property
    def lambda_(self) -> HighPrecReal:
        return self.lam


def _cw_bounds(b, x) -> tuple[Fraction, Fraction]:
    bx = _matvec(b, x)
    ratios = [Fraction(y, xi) for y, xi in zip(bx, x)]
    return min(ratios), max(ratios)


def _dominant_vector(b, prec: int) -> tuple[list[int], Fraction, Fraction]:
    """Positive integer vector close to the Perron vector of primitive ``b``.

    Repeated squaring with rescaling; the rescaling only perturbs the trial
    vector, while the Collatz-Wielandt check always uses the exact ``b``.
    """
    n = len(b)
    keep = prec + 64
    m = [list(row) for row in b]
    tol = Fraction(1, 1 << (prec + 2))
    lo = hi = None
    for _ in range(MAX_SQUARINGS):
        m = _matmul(m, m)
        top = max(max(row) for row in m)
        shift = max(0, top.bit_length() - keep)
        if shift:
            m = [[v >> shift for v in row] for row in m]
        x = [sum(row) for row in m]
        if min(x) <= 0:
            continue
        lo, hi = _cw_bounds(b, x)
        if hi - lo <= tol * lo:
            return x, lo, hi
    raise NonConvergence(f"power iteration did not reach {prec} bits in {MAX_SQUARINGS} squarings")


def _normalized(vec: Sequence[int], scale: Fraction) -> list[Fraction]:
    return [Fraction(v) * scale for v in vec]


def perron_of_matrix(matrix: Matrix, prec: int = 64) -> PerronData:
    matrix = tuple(tuple(int(v) for v in row) for row in matrix)
    if not is_irreducible(matrix):
        raise ReducibleMatrix("transition matrix is not irreducible")
    n = len(matrix)
    b = [[matrix[i][j] + (i == j) for j in range(n)] for i in range(n)]
    bt = [list(col) for col in zip(*b)]
    x, lo, hi = _dominant_vector(b, prec)
    y, lo2, hi2 = _dominant_vector(bt, prec)
    lo, hi = max(lo, lo2), min(hi, hi2)
    lam = HighPrecReal(_to_mpfr(lo - 1, prec, DOWN), _to_mpfr(hi - 1, prec, UP), prec)

    r = _normalized(x, Fraction(1, sum(x)))
    l_raw = _normalized(y, Fraction(1))
    dot = sum(a * c for a, c in zip(l_raw, r))
    l = [v / dot for v in l_raw]

    # error estimate: relative bracket width amplified by a gap proxy
    rel = (hi - lo) / lo
    eps = rel * 16 * n + Fraction(1, 1 << prec)

    def enclose(v: Fraction) -> HighPrecReal:
        return HighPrecReal(_to_mpfr(v - abs(v) * eps, prec, DOWN),
                            _to_mpfr(v + abs(v) * eps, prec, UP), prec)

    return PerronData(lam, tuple(enclose(v) for v in l), tuple(enclose(v) for v in r), prec)


def perron_data(omega: SubshiftSpec, prec: int = 64) -> PerronData:
    if omega.kind is ShiftKind.FULL:
        r = omega.alphabet_size
        lam = HighPrecReal.exact(r, prec)
        right = tuple(HighPrecReal.exact(Fraction(1, r), prec) for _ in range(r))
        left = tuple(HighPrecReal.exact(1, prec) for _ in range(r))
        return PerronData(lam, left, right, prec)
    return perron_of_matrix(omega.matrix, prec)


def spectral_radius(matrix: Matrix, prec: int = 64) -> HighPrecReal:
    """Perron value of an arbitrary 0/1 matrix: max over its irreducible classes."""
    best = HighPrecReal.exact(0, prec)
    for comp in strongly_connected_components(matrix):
        sub = tuple(tuple(matrix[i][j] for j in comp) for i in comp)
        if not is_irreducible(sub):
            continue
        lam = perron_of_matrix(sub, prec).lam
        if lam.lo > best.hi:
            best = lam
        elif lam.overlaps(best):
            best = best.hull(lam)
    return best


def entropy_rate_1d(omega: SubshiftSpec, prec: int = 64) -> HighPrecReal:
    """Natural log of the Perron value."""
    if omega.kind is ShiftKind.FULL:
        return HighPrecReal.log_int(omega.alphabet_size, prec)
    lam = perron_data(omega, prec + 8).lam
    if lam.hi == lam.lo == 1:
        return HighPrecReal.exact(0, prec)
    return lam.log()
