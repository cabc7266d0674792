"""Entry growth of products of the elementary 2x2 integer matrices
A = [[1, x], [0, 1]] and B = [[1, 0], [y, 1]].

A product word is a bit string: 0 multiplies by A, 1 by B, left to
right.  All arithmetic is exact (Python integers), so growth bases are
measured on true values rather than floating approximations; only the
final logarithms are floats.

The hot paths never form a full matrix-matrix product: multiplying an
accumulated matrix by a generator on the right touches one column and
costs two big-integer multiplications.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from statistics import median

from .errors import BudgetExceeded
from .rng import Rng, substream

MAX_EXHAUSTIVE_N = 24


@dataclass(frozen=True)
class Mat2:
    """Row-major exact integer 2x2 matrix."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1, 0, 0, 1)

    @classmethod
    def upper(cls, x: int) -> "Mat2":
        """A(x) = [[1, x], [0, 1]]."""
        return cls(1, x, 0, 1)

    @classmethod
    def lower(cls, y: int) -> "Mat2":
        """B(y) = [[1, 0], [y, 1]]."""
        return cls(1, 0, y, 1)

    def __mul__(self, o: "Mat2") -> "Mat2":
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __pow__(self, n: int) -> "Mat2":
        if n < 0:
            raise ValueError("negative powers not supported (stay in SL2(Z))")
        result = Mat2.identity()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def max_abs(self) -> int:
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


def as_bits(word) -> tuple[int, ...]:
    """Normalize a product word: '0110', b'01', or any 0/1 sequence."""
    if isinstance(word, (str, bytes)):
        word = word.decode() if isinstance(word, bytes) else word
        if not all(ch in "01" for ch in word):
            raise ValueError(f"product word must be over 0/1, got {word!r}")
        return tuple(int(ch) for ch in word)
    bits = tuple(word)
    if not all(b in (0, 1) for b in bits):
        raise ValueError("product word must be over 0/1")
    return bits


def eval_product(word, x: int, y: int) -> Mat2:
    """Exact product of the word over A(x), B(y); empty word gives I."""
    a, b, c, d = 1, 0, 0, 1
    for bit in as_bits(word):
        if bit:
            a += b * y
            c += d * y
        else:
            b += a * x
            d += c * x
    return Mat2(a, b, c, d)


def max_entry_exhaustive(n: int, x: int, y: int) -> tuple[int, tuple[int, ...]]:
    """Max |entry| over all 2^n products of length n, with the
    lexicographically least word attaining it.  Budgeted to n <= 24
    (depth-first with incremental products, so ~2^(n+1) cheap steps)."""
    if n < 0:
        raise ValueError(f"length must be >= 0, got {n}")
    if n > MAX_EXHAUSTIVE_N:
        raise BudgetExceeded(
            f"exhaustive search budgeted to n <= {MAX_EXHAUSTIVE_N}, got {n}"
        )
    best = -1
    best_word: tuple[int, ...] = ()
    path: list[int] = []

    def rec(depth: int, a: int, b: int, c: int, d: int) -> None:
        nonlocal best, best_word
        if depth == n:
            m = max(abs(a), abs(b), abs(c), abs(d))
            if m > best:
                best = m
                best_word = tuple(path)
            return
        path.append(0)
        rec(depth + 1, a, b + a * x, c, d + c * x)
        path[-1] = 1
        rec(depth + 1, a + b * y, b, c + d * y, d)
        path.pop()

    rec(0, 1, 0, 0, 1)
    return best, best_word


def _max_entry_table(n_max: int, x: int, y: int) -> list[int]:
    """max_entry_exhaustive's maxima for every length 0..n_max from a
    single depth-first pass (the length-n values fall out of the same
    tree walk, so this costs one search at n_max instead of n_max of
    them).  Same budget as the single-length search."""
    if n_max < 0:
        raise ValueError(f"length must be >= 0, got {n_max}")
    if n_max > MAX_EXHAUSTIVE_N:
        raise BudgetExceeded(
            f"exhaustive search budgeted to n <= {MAX_EXHAUSTIVE_N}, got {n_max}"
        )
    best = [0] * (n_max + 1)

    def rec(depth: int, a: int, b: int, c: int, d: int) -> None:
        m = max(abs(a), abs(b), abs(c), abs(d))
        if m > best[depth]:
            best[depth] = m
        if depth == n_max:
            return
        rec(depth + 1, a, b + a * x, c, d + c * x)
        rec(depth + 1, a + b * y, b, c + d * y, d)

    rec(0, 1, 0, 0, 1)
    return best


def pattern_power(pattern, n: int, x: int, y: int) -> Mat2:
    """(eval(pattern))^(n/len(pattern)); n must be a multiple of the
    pattern length."""
    bits = as_bits(pattern)
    if not bits:
        raise ValueError("pattern must be nonempty")
    if n < 0 or n % len(bits):
        raise ValueError(f"n={n} is not a multiple of the pattern length {len(bits)}")
    return eval_product(bits, x, y) ** (n // len(bits))


def growth_base(values, window: int = 10) -> float:
    """Per-step growth base from a table of (n, value): the log-difference
    slope across the last `window` steps, exp((ln v_j - ln v_i)/(n_j - n_i)).

    Values must be positive and the n strictly increasing; needs >= 2
    points.  Exact on geometric tables regardless of window.
    """
    pts = list(values)
    if len(pts) < 2:
        raise ValueError("need at least 2 points")
    if window < 1:
        raise ValueError("window must be >= 1")
    for (n0, v0), (n1, v1) in zip(pts, pts[1:]):
        if n1 <= n0:
            raise ValueError("lengths must be strictly increasing")
        if v0 <= 0 or v1 <= 0:
            raise ValueError("values must be positive")
    lo = max(0, len(pts) - 1 - window)
    n0, v0 = pts[lo]
    n1, v1 = pts[-1]
    return math.exp((math.log(v1) - math.log(v0)) / (n1 - n0))


@dataclass(frozen=True)
class GrowthStats:
    """Per-trial log10 of the max |entry| of random products, plus the
    geometric-mean growth base (None when n = 0)."""

    n: int
    trials: int
    x: int
    y: int
    seed: int
    log10_max: tuple[float, ...]
    mean_log10: float
    median_log10: float
    min_log10: float
    max_log10: float
    base: float | None


def random_product_stats(n: int, trials: int, x: int, y: int, seed: int) -> GrowthStats:
    """Uniform random products: trial i uses substream(seed, i) and draws
    one bit per step (low bit of each 64-bit output).  Exact products;
    log10 taken once per trial on the max |entry|."""
    if n < 0:
        raise ValueError(f"length must be >= 0, got {n}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    logs = []
    for i in range(trials):
        rng = Rng(substream(seed, i))
        a, b, c, d = 1, 0, 0, 1
        for _ in range(n):
            if rng.next64() & 1:
                a += b * y
                c += d * y
            else:
                b += a * x
                d += c * x
        logs.append(math.log10(max(abs(a), abs(b), abs(c), abs(d))))
    logs_t = tuple(logs)
    mean = sum(logs) / trials
    base = None if n == 0 else 10.0 ** (mean / n)
    return GrowthStats(
        n, trials, x, y, seed, logs_t,
        mean, median(logs), min(logs), max(logs), base,
    )


def exact_average_entries(n: int, x: int, y: int) -> tuple[Fraction, Fraction]:
    """Exact E[(a_n, b_n)]: mean over all 2^n products of the first row
    of the product, starting from row (1, 0).  Enumerates, so budgeted
    to n <= 20."""
    if n < 0:
        raise ValueError(f"length must be >= 0, got {n}")
    if n > 20:
        raise BudgetExceeded(f"exact averaging budgeted to n <= 20, got {n}")
    sum_a = 0
    sum_b = 0

    def rec(depth: int, a: int, b: int) -> None:
        nonlocal sum_a, sum_b
        if depth == n:
            sum_a += a
            sum_b += b
            return
        rec(depth + 1, a, b + a * x)   # row * A
        rec(depth + 1, a + b * y, b)   # row * B
    rec(0, 1, 0)
    return Fraction(sum_a, 2 ** n), Fraction(sum_b, 2 ** n)


def check_relation(u, v, x: int, y: int) -> bool:
    """Whether the two product words evaluate to the same matrix."""
    return eval_product(u, x, y) == eval_product(v, x, y)
