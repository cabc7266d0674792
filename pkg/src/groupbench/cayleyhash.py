"""Hashing bit strings into SL2(F_p) via A(x), B(y), and estimating how
long inputs can get before distinct bit strings can share a digest.

Over the integers, products of A(x), B(y) with x, y >= 1 are entrywise
nonnegative and the monoid they generate is free, so two distinct bit
words give products differing in some entry.  If every length-n product
keeps all entries below p, reduction mod p cannot create a collision
between words of length <= n.  collision_free_bound finds the largest
such n: exhaustively while 2^n is affordable, then (the maxima are
attained by alternating-type patterns, empirically) by extrapolating
with alternating powers, flagged as pattern_based.  For mixed-sign
pairs no entrywise monotonicity is available and only the heuristic
length log_s(p) is reported (s = measured per-step growth base of the
max |entry|).

shortest_collision_bfs finds the true first collision length by
breadth-first search over digest values level by level, budgeted by
node expansions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BudgetExceeded
from .matgrowth import (
    MAX_EXHAUSTIVE_N,
    _max_entry_table,
    eval_product,
    growth_base,
    pattern_power,
)

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime_u64(p: int) -> bool:
    """Deterministic Miller-Rabin, valid for p < 2^64 (fixed witness set
    covers that whole range)."""
    if p >= 1 << 64:
        raise ValueError("primality test supports p < 2**64 only")
    if p < 2:
        return False
    for small in _MR_WITNESSES:
        if p == small:
            return True
        if p % small == 0:
            return False
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        v = pow(a, d, p)
        if v in (1, p - 1):
            continue
        for _ in range(s - 1):
            v = v * v % p
            if v == p - 1:
                break
        else:
            return False
    return True


def _check_params(p: int, x: int, y: int) -> None:
    if not is_prime_u64(p):
        raise ValueError(f"modulus {p} is not prime")
    if p == 2:
        raise ValueError("modulus must be an odd prime")
    if x % p == 0 or y % p == 0:
        raise ValueError(f"p={p} divides a generator parameter (x={x}, y={y}); "
                         "the generators degenerate mod p")


@dataclass(frozen=True)
class Mat2ModP:
    """2x2 matrix over F_p, row-major, entries already reduced."""

    a: int
    b: int
    c: int
    d: int
    p: int

    @classmethod
    def identity(cls, p: int) -> "Mat2ModP":
        return cls(1 % p, 0, 0, 1 % p, p)

    def __mul__(self, o: "Mat2ModP") -> "Mat2ModP":
        if self.p != o.p:
            raise ValueError("modulus mismatch")
        p = self.p
        return Mat2ModP(
            (self.a * o.a + self.b * o.c) % p,
            (self.a * o.b + self.b * o.d) % p,
            (self.c * o.a + self.d * o.c) % p,
            (self.c * o.b + self.d * o.d) % p,
            p,
        )

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


def hash_bits(word, p: int, x: int, y: int) -> Mat2ModP:
    """Digest: the product of A(x)/B(y) mod p along the bits (0 -> A)."""
    from .matgrowth import as_bits

    _check_params(p, x, y)
    a, b, c, d = 1, 0, 0, 1
    xp = x % p
    yp = y % p
    for bit in as_bits(word):
        if bit:
            a = (a + b * yp) % p
            c = (c + d * yp) % p
        else:
            b = (b + a * xp) % p
            d = (d + c * xp) % p
    return Mat2ModP(a, b, c, d, p)


@dataclass(frozen=True)
class GirthReport:
    """Collision-freeness report for given (p, x, y).

    exact_bound N: no two distinct equal-length words of length <= N
    share a digest (None when no certification is possible, i.e. mixed
    signs).  pattern_based marks N values that relied on alternating
    pattern extrapolation beyond the exhaustive budget.  heuristic_bound
    is log_s(p) for the measured growth base s.
    """

    p: int
    x: int
    y: int
    base: float
    exact_bound: int | None
    heuristic_bound: float
    pattern_based: bool


def _alternating_max(n: int, x: int, y: int) -> int:
    if n % 2 == 0:
        cands = (pattern_power("01", n, x, y), pattern_power("10", n, x, y))
    else:
        cands = (
            eval_product("0", x, y) * pattern_power("10", n - 1, x, y),
            eval_product("1", x, y) * pattern_power("01", n - 1, x, y),
        )
    return max(m.max_abs() for m in cands)


def collision_free_bound(p: int, x: int, y: int) -> GirthReport:
    """See GirthReport.  For x, y >= 1 the certification is: max |entry|
    over length-n products is nondecreasing in n, so N = (first n whose
    max entry reaches p) - 1."""
    _check_params(p, x, y)
    if x <= 0 or y <= 0:
        # no entrywise monotonicity (or degenerate generator): heuristic only
        maxima = _max_entry_table(14, x, y)
        table = [(n, maxima[n]) for n in range(1, 15)]
        base = growth_base(table)
        heuristic = math.log(p) / math.log(base) if base > 1 else math.inf
        return GirthReport(p, x, y, base, None, heuristic, False)

    # deepen in stages so small moduli never pay for the full-depth
    # search (each stage redoes the shallower tree, but the schedule is
    # geometric enough that the overhead stays under ~15%)
    schedule = [d for d in (14, 18, 21) if d < MAX_EXHAUSTIVE_N]
    schedule.append(MAX_EXHAUSTIVE_N)
    for depth in schedule:
        maxima = _max_entry_table(depth, x, y)
        if maxima[depth] >= p:
            break

    table: list[tuple[int, int]] = []
    exact_bound = None
    pattern_based = False
    for n in range(1, depth + 1):
        table.append((n, maxima[n]))
        if maxima[n] >= p:
            exact_bound = n - 1
            break
    else:
        n = depth
        while True:
            n += 1
            m = _alternating_max(n, x, y)
            pattern_based = True
            table.append((n, m))
            if m >= p:
                exact_bound = n - 1
                break
    # pad the table for a stable base estimate when p is tiny
    while len(table) < 14:
        n += 1
        table.append((n, maxima[n] if n <= depth else _alternating_max(n, x, y)))
    base = growth_base(table)
    heuristic = math.log(p) / math.log(base)
    return GirthReport(p, x, y, base, exact_bound, heuristic, pattern_based)


def shortest_collision_bfs(
    p: int, x: int, y: int, max_len: int, budget: int = 4_000_000
) -> tuple[int, tuple[tuple[int, ...], tuple[int, ...]]] | None:
    """Smallest length at which two distinct bit words share a digest,
    with a witness pair, or None if no collision occurs up to max_len.

    Explores all 2^len digests level by level; refuses (BudgetExceeded)
    once the number of node expansions would pass the budget, which in
    practice caps max_len around 20 and, for small p, stops early once
    every level is saturated at |SL2(F_p)| ~ p^3 states.
    """
    _check_params(p, x, y)
    if max_len < 1:
        raise ValueError(f"max_len must be >= 1, got {max_len}")
    xp, yp = x % p, y % p
    level: dict[tuple[int, int, int, int], tuple[int, ...]] = {
        (1 % p, 0, 0, 1 % p): ()
    }
    expansions = 0
    for length in range(1, max_len + 1):
        expansions += 2 * len(level)
        if expansions > budget:
            raise BudgetExceeded(
                f"collision search would exceed {budget} node expansions "
                f"at length {length}"
            )
        nxt: dict[tuple[int, int, int, int], tuple[int, ...]] = {}
        for (a, b, c, d), word in level.items():
            succ_a = (a, (b + a * xp) % p, c, (d + c * xp) % p)   # append 0
            succ_b = ((a + b * yp) % p, b, (c + d * yp) % p, d)   # append 1
            for bit, key in ((0, succ_a), (1, succ_b)):
                w2 = word + (bit,)
                if key in nxt:
                    return length, (nxt[key], w2)
                nxt[key] = w2
        level = nxt
    return None
