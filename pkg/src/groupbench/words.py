"""Words in a free group of rank r: text format, reduction, counting,
enumeration, and exact-uniform sampling.

A letter is a nonzero signed integer: ``i`` is the i-th generator,
``-i`` its inverse, ``1 <= i <= rank``.  A word is a tuple of letters.

Text format
-----------
For rank <= 26 a generator renders as a lowercase Latin letter and its
inverse as the uppercase letter (``a b A`` is x1 x2 x1^-1).  The long
form ``x3`` / ``X3`` is accepted for any rank (and is how words with
rank > 26 render).  ``1`` denotes the empty word.  Whitespace between
letters is optional on input.  A bare ``x``/``X`` is generator 24; the
digit form wins when digits follow.

Canonical letter order (used for lexicographic enumeration) is
``x1 < x2 < ... < xr < x1^-1 < ... < xr^-1``, i.e. ``a < b < A < B`` at
rank 2.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Iterator

from .errors import BudgetExceeded
from .rng import Rng

DEFAULT_ENUM_BUDGET = 5_000_000


class SamplingModel(Enum):
    """Distribution a sampler or enumerator ranges over."""

    ALL_WORDS = "all"
    REDUCED = "reduced"
    CYCLICALLY_REDUCED = "cyclic"

    @property
    def key(self) -> str:
        return self.value

    @classmethod
    def from_key(cls, key: str) -> "SamplingModel":
        for m in cls:
            if m.value == key:
                return m
        raise ValueError(f"unknown sampling model {key!r} (use all|reduced|cyclic)")


@dataclass(frozen=True, slots=True)
class Word:
    """A word over the generators of a free group of the given rank.

    Letters are trusted by the constructor (hot sampling loops build
    millions of these); use validate() at API boundaries.
    """

    rank: int
    letters: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return render_word(self)

    def validate(self) -> "Word":
        if self.rank < 1:
            raise ValueError(f"rank must be >= 1, got {self.rank}")
        for l in self.letters:
            if l == 0 or abs(l) > self.rank:
                raise ValueError(f"letter {l} out of range for rank {self.rank}")
        return self

    @property
    def is_reduced(self) -> bool:
        ls = self.letters
        return all(ls[i] != -ls[i + 1] for i in range(len(ls) - 1))

    @property
    def is_cyclically_reduced(self) -> bool:
        ls = self.letters
        if not self.is_reduced:
            return False
        return len(ls) < 2 or ls[-1] != -ls[0]

    def inverse(self) -> "Word":
        return Word(self.rank, tuple(-l for l in reversed(self.letters)))

    def __mul__(self, other: "Word") -> "Word":
        """Reduced product (free-group multiplication)."""
        if self.rank != other.rank:
            raise ValueError("cannot multiply words of different rank")
        return Word(self.rank, reduce_letters(self.letters + other.letters))


def alphabet(rank: int) -> tuple[int, ...]:
    """All 2r letters in canonical order."""
    return tuple(range(1, rank + 1)) + tuple(range(-1, -rank - 1, -1))


def reduce_letters(letters) -> tuple[int, ...]:
    """Freely reduce a letter sequence (stack cancellation)."""
    out: list[int] = []
    push = out.append
    for l in letters:
        if out and out[-1] == -l:
            out.pop()
        else:
            push(l)
    return tuple(out)


def reduce_word(w: Word) -> Word:
    """The unique reduced word equal to w in the free group."""
    return Word(w.rank, reduce_letters(w.letters))


def cyclic_reduce_letters(letters) -> tuple[int, ...]:
    ls = reduce_letters(letters)
    i, j = 0, len(ls)
    while j - i >= 2 and ls[i] == -ls[j - 1]:
        i += 1
        j -= 1
    return ls[i:j]


def cyclic_reduce(w: Word) -> Word:
    """Shortest word conjugate to w: reduce, then strip inverse end pairs.

    The result is cyclically reduced and unique up to rotation; this
    returns the particular representative obtained by peeling ends off
    the reduced form of w.
    """
    return Word(w.rank, cyclic_reduce_letters(w.letters))


# ---------------------------------------------------------------------------
# counting


def count_all(rank: int, n: int) -> int:
    _check_rn(rank, n)
    return (2 * rank) ** n


def count_reduced(rank: int, n: int) -> int:
    """Number of reduced words of length n: 2r(2r-1)^(n-1), 1 for n=0."""
    _check_rn(rank, n)
    if n == 0:
        return 1
    return 2 * rank * (2 * rank - 1) ** (n - 1)


def count_cyclically_reduced(rank: int, n: int) -> int:
    """Closed-walk count on the non-inverse letter graph.

    For n >= 2 this is (2r-1)^n + (r-1)(-1)^n + r (trace of the n-th
    power of the adjacency matrix J - P); small n are special because
    the wraparound constraint is vacuous there.
    """
    _check_rn(rank, n)
    if n == 0:
        return 1
    if n == 1:
        return 2 * rank
    return (2 * rank - 1) ** n + (rank - 1) * (-1) ** n + rank


def _check_rn(rank: int, n: int) -> None:
    if rank < 1:
        raise ValueError(f"rank must be >= 1, got {rank}")
    if n < 0:
        raise ValueError(f"length must be >= 0, got {n}")


# ---------------------------------------------------------------------------
# sampling

def sample_word(rank: int, n: int, model: SamplingModel, seed: int) -> Word:
    """Draw one word of length n exactly uniformly under the given model.

    Deterministic: the draw sequence is fixed (one SplitMix64 draw per
    letter; the reduced sampler draws the first letter from [0, 2r) and
    every later letter from [0, 2r-1) skipping the inverse of its
    predecessor; the cyclically reduced sampler redraws whole reduced
    words until the ends are not mutually inverse, which is exact
    rejection from the uniform reduced distribution).
    """
    _check_rn(rank, n)
    rng = Rng(seed)
    ab = alphabet(rank)
    if model is SamplingModel.ALL_WORDS:
        return Word(rank, tuple(ab[i] for i in rng.block_below(2 * rank, n)))
    if model is SamplingModel.REDUCED:
        return Word(rank, _draw_reduced(rng, rank, n))
    if model is SamplingModel.CYCLICALLY_REDUCED:
        while True:
            ls = _draw_reduced(rng, rank, n)
            if n < 2 or ls[-1] != -ls[0]:
                return Word(rank, ls)
    raise ValueError(f"unknown sampling model {model!r}")


def _draw_reduced(rng: Rng, rank: int, n: int) -> tuple[int, ...]:
    if n == 0:
        return ()
    two_r = 2 * rank
    ab = alphabet(rank)
    idx = rng.below(two_r)
    out = [ab[idx]]
    push = out.append
    for t in rng.block_below(two_r - 1, n - 1):
        forbidden = (idx + rank) % two_r  # index of the inverse letter
        idx = t if t < forbidden else t + 1
        push(ab[idx])
    return tuple(out)


# ---------------------------------------------------------------------------
# enumeration

def enumerate_words(
    rank: int,
    n: int,
    model: SamplingModel,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> Iterator[Word]:
    """Yield every length-n word under the model in lexicographic order
    (canonical letter order).  Refuses upfront if the count exceeds the
    budget.
    """
    _check_rn(rank, n)
    total = {
        SamplingModel.ALL_WORDS: count_all,
        SamplingModel.REDUCED: count_reduced,
        SamplingModel.CYCLICALLY_REDUCED: count_cyclically_reduced,
    }[model](rank, n)
    if total > budget:
        raise BudgetExceeded(
            f"enumeration of {total} words (rank {rank}, length {n}, "
            f"{model.key}) exceeds budget {budget}"
        )
    if model is SamplingModel.ALL_WORDS:
        for ls in product(alphabet(rank), repeat=n):
            yield Word(rank, ls)
        return
    if n == 0:
        yield Word(rank, ())
        return
    cyclic = model is SamplingModel.CYCLICALLY_REDUCED
    for ls in _reduced_tuples(rank, n):
        if cyclic and n >= 2 and ls[-1] == -ls[0]:
            continue
        yield Word(rank, ls)


def _reduced_tuples(rank: int, n: int) -> Iterator[tuple[int, ...]]:
    ab = alphabet(rank)
    prefix: list[int] = []

    def rec() -> Iterator[tuple[int, ...]]:
        if len(prefix) == n:
            yield tuple(prefix)
            return
        last = prefix[-1] if prefix else 0
        for l in ab:
            if l == -last:
                continue
            prefix.append(l)
            yield from rec()
            prefix.pop()

    yield from rec()


# ---------------------------------------------------------------------------
# text format

_TOKEN = re.compile(r"[xX]\d+|[a-zA-Z]")
_VALID = re.compile(r"(?:\s*(?:[xX]\d+|[a-zA-Z]))+\s*\Z")


def parse_word(text: str, rank: int | None = None) -> Word:
    """Parse the text format described in the module docstring.

    With rank=None the rank is inferred as the largest generator index
    used (the empty word then has rank 1).
    """
    stripped = text.strip()
    if stripped in ("", "1"):
        return Word(rank if rank is not None else 1, ())
    if not _VALID.match(text):
        raise ValueError(f"cannot parse word {text!r}")
    letters = []
    for tok in _TOKEN.findall(text):
        if len(tok) > 1:
            idx = int(tok[1:])
            if idx < 1:
                raise ValueError(f"generator index must be >= 1 in {tok!r}")
            letters.append(idx if tok[0] == "x" else -idx)
        elif tok.islower():
            letters.append(ord(tok) - ord("a") + 1)
        else:
            letters.append(-(ord(tok) - ord("A") + 1))
    used = max(abs(l) for l in letters)
    if rank is None:
        rank = used
    elif used > rank:
        raise ValueError(f"word {text!r} uses generator x{used} but rank is {rank}")
    return Word(rank, tuple(letters))


def render_word(w: Word) -> str:
    """Inverse of parse_word: compact letters for rank <= 26, else x-form."""
    if not w.letters:
        return "1"
    if w.rank <= 26:
        return "".join(
            chr(ord("a") + l - 1) if l > 0 else chr(ord("A") - l - 1)
            for l in w.letters
        )
    return " ".join(f"x{l}" if l > 0 else f"X{-l}" for l in w.letters)
