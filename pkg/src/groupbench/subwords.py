"""Exact counting of reduced words avoiding forbidden subwords, and of
reduced words whose Whitehead graph is not yet complete.

Both counters are linear-time-per-length dynamic programs:

* count_avoiding uses an Aho-Corasick automaton over the 2r letters,
  restricted to reduced transitions (a letter may not follow its own
  inverse) and with every pattern-completing transition deleted.  A
  state is (trie node, last letter); occupancy vectors hold exact big
  integers, so ratios against 2r(2r-1)^(L-1) can be formed without
  floating error at any length.

* count_incomplete_graph tracks (last letter, set of letter pairs seen
  as graph edges) for rank 2, 4 * 2^6 states; a word is counted while
  its external-free Whitehead graph still misses some pair.

Fractions of reduced words in either family decay geometrically;
decay_rate extracts the per-letter factor from a count table and
log_linear_fit measures slope quality on a log scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .words import Word, alphabet, count_reduced

from .whitehead import _pair_bits


@dataclass
class _Node:
    children: dict[int, int] = field(default_factory=dict)
    fail: int = 0
    depth: int = 0
    terminal: bool = False
    match: bool = False  # terminal here or anywhere along the fail chain


class AvoidanceAutomaton:
    """Counts reduced rank-r words containing none of the given patterns.

    Patterns must be nonempty reduced words (an unreduced pattern can
    never occur in a reduced word and is rejected as a likely mistake).
    Instances advance an internal occupancy vector one letter at a time;
    count(L) never recomputes lengths already reached.  Not thread-safe;
    use one instance per thread.
    """

    def __init__(self, rank: int, patterns: tuple[Word, ...]):
        self.rank = rank
        self.patterns = patterns
        self._delta = self._build(rank, patterns)
        self._counts: dict[tuple[int, int], int] = {(0, 0): 1}
        self._length = 0
        self._totals = [1]

    @property
    def n_states(self) -> int:
        return len(self._nodes) * (2 * self.rank + 1)

    def _build(self, rank, patterns):
        for p in patterns:
            p.validate()
            if p.rank > rank:
                raise ValueError(f"pattern {p} exceeds rank {rank}")
            if len(p) == 0:
                raise ValueError("empty pattern forbids every word")
            if not p.is_reduced:
                raise ValueError(f"pattern {p} is not reduced")
        nodes = [_Node()]
        for p in patterns:
            cur = 0
            for l in p.letters:
                nxt = nodes[cur].children.get(l)
                if nxt is None:
                    nodes.append(_Node(depth=nodes[cur].depth + 1))
                    nxt = len(nodes) - 1
                    nodes[cur].children[l] = nxt
                cur = nxt
            nodes[cur].terminal = True
        # breadth-first failure links and dense transitions
        ab = alphabet(rank)
        delta = [dict.fromkeys(ab, 0) for _ in nodes]
        queue = []
        for l, ch in nodes[0].children.items():
            nodes[ch].fail = 0
            nodes[ch].match = nodes[ch].terminal
            delta[0][l] = ch
            queue.append(ch)
        i = 0
        while i < len(queue):
            u = queue[i]
            i += 1
            for l in ab:
                ch = nodes[u].children.get(l)
                if ch is None:
                    delta[u][l] = delta[nodes[u].fail][l]
                else:
                    nodes[ch].fail = delta[nodes[u].fail][l]
                    nodes[ch].match = (
                        nodes[ch].terminal or nodes[nodes[ch].fail].match
                    )
                    delta[u][l] = ch
                    queue.append(ch)
        self._nodes = nodes
        return delta

    def _step(self) -> None:
        delta, nodes = self._delta, self._nodes
        nxt: dict[tuple[int, int], int] = {}
        for (node, last), c in self._counts.items():
            row = delta[node]
            for l in alphabet(self.rank):
                if l == -last:
                    continue
                to = row[l]
                if nodes[to].match:
                    continue
                key = (to, l)
                nxt[key] = nxt.get(key, 0) + c
        self._counts = nxt
        self._length += 1
        self._totals.append(sum(nxt.values()))

    def count(self, length: int) -> int:
        """Exact number of avoiding reduced words of the given length."""
        if length < 0:
            raise ValueError(f"length must be >= 0, got {length}")
        while self._length < length:
            self._step()
        return self._totals[length]


def build_avoidance_automaton(rank: int, patterns) -> AvoidanceAutomaton:
    if rank < 1:
        raise ValueError(f"rank must be >= 1, got {rank}")
    return AvoidanceAutomaton(rank, tuple(patterns))


def count_avoiding(automaton: AvoidanceAutomaton, length: int) -> int:
    return automaton.count(length)


def count_incomplete_graph(length: int, rank: int = 2) -> int:
    """Reduced rank-2 words of the given length whose external-free
    Whitehead graph misses at least one of the 6 vertex pairs.  Rank 2
    only: the coverage-mask state space is 2^(r(2r-1)) and already 2^15
    at rank 3, where an automaton-free approach stops being exact-cheap.
    """
    if rank != 2:
        raise ValueError("count_incomplete_graph supports rank 2 only")
    if length < 0:
        raise ValueError(f"length must be >= 0, got {length}")
    if length == 0:
        return 1
    bits = _pair_bits(2)
    ab = alphabet(2)
    full = (1 << 6) - 1
    # state: (last letter, coverage mask) -> count
    counts: dict[tuple[int, int], int] = {(l, 0): 1 for l in ab}
    for _ in range(length - 1):
        nxt: dict[tuple[int, int], int] = {}
        for (last, mask), c in counts.items():
            for l in ab:
                if l == -last:
                    continue
                key = (l, mask | bits[(last, -l)])
                nxt[key] = nxt.get(key, 0) + c
        counts = nxt
    return sum(c for (_, mask), c in counts.items() if mask != full)


def decay_rate(counts, base_counts, window: int = 8) -> Fraction:
    """Per-letter decay of counts[i]/base_counts[i], as the exact mean of
    the successive quotients over the last `window` steps.

    Both tables are indexed by consecutive lengths.  Needs >= 3 entries
    and positive values throughout (a zero base would divide by zero; a
    zero count means the family died out and has no decay rate).
    """
    counts = list(counts)
    base_counts = list(base_counts)
    if len(counts) != len(base_counts):
        raise ValueError("count tables differ in length")
    if len(counts) < 3:
        raise ValueError("need at least 3 entries to measure decay")
    if any(c <= 0 for c in counts) or any(b <= 0 for b in base_counts):
        raise ValueError("counts and base counts must be positive")
    ratios = [Fraction(c, b) for c, b in zip(counts, base_counts)]
    quots = [ratios[i + 1] / ratios[i] for i in range(len(ratios) - 1)]
    tail = quots[-window:] if window >= 1 else quots
    return sum(tail, Fraction(0)) / len(tail)


def log_linear_fit(points) -> tuple[float, float, float]:
    """Least squares of ln(y) on x: returns (slope, intercept, r_squared).

    Points are (x, y) with y > 0.  r_squared is 1.0 for a perfect fit,
    and defined as 1 when the ln(y) values are all equal.
    """
    pts = [(float(x), math.log(y)) for x, y in points]
    if len(pts) < 2:
        raise ValueError("need at least 2 points to fit")
    n = len(pts)
    mx = sum(x for x, _ in pts) / n
    my = sum(y for _, y in pts) / n
    sxx = sum((x - mx) ** 2 for x, _ in pts)
    if sxx == 0:
        raise ValueError("x values are all equal")
    sxy = sum((x - mx) * (y - my) for x, y in pts)
    slope = sxy / sxx
    intercept = my - slope * mx
    ss_res = sum((y - (slope * x + intercept)) ** 2 for x, y in pts)
    ss_tot = sum((y - my) ** 2 for _, y in pts)
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return slope, intercept, r2
