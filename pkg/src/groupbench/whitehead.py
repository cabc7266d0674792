"""Primitivity testing in free groups via Whitehead graphs and moves.

A word w is primitive when some automorphism of the free group maps it to
the first generator.  Two classical tools are combined here:

* Graph criterion: in the Whitehead graph of a cyclically reduced w (one
  vertex per letter x_i^{+-1}; one edge {u, v^-1} per adjacent pair u v,
  plus the wraparound edge {last, first^-1}), a primitive word of length
  > 2 always leaves an isolated edge or a cut vertex.  Consequently if
  some subword's (external-edge-free) graph is already complete, w cannot
  be primitive.  The fast check scans prefixes and stops at the first
  complete one.

* Descent: the finitely many Whitehead moves of the second kind either
  fix the minimal cyclic length or allow strictly decreasing it; greedy
  descent therefore lands on an orbit-minimal word, and w is primitive
  exactly when that minimum has cyclic length 1.

The composite test runs the cheap prefix scan first and falls back to
descent, recording which stage decided.

Cost accounting counts the work of the algorithms themselves (letters
read by the scan, edges inserted, moves applied, letters rewritten by
substitutions).  Normalizing the input to cyclically reduced form is
treated as precondition repair and is not charged.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations, product

from .errors import BudgetExceeded
from .words import Word, cyclic_reduce_letters, reduce_letters

MAX_AUTO_RANK = 5  # 2r * (2^(2r-2) - 1) moves: 2550 at rank 5, too many beyond
DECIDED_FAST = "fast_check"
DECIDED_WHITEHEAD = "whitehead"


@dataclass
class Cost:
    """Work counters; total() is the scalar used by the benchmarks."""

    letters_read: int = 0
    edge_updates: int = 0
    auto_applications: int = 0
    letters_rewritten: int = 0

    def total(self) -> int:
        return (
            self.letters_read
            + self.edge_updates
            + self.auto_applications
            + self.letters_rewritten
        )

    def __add__(self, other: "Cost") -> "Cost":
        return Cost(
            self.letters_read + other.letters_read,
            self.edge_updates + other.edge_updates,
            self.auto_applications + other.auto_applications,
            self.letters_rewritten + other.letters_rewritten,
        )


@dataclass(frozen=True)
class GraphVerdict:
    complete: bool
    has_isolated_edge: bool
    has_cut_vertex: bool


@dataclass(frozen=True)
class WhiteheadGraph:
    """Edge multiset over the 2r letter vertices (edges sorted, multiset
    as a sorted tuple of sorted pairs)."""

    rank: int
    edges: tuple[tuple[int, int], ...]
    external: bool

    def degrees(self) -> dict[int, int]:
        deg = {v: 0 for v in _vertices(self.rank)}
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg


def _vertices(rank: int) -> tuple[int, ...]:
    return tuple(range(1, rank + 1)) + tuple(range(-1, -rank - 1, -1))


def _vertex_key(l: int, rank: int) -> int:
    return l - 1 if l > 0 else rank - l - 1


def _edge(u: int, v: int, rank: int) -> tuple[int, int]:
    return (u, v) if _vertex_key(u, rank) <= _vertex_key(v, rank) else (v, u)


@lru_cache(maxsize=None)
def _pair_bits(rank: int) -> dict[tuple[int, int], int]:
    """Bit index for every unordered pair of distinct vertices (both orders)."""
    vs = _vertices(rank)
    bits: dict[tuple[int, int], int] = {}
    for i, (p, q) in enumerate(combinations(vs, 2)):
        bits[(p, q)] = 1 << i
        bits[(q, p)] = 1 << i
    return bits


def whitehead_graph(w: Word, include_external: bool = False) -> WhiteheadGraph:
    """Graph of a reduced word; include_external adds the wraparound edge
    and requires w cyclically reduced."""
    w.validate()
    if not w.is_reduced:
        raise ValueError("whitehead_graph needs a reduced word")
    if include_external and not w.is_cyclically_reduced:
        raise ValueError("external edge needs a cyclically reduced word")
    r, ls = w.rank, w.letters
    edges = [_edge(ls[i], -ls[i + 1], r) for i in range(len(ls) - 1)]
    if include_external and ls:
        edges.append(_edge(ls[-1], -ls[0], r))
    edges.sort(key=lambda e: (_vertex_key(e[0], r), _vertex_key(e[1], r)))
    return WhiteheadGraph(r, tuple(edges), include_external)


def analyze_graph(g: WhiteheadGraph) -> GraphVerdict:
    """Completeness, isolated edges (both endpoints of total degree one),
    and cut vertices (removal increases the component count, isolated
    vertices counting as components)."""
    r = g.rank
    vs = _vertices(r)
    distinct = {frozenset(e) for e in g.edges}
    complete = len(distinct) == r * (2 * r - 1)
    deg = g.degrees()
    isolated = any(deg[u] == 1 and deg[v] == 1 for u, v in g.edges)
    base = _n_components(vs, g.edges)
    cut = any(
        _n_components(tuple(v for v in vs if v != x),
                      tuple(e for e in g.edges if x not in e)) > base
        for x in vs
    )
    return GraphVerdict(complete, isolated, cut)


def _n_components(vs: tuple[int, ...], edges) -> int:
    parent = {v: v for v in vs}

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    return len({find(v) for v in vs})


# ---------------------------------------------------------------------------
# Whitehead moves


@dataclass(frozen=True)
class WhiteheadAutomorphism:
    """Move of the second kind, given by a multiplier letter a and a
    member set A with a in A, a^-1 not in A.

    Action: a and a^-1 are fixed; any other letter y gains the prefix
    a^-1 when y^-1 is in A and the suffix a when y is in A.
    """

    rank: int
    multiplier: int
    members: frozenset[int]

    def validate(self) -> "WhiteheadAutomorphism":
        a, A = self.multiplier, self.members
        letters = set(_vertices(self.rank))
        if a not in letters or not A <= letters:
            raise ValueError("multiplier or members out of range")
        if a not in A or -a in A:
            raise ValueError("need multiplier in members and its inverse out")
        if A == {a}:
            raise ValueError("member set {a} is the identity move")
        return self

    def letter_map(self) -> dict[int, tuple[int, ...]]:
        a, A = self.multiplier, self.members
        m: dict[int, tuple[int, ...]] = {a: (a,), -a: (-a,)}
        for y in _vertices(self.rank):
            if y in (a, -a):
                continue
            img: tuple[int, ...] = (y,)
            if -y in A:
                img = (-a,) + img
            if y in A:
                img = img + (a,)
            m[y] = img
        return m

    def inverse(self) -> "WhiteheadAutomorphism":
        a, A = self.multiplier, self.members
        return WhiteheadAutomorphism(
            self.rank, -a, frozenset({-a} | (A - {a}))
        )


@dataclass(frozen=True)
class LetterPermutation:
    """Move of the first kind: a signed permutation of the generators.
    images[i] is the image letter of generator i+1."""

    rank: int
    images: tuple[int, ...]

    def letter_map(self) -> dict[int, tuple[int, ...]]:
        m: dict[int, tuple[int, ...]] = {}
        for g, img in enumerate(self.images, start=1):
            m[g] = (img,)
            m[-g] = (-img,)
        return m


def enumerate_whitehead_autos(rank: int) -> list[WhiteheadAutomorphism]:
    """All 2r(2^(2r-2) - 1) moves of the second kind, in a fixed order:
    multipliers in canonical letter order, member sets by ascending
    bitmask over the remaining letters."""
    return list(_autos(rank))


@lru_cache(maxsize=None)
def _autos(rank: int) -> tuple[WhiteheadAutomorphism, ...]:
    if rank < 1:
        raise ValueError(f"rank must be >= 1, got {rank}")
    if rank > MAX_AUTO_RANK:
        raise BudgetExceeded(
            f"move enumeration is budgeted to rank <= {MAX_AUTO_RANK}, got {rank}"
        )
    out = []
    for a in _vertices(rank):
        rest = [l for l in _vertices(rank) if l not in (a, -a)]
        for mask in range(1, 1 << len(rest)):
            members = frozenset(
                [a] + [l for i, l in enumerate(rest) if mask >> i & 1]
            )
            out.append(WhiteheadAutomorphism(rank, a, members))
    return tuple(out)


def enumerate_letter_permutations(rank: int) -> list[LetterPermutation]:
    """All non-identity signed permutations (2^r * r! - 1 of them)."""
    out = []
    for perm in permutations(range(1, rank + 1)):
        for signs in product((1, -1), repeat=rank):
            images = tuple(s * g for g, s in zip(perm, signs))
            if images != tuple(range(1, rank + 1)):
                out.append(LetterPermutation(rank, images))
    return out


def apply_auto(t: WhiteheadAutomorphism | LetterPermutation, w: Word) -> Word:
    """Image of a reduced word under a move, freely reduced."""
    w.validate()
    if not w.is_reduced:
        raise ValueError("apply_auto needs a reduced word")
    if t.rank != w.rank:
        raise ValueError("rank mismatch between move and word")
    if isinstance(t, WhiteheadAutomorphism):
        t.validate()
    reduced, _ = _apply_map(t.letter_map(), w.letters)
    return Word(w.rank, reduced)


def _apply_map(m: dict[int, tuple[int, ...]], ls) -> tuple[tuple[int, ...], int]:
    """Substitute and freely reduce; also report the pre-reduction length."""
    out: list[int] = []
    raw = 0
    for l in ls:
        img = m[l]
        raw += len(img)
        for x in img:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out), raw


# ---------------------------------------------------------------------------
# primitivity tests


@dataclass(frozen=True)
class PrimitivityVerdict:
    primitive: bool
    decided_by: str  # DECIDED_FAST or DECIDED_WHITEHEAD
    cost: Cost = field(compare=False)


@dataclass(frozen=True)
class FastCheckResult:
    """not_primitive=True is definitive; False means inconclusive."""

    not_primitive: bool
    prefix_len: int | None
    cost: Cost = field(compare=False)


def fast_check(w: Word) -> FastCheckResult:
    """Prefix scan: stop at the first prefix whose external-free graph is
    complete (such a subword certifies non-primitivity).  Requires a
    cyclically reduced word of length > 2."""
    w.validate()
    if not w.is_cyclically_reduced:
        raise ValueError("fast_check needs a cyclically reduced word")
    if len(w) <= 2:
        raise ValueError("fast_check needs length > 2 (short words carry no "
                         "complete subgraph)")
    cost = Cost()
    k = _fast_scan(w.rank, w.letters, cost)
    return FastCheckResult(k is not None, k, cost)


def _fast_scan(rank: int, ls, cost: Cost) -> int | None:
    bits = _pair_bits(rank)
    full = (1 << (rank * (2 * rank - 1))) - 1
    mask = 0
    cost.letters_read += 1  # first letter
    prev = ls[0]
    for i in range(1, len(ls)):
        cur = ls[i]
        cost.letters_read += 1
        cost.edge_updates += 1
        mask |= bits[(prev, -cur)]
        if mask == full:
            return i + 1
        prev = cur
    return None


def primitivity_whitehead(w: Word) -> PrimitivityVerdict:
    """Greedy descent to an orbit-minimal cyclic word; primitive iff the
    minimum has length 1."""
    w.validate()
    cost = Cost()
    ls = cyclic_reduce_letters(w.letters)
    return PrimitivityVerdict(_descend(w.rank, ls, cost), DECIDED_WHITEHEAD, cost)


def _descend(rank: int, ls, cost: Cost) -> bool:
    if len(ls) <= 1:
        return len(ls) == 1
    maps = _auto_maps(rank)
    cur = ls
    improved = True
    while improved:
        improved = False
        for m in maps:
            img, raw = _apply_map(m, cur)
            cost.auto_applications += 1
            cost.letters_rewritten += raw
            img = cyclic_reduce_letters(img)
            if len(img) < len(cur):
                cur = img
                if len(cur) <= 1:
                    return True
                improved = True
                break
    return False


@lru_cache(maxsize=None)
def _auto_maps(rank: int) -> tuple[dict[int, tuple[int, ...]], ...]:
    return tuple(t.letter_map() for t in _autos(rank))


def primitivity_composite(w: Word) -> PrimitivityVerdict:
    """Prefix scan first, descent only when the scan is inconclusive.
    Words of cyclic length <= 2 skip straight to descent."""
    w.validate()
    cost = Cost()
    ls = cyclic_reduce_letters(w.letters)
    if len(ls) > 2:
        k = _fast_scan(w.rank, ls, cost)
        if k is not None:
            return PrimitivityVerdict(False, DECIDED_FAST, cost)
    return PrimitivityVerdict(_descend(w.rank, ls, cost), DECIDED_WHITEHEAD, cost)


# ---------------------------------------------------------------------------
# exhaustive orbit oracle


def primitive_orbit_oracle(rank: int, max_len: int) -> set[Word]:
    """Every cyclically reduced primitive word of length <= max_len, by
    breadth-first search from x1 under all Whitehead moves of both kinds,
    pruning images longer than max_len.

    Sound because moves are automorphisms and x1 is primitive; complete
    because peak reduction provides, for any primitive w, a move chain
    from x1 to w whose cyclic lengths never exceed |w|.  Budgeted to
    rank 2 and max_len 12 (the class count roughly triples per letter).
    """
    if rank < 1:
        raise ValueError(f"rank must be >= 1, got {rank}")
    if rank > 2 or max_len > 12:
        raise BudgetExceeded(
            f"orbit oracle budgeted to rank <= 2 and max_len <= 12, "
            f"got rank {rank}, max_len {max_len}"
        )
    if max_len < 1:
        return set()
    maps = list(_auto_maps(rank))
    maps += [t.letter_map() for t in enumerate_letter_permutations(rank)]

    seen: set[tuple[int, ...]] = set()
    frontier = [_min_rotation((1,))]
    seen.add(frontier[0])
    while frontier:
        nxt = []
        for rep in frontier:
            for m in maps:
                img, _ = _apply_map(m, rep)
                img = cyclic_reduce_letters(img)
                if len(img) > max_len:
                    continue
                canon = _min_rotation(img)
                if canon not in seen:
                    seen.add(canon)
                    nxt.append(canon)
        frontier = nxt
    out: set[Word] = set()
    for rep in seen:
        for i in range(len(rep)):
            out.add(Word(rank, rep[i:] + rep[:i]))
    return out


def _min_rotation(ls: tuple[int, ...]) -> tuple[int, ...]:
    if len(ls) <= 1:
        return ls
    return min(ls[i:] + ls[:i] for i in range(len(ls)))
