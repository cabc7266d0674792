from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupbench.errors import BudgetExceeded
from groupbench.rng import substream
from groupbench.whitehead import (
    DECIDED_FAST,
    DECIDED_WHITEHEAD,
    LetterPermutation,
    WhiteheadAutomorphism,
    analyze_graph,
    apply_auto,
    enumerate_letter_permutations,
    enumerate_whitehead_autos,
    fast_check,
    primitive_orbit_oracle,
    primitivity_composite,
    primitivity_whitehead,
    whitehead_graph,
)
from groupbench.words import (
    SamplingModel,
    Word,
    cyclic_reduce,
    enumerate_words,
    parse_word,
    reduce_word,
    sample_word,
)

CYC = SamplingModel.CYCLICALLY_REDUCED


def cyc_words(rank: int, min_size=0, max_size=16):
    syms = [l for i in range(1, rank + 1) for l in (i, -i)]
    return (
        st.lists(st.sampled_from(syms), min_size=min_size, max_size=max_size)
        .map(lambda ls: cyclic_reduce(Word(rank, tuple(ls))))
    )


# --- graphs ----------------------------------------------------------------

def test_graph_of_ab_with_external():
    g = whitehead_graph(parse_word("ab", 2), include_external=True)
    assert g.edges == ((1, -2), (2, -1))
    v = analyze_graph(g)
    assert v.has_isolated_edge and not v.complete


def test_graph_of_aabba():
    g = whitehead_graph(parse_word("aabba", 2))
    assert set(map(frozenset, g.edges)) == {
        frozenset({1, -1}), frozenset({1, -2}),
        frozenset({2, -2}), frozenset({2, -1}),
    }
    v = analyze_graph(g)
    assert not v.complete  # misses {x1,x2} and {x1^-1,x2^-1}


def test_graph_empty_and_single_letter():
    assert whitehead_graph(parse_word("1", 2)).edges == ()
    g = whitehead_graph(parse_word("a", 2), include_external=True)
    assert g.edges == ((1, -1),)


def test_graph_validation():
    with pytest.raises(ValueError):
        whitehead_graph(Word(2, (1, -1)))
    with pytest.raises(ValueError):
        whitehead_graph(Word(2, (1, 2, -1)), include_external=True)


def test_graph_edge_counts():
    # n - 1 internal edges, n with the external edge
    for s in ["ab", "aab", "abAbb", "BAba"]:
        w = cyclic_reduce(parse_word(s, 2))
        assert len(whitehead_graph(w).edges) == len(w) - 1
        assert len(whitehead_graph(w, include_external=True).edges) == len(w)


def test_complete_graph_examples():
    # x1^2 x2^2 x1^-1 x2^-1 style words complete the rank-2 graph quickly
    for s in ["aabbAB", "abaBAB"]:
        w = parse_word(s, 2)
        v = analyze_graph(whitehead_graph(w, include_external=True))
        if v.complete:
            assert not v.has_isolated_edge and not v.has_cut_vertex


def test_complete_implies_no_witness_structures():
    # scan every cyclically reduced word of length <= 8: completeness of
    # the external graph always rules out isolated edges and cut vertices
    for n in range(3, 9):
        for w in enumerate_words(2, n, CYC):
            v = analyze_graph(whitehead_graph(w, include_external=True))
            if v.complete:
                assert not v.has_isolated_edge
                assert not v.has_cut_vertex


def test_cut_vertex_example():
    # aab with external edge: removing x1 disconnects x2 from x2^-1's side
    v = analyze_graph(whitehead_graph(parse_word("aab", 2), include_external=True))
    assert v.has_cut_vertex


@given(cyc_words(2, min_size=2))
@settings(max_examples=150)
def test_prefix_edges_are_submultiset(w):
    if len(w) < 3:
        return
    prefix = Word(2, w.letters[: len(w) - 1])
    small = list(whitehead_graph(prefix).edges)
    big = list(whitehead_graph(Word(2, w.letters)).edges)
    for e in small:
        big.remove(e)  # raises if not contained with multiplicity


# --- moves -----------------------------------------------------------------

def test_enumerate_counts():
    assert len(enumerate_whitehead_autos(1)) == 0
    assert len(enumerate_whitehead_autos(2)) == 12
    assert len(enumerate_whitehead_autos(3)) == 90
    assert len(enumerate_letter_permutations(2)) == 7


def test_enumerate_matches_independent_construction():
    # rebuild the rank-2 move set from the definition
    letters = (1, 2, -1, -2)
    expected = set()
    for a in letters:
        rest = [l for l in letters if l not in (a, -a)]
        for bits in range(1, 1 << len(rest)):
            members = frozenset([a] + [l for i, l in enumerate(rest) if bits >> i & 1])
            expected.add((a, members))
    got = {(t.multiplier, t.members) for t in enumerate_whitehead_autos(2)}
    assert got == expected


def test_enumerate_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_whitehead_autos(6)


def test_move_validation():
    with pytest.raises(ValueError):
        WhiteheadAutomorphism(2, 1, frozenset({2})).validate()     # a not in A
    with pytest.raises(ValueError):
        WhiteheadAutomorphism(2, 1, frozenset({1, -1})).validate()  # a^-1 in A
    with pytest.raises(ValueError):
        WhiteheadAutomorphism(2, 1, frozenset({1})).validate()      # identity
    with pytest.raises(ValueError):
        WhiteheadAutomorphism(2, 3, frozenset({3, 2})).validate()   # out of range


def test_letter_map_cases():
    t = WhiteheadAutomorphism(2, 1, frozenset({1, -2}))
    m = t.letter_map()
    assert m[1] == (1,) and m[-1] == (-1,)
    assert m[2] == (-1, 2)      # 2^-1 in A: prefix a^-1
    assert m[-2] == (-2, 1)     # -2 in A: suffix a
    both = WhiteheadAutomorphism(2, 1, frozenset({1, 2, -2})).letter_map()
    assert both[2] == (-1, 2, 1)
    # a letter with neither sign in A is fixed (needs rank 3: at rank 2
    # any valid move touches the other generator)
    neither = WhiteheadAutomorphism(3, 1, frozenset({1, 2})).letter_map()
    assert neither[3] == (3,) and neither[-3] == (-3,)


def test_apply_auto_descends_spec_style_word():
    t = WhiteheadAutomorphism(2, 1, frozenset({1, -2}))
    img = apply_auto(t, parse_word("aab", 2))
    assert img == parse_word("ab", 2)
    assert len(cyclic_reduce(img)) < 3


def test_apply_auto_requires_reduced():
    with pytest.raises(ValueError):
        apply_auto(WhiteheadAutomorphism(2, 1, frozenset({1, 2})), Word(2, (2, -2)))


def test_moves_map_basis_to_primitive():
    for rank in (2, 3):
        for t in enumerate_whitehead_autos(rank):
            for g in range(1, rank + 1):
                img = apply_auto(t, Word(rank, (g,)))
                assert primitivity_whitehead(img).primitive


@given(cyc_words(2, max_size=12), st.integers(0, 11))
@settings(max_examples=150)
def test_move_inverse_roundtrip(w, idx):
    t = enumerate_whitehead_autos(2)[idx]
    ti = t.inverse()
    ti.validate()
    w = reduce_word(w)
    assert apply_auto(ti, apply_auto(t, w)) == w
    assert apply_auto(t, apply_auto(ti, w)) == w


def test_permutation_moves():
    swap = LetterPermutation(2, (2, 1))
    assert apply_auto(swap, parse_word("abA", 2)) == parse_word("baB", 2)
    inv = LetterPermutation(2, (-1, 2))
    assert apply_auto(inv, parse_word("ab", 2)) == parse_word("Ab", 2)


# --- fast check ------------------------------------------------------------

def test_fast_check_validation():
    with pytest.raises(ValueError):
        fast_check(parse_word("ab", 2))          # too short
    with pytest.raises(ValueError):
        fast_check(Word(2, (1, 2, -1)))          # not cyclically reduced


def test_fast_check_inconclusive_on_primitive_style_words():
    res = fast_check(parse_word("ababab", 2))
    assert not res.not_primitive and res.prefix_len is None
    assert res.cost.letters_read == 6


def test_fast_check_finds_complete_prefix():
    # append a tail to a word whose graph is already complete
    base = parse_word("aabbABab", 2)
    assert analyze_graph(whitehead_graph(base)).complete
    w = Word(2, base.letters + (1, 2, 1, 2))
    assert w.is_cyclically_reduced
    res = fast_check(w)
    assert res.not_primitive
    assert res.prefix_len <= len(base)
    # the reported prefix really is the first complete one
    p = res.prefix_len
    assert analyze_graph(whitehead_graph(Word(2, w.letters[:p]))).complete
    assert not analyze_graph(whitehead_graph(Word(2, w.letters[:p - 1]))).complete


def test_fast_check_soundness_exhaustive():
    # every conclusive answer at length <= 12 names a genuinely
    # non-primitive word (oracle membership), and the reported prefix is
    # minimal-complete; inconclusive words with complete external graphs
    # exist, which is fine (the scan never sees the wraparound edge)
    oracle = primitive_orbit_oracle(2, 12)
    checked = conclusive = 0
    for n in range(3, 13):
        for w in enumerate_words(2, n, CYC):
            res = fast_check(w)
            checked += 1
            if res.not_primitive:
                conclusive += 1
                assert w not in oracle
    assert checked == sum(1 for n in range(3, 13)
                          for _ in enumerate_words(2, n, CYC))
    assert conclusive > 0


def test_fast_check_mean_cost_levels_off():
    # mean letters read stabilizes: n=200 within 10% of n=100
    def mean_reads(n, trials=10_000, seed=31):
        total = 0
        for i in range(trials):
            w = sample_word(2, n, CYC, substream(seed, i))
            total += fast_check(w).cost.letters_read
        return total / trials

    m100, m200 = mean_reads(100), mean_reads(200)
    assert abs(m200 / m100 - 1) < 0.10


# --- descent and composite -------------------------------------------------

def test_primitivity_basic_verdicts():
    cases = {
        "a": True, "B": True, "ab": True, "aab": True, "abaB": False,
        "aa": False, "abAB": False, "abab": False, "1": False,
        "aabbAB": False, "aB": True, "bab": True,  # bab ~ abb = x1 x2^2
        "aabb": False,
    }
    for s, expected in cases.items():
        w = parse_word(s, 2)
        assert primitivity_whitehead(w).primitive == expected, s
        assert primitivity_composite(w).primitive == expected, s


def test_primitivity_rank_one():
    assert primitivity_whitehead(Word(1, (1,))).primitive
    assert primitivity_whitehead(Word(1, (-1,))).primitive
    assert not primitivity_whitehead(Word(1, (1, 1))).primitive


def test_primitivity_normalizes_input():
    # conjugates and unreduced spellings get the same verdict
    w = parse_word("Babb", 2)        # conjugate of ab
    assert primitivity_whitehead(w).primitive
    assert primitivity_composite(parse_word("aAb", 2)).primitive


def test_composite_decided_by_strata():
    long_np = Word(2, tuple(parse_word("aabbABab", 2).letters * 3))
    v = primitivity_composite(cyclic_reduce(long_np))
    assert not v.primitive and v.decided_by == DECIDED_FAST
    v2 = primitivity_composite(parse_word("ab", 2))
    assert v2.primitive and v2.decided_by == DECIDED_WHITEHEAD
    v3 = primitivity_composite(parse_word("abab", 2))
    assert not v3.primitive and v3.decided_by == DECIDED_WHITEHEAD


def test_composite_cost_additivity():
    # when the scan decides, cost equals the scan's cost; when it does
    # not, cost is the full scan plus the descent's cost
    for seed in range(40):
        w = sample_word(2, 30, CYC, substream(17, seed))
        comp = primitivity_composite(w)
        scan = fast_check(w)
        if comp.decided_by == DECIDED_FAST:
            assert comp.cost.total() == scan.cost.total()
        else:
            desc = primitivity_whitehead(w)
            assert comp.cost.total() == scan.cost.total() + desc.cost.total()


@given(cyc_words(2, min_size=1, max_size=10), st.integers(0, 9))
@settings(max_examples=100, deadline=None)
def test_verdict_rotation_invariant(w, k):
    if len(w) == 0:
        return
    k %= len(w)
    rotated = Word(2, w.letters[k:] + w.letters[:k])
    assert (primitivity_composite(rotated).primitive
            == primitivity_composite(Word(2, w.letters)).primitive)


# --- oracle ----------------------------------------------------------------

def test_oracle_small_lengths():
    oracle = primitive_orbit_oracle(2, 3)
    by_len = {}
    for w in oracle:
        by_len.setdefault(len(w), set()).add(w.letters)
    assert by_len[1] == {(1,), (-1,), (2,), (-2,)}
    assert len(by_len[2]) == 8      # ab-type words, all sign/order variants
    assert len(by_len[3]) == 24
    assert (1, 1) not in by_len.get(2, set())


def test_oracle_agrees_with_descent_up_to_8():
    oracle = primitive_orbit_oracle(2, 8)
    for n in range(0, 9):
        for w in enumerate_words(2, n, CYC):
            assert primitivity_whitehead(w).primitive == (w in oracle)


def test_oracle_budget():
    with pytest.raises(BudgetExceeded):
        primitive_orbit_oracle(2, 13)
    with pytest.raises(BudgetExceeded):
        primitive_orbit_oracle(3, 5)


def test_blocking_words_never_occur_in_primitives():
    # x1^n x2^n x1 (n >= 2) never appears as a subword of a cyclically
    # reduced primitive: checked against every orbit element up to 12
    oracle = primitive_orbit_oracle(2, 12)
    blockers = [
        tuple([1] * n + [2] * n + [1]) for n in range(2, 6)
    ]
    for w in oracle:
        ls = w.letters
        for blk in blockers:
            if len(blk) > len(ls):
                continue
            assert not any(
                ls[i:i + len(blk)] == blk
                for i in range(len(ls) - len(blk) + 1)
            ), (w, blk)
