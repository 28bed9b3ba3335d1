from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from zbaire.bench import (
    Window,
    fakenull_level_oracle,
    m_sequence_reference,
    sacks_cover_oracle,
    sacks_grid_oracle,
    sacks_iv_exact,
    sacks_iv_window,
)
from zbaire.ideals import IntervalCert, const_witness, make_slalom, slalom_mass
from zbaire.sequences import Cuts, FreeSet, Periodic
from zbaire.shrink import (
    ShrinkError,
    ThinnedSet,
    avoidance_holds,
    choose_kn,
    fakenull_shrink_perfect,
    fusion_window,
    m_sequence,
    miller_null_subtree,
    mminus_shrink_perfect,
    mminus_shrink_silver,
    sacks_fusion,
    sacks_shrink_meager,
)
from zbaire.trees import (
    SilverSpec,
    body_at_depth,
    is_miller_window,
    is_perfect_window,
    leq_n,
    make_full,
    make_uniformly_perfect,
    truncate,
)
from zbaire.words import binary_lex, enum_word, is_prefix, word_add

patterns = st.lists(st.integers(-3, 3), min_size=1, max_size=2).map(tuple)


def test_sacks_stage_zero():
    res = sacks_shrink_meager(make_full(), const_witness((7,)), 0, 50)
    assert res.tau_prime[()] == (0,)
    assert res.sigma_grid[(0, 0)] == (7,)
    assert res.h_table[0] == (7,)


@settings(max_examples=15)
@given(patterns, st.integers(1, 3))
def test_sacks_conditions_hold(p, n_max):
    f = const_witness(p)
    res = sacks_shrink_meager(make_full(), f, n_max, 300)
    assert res.ledger["i"] and res.ledger["ii"] and res.ledger["iii"] and res.ledger["iv"], res.ledger
    assert sacks_iv_exact(res, f)[0]
    assert sacks_grid_oracle(res, res.witness)[0]


def test_sacks_avoidance_premise():
    f = const_witness((1, -1))
    res = sacks_shrink_meager(make_full(), f, 2, 200)
    for n in (1, 2):
        for k in range(2 ** n):
            tp = res.tau_prime[binary_lex(n, k)]
            sig = res.sigma_grid[(n, k)]
            x0 = tuple(a - b for a, b in zip(sig, tp))
            # the one x that would reach sigma^n_k already carries an f-pattern
            assert avoidance_holds(res, f, n, k, x0) is None
            # moving a coordinate away from x0 makes the conclusion hold outright
            for pos in range(len(x0)):
                for delta in (2, 5):
                    x = x0[:pos] + (x0[pos] + delta,) + x0[pos + 1:]
                    assert avoidance_holds(res, f, n, k, x) in (True, None)


def test_sacks_cover_oracle_and_window():
    f = const_witness((0,))
    res = sacks_shrink_meager(make_full(), f, 3, 200)
    w = Window(2, 6, 2, 0)
    assert sacks_cover_oracle(res, f, res.witness, w)[0]
    ok, cex, visited = sacks_iv_window(res, f, w)
    assert ok and visited > 0


def test_sacks_on_uniformly_perfect_tree():
    T = make_uniformly_perfect(lambda n: n % 2 == 1)
    res = sacks_shrink_meager(T, const_witness((0,)), 2, 200)
    assert res.ledger["i"] and res.ledger["ii"] and res.ledger["iii"]
    assert is_perfect_window(truncate(res.subtree, 12, 2), slack=4)


def test_fusion_chain():
    fr = sacks_fusion(make_full(), const_witness((1, -1)), 3, 300)
    for n in range(3):
        a, b = fusion_window(fr, n)
        assert leq_n(a, b, n)
    for n in range(2):
        assert fr.witnesses[n + 1](enum_word(n)) == fr.shrinks[n].h_table[n]


def test_mminus_perfect_blocks():
    c = IntervalCert(Periodic((), (1,)), Cuts.uniform(1), "cofinite")
    res = mminus_shrink_perfect(make_full(), c, 2, 12)
    assert [(b["start"], b["end"]) for b in res.blocks[:2]] == [(0, 2), (2, 7)]
    assert mminus_shrink_perfect(make_full(), c, 0, 12).cert is c
    with pytest.raises(ShrinkError):
        mminus_shrink_perfect(make_full(), IntervalCert(Periodic((), (1,)), Cuts.uniform(1), "forall"), 1, 12)


def test_mminus_perfect_sum_lands_in_cert():
    c = IntervalCert(Periodic((), (1,)), Cuts.uniform(1), "cofinite")
    res = mminus_shrink_perfect(make_full(), c, 1, 12)
    d = res.horizon
    body = body_at_depth(truncate(res.subtree, d, 2))
    # x avoiding the old center on every interval, plus a branch, avoids the new one
    for x in product((0, 2), repeat=d):
        for t in body:
            z = word_add(x, t)
            assert not any(all(z[i] == res.cert.center(i) for i in res.cert.cuts.interval(j))
                           for j in range(len(res.blocks)))


def test_silver_thinning():
    th = ThinnedSet(FreeSet.progression(0, 1), Cuts.powers_of_two())
    assert [m for m in range(7) if th.dropped(m)] == [1, 3, 5]
    s = SilverSpec(FreeSet.progression(0, 1), Periodic((), (2,)))
    c = IntervalCert(Periodic((), (0,)), Cuts.powers_of_two(), "cofinite")
    res = mminus_shrink_silver(s, c, 2, 40)
    assert res.ledger["subset"]
    for b in res.blocks:
        m = b["designated"][0]
        for p in c.cuts.interval(m):
            assert res.cert.center(p) == 4


def test_choose_kn_and_m_sequence():
    empty = make_slalom({}, 8)
    plan = choose_kn(empty, 8)
    assert plan.k_seq == list(range(9))
    assert m_sequence([1, 1, 2, 2, 3]) == [0, 2, 4]
    s = make_slalom({1: [(0,)], 3: [(0, 0, 0)]}, 6)
    with pytest.raises(ShrinkError):
        choose_kn(s, 6, Fraction(1, 100))


@given(st.lists(st.integers(0, 4), min_size=1, max_size=12))
def test_m_sequence_matches_reference(ks):
    ks = sorted(ks)
    assert m_sequence(ks) == m_sequence_reference(ks)


@settings(max_examples=10)
@given(st.dictionaries(st.integers(1, 6), st.sets(st.tuples(st.integers(-1, 1)), max_size=2), max_size=3))
def test_fakenull_bounds(raw):
    levels = {n: {w * n for w in ws} for n, ws in raw.items()}
    s = make_slalom(levels, 6)
    res = fakenull_shrink_perfect(make_full(), s, 300, Fraction(2 ** 9))
    ks = res.plan.k_seq
    for n in range(7):
        assert len(res.slalom.level(n)) <= len(s.level(n)) * 2 ** (ks[n] ** 3)
        assert len(res.levels[n]) <= 2 ** ks[n]
    w = Window(2, 6, 2, 0)
    assert fakenull_level_oracle(res, s, res.slalom.levels, 1, w)[0]


def test_miller_null():
    m = miller_null_subtree(make_full(), 5)
    assert all(v for k, v in m.ledger.items() if k != "bound")
    assert all(m.ledger["bound"].values())
    assert slalom_mass(m.slalom, 10) <= 2
    assert m.tau(()) == ()
    assert is_prefix(m.tau((0,)), m.tau((0, 1)))
    assert is_miller_window(truncate(m.subtree, 6, 3))
