import pytest
from hypothesis import given, settings, strategies as st

from zbaire.escape import (
    Bijection,
    EscapeError,
    avoid_tree,
    laver_sum_decompose,
    m_not_mminus_branch,
    make_alpha_tree,
    miller_meager_escape,
    miller_pair_escape,
    silver_nwd_escape,
)
from zbaire.ideals import const_witness, make_slalom
from zbaire.sequences import Cuts, FreeSet, Periodic
from zbaire.shrink import miller_null_subtree
from zbaire.trees import SilverSpec, make_full, make_laver, make_miller, truncate
from zbaire.words import enum_index, enum_word, word_add, zigzag_int


def test_bijection_roundtrip():
    f = Bijection()
    for n in range(200):
        s = enum_word(n)
        assert f.inv(f(s)) == s


def test_avoid_tree_membership():
    f = Bijection()
    T = avoid_tree(f)
    bad = (f(()),)
    assert bad not in T
    assert (f(()) + 1,) in T


@settings(max_examples=10)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=4), st.integers(1, 3), st.integers(1, 4))
def test_m_not_mminus(cycle, width, m):
    y = Periodic((), tuple(cycle))
    cuts = Cuts.uniform(width)
    tr = m_not_mminus_branch(None, y, cuts, m)
    assert tr.ok, tr.checked_conditions
    for s in range(m):
        assert all(tr.x_prefix[i] == y(i) for i in cuts.interval(2 * s + 1))


@given(st.lists(st.integers(-4, 4), max_size=2).map(tuple),
       st.lists(st.integers(-6, 6), min_size=4, max_size=12).map(tuple))
def test_laver_decomposition_exact(stem, z):
    T = make_laver(stem)
    tr = laver_sum_decompose(T, stem + z)
    assert word_add(tr.x_prefix, tr.t_prefix) == stem + z
    assert all(tr.x_prefix[n] != 0 for n in range(len(stem), len(stem + z)))
    assert T.contains(tr.t_prefix)


def test_laver_rejects_thin_tree():
    T = make_miller(lambda n: len(n) == 0)
    with pytest.raises(EscapeError):
        laver_sum_decompose(T, (0, 0, 0))


def test_alpha_tree_and_miller_meager():
    A = make_alpha_tree()
    assert len(truncate(A, 2, 3).nodes) == 13
    for steps in (0, 3, 6):
        tr = miller_meager_escape(A, const_witness((0, 0)), steps)
        assert tr.ok, tr.checked_conditions
    a = miller_meager_escape(A, const_witness((2,)), 4)
    b = miller_meager_escape(A, const_witness((2,)), 5)
    assert b.x_prefix[: len(a.x_prefix)] == a.x_prefix


def test_miller_meager_on_plain_miller_tree():
    T = make_miller(lambda n: True)
    tr = miller_meager_escape(T, const_witness((1, 1)), 5)
    assert tr.ok


@settings(max_examples=15)
@given(st.integers(0, 2), st.integers(1, 3), st.lists(st.integers(-2, 2), min_size=1, max_size=3),
       st.lists(st.integers(-2, 2), min_size=1, max_size=3))
def test_silver_nwd(first, step, center, pattern):
    spec = SilverSpec(FreeSet.progression(first, step), Periodic((), tuple(center)))
    tr = silver_nwd_escape(spec, const_witness(tuple(pattern)), 5)
    assert tr.ok, tr.checked_conditions
    T_in = all(tr.t_prefix[i] == spec.center(i) for i in range(len(tr.t_prefix)) if i not in spec.free_set)
    assert T_in


def test_pair_escape_empty_slalom_takes_leftmost():
    tr = miller_pair_escape(make_full(), make_full(), make_slalom({}, 10), 4)
    assert set(tr.s_prefix) == {0} and set(tr.t_prefix) == {0}


def test_pair_escape_avoids_single_bad_pattern():
    s = make_slalom({1: [(0,)]}, 5)
    tr = miller_pair_escape(make_full(), make_full(), s, 3)
    assert tr.ok and tr.x_prefix[0] != 0
    assert tr.step_log[0]["forbidden"] == [0]


def test_pair_escape_budget_deficit():
    s = make_slalom({1: [(0,), (1,), (-1,)]}, 5)
    with pytest.raises(EscapeError, match="deficit"):
        miller_pair_escape(make_full(), make_full(), s, 2, budget_cap=2)


def test_pair_escape_against_miller_null_slalom():
    m = miller_null_subtree(make_full(), 5)
    tr = miller_pair_escape(make_full(), m.subtree, m.slalom, 8)
    assert tr.ok and tr.checked_conditions["iii_full"]


def test_trace_json_deterministic():
    A = make_alpha_tree()
    a = miller_meager_escape(A, const_witness((0,)), 4).dumps()
    b = miller_meager_escape(A, const_witness((0,)), 4).dumps()
    assert a == b
