from itertools import product

import pytest
from hypothesis import given, strategies as st

from zbaire.sequences import FreeSet, Periodic
from zbaire.trees import (
    SilverSpec,
    StemExceedsDepth,
    TreeError,
    Truncation,
    body_at_depth,
    is_laver_window,
    is_miller_window,
    is_perfect_window,
    is_uniform_window,
    leq_n,
    level,
    make_full,
    make_laver,
    make_miller,
    make_perfect_from_map,
    make_silver,
    make_uniformly_perfect,
    nfold_sumset,
    stem,
    subtree_of,
    sumset,
    truncate,
    truncation_level,
)
from zbaire.words import word_add


def brute_sum(A, B):
    return {word_add(a, b) for a in A for b in B}


def word_sets(length):
    return st.sets(st.lists(st.integers(-3, 3), min_size=length, max_size=length).map(tuple), max_size=12)


@given(st.integers(0, 4).flatmap(lambda L: st.tuples(word_sets(L), word_sets(L))))
def test_trie_sumset_matches_brute_force(pair):
    A, B = pair
    assert sumset(A, B) == brute_sum(A, B)


def test_sumset_rejects_mixed_lengths():
    with pytest.raises(Exception):
        sumset({(1,), (1, 2)}, {(0,)})


def test_nfold_sumset():
    A = {(0, 1), (1, 0)}
    assert nfold_sumset(A, 2, 2) == {(0, 2), (1, 1), (2, 0)}
    assert nfold_sumset(A, 0, 2) == {(0, 0)}


def test_full_tree_truncation_size():
    tr = truncate(make_full(), 2, 3)
    assert len(tr.nodes) == 1 + 3 + 9
    assert tr.omega == tr.split
    assert Truncation.from_json(tr.to_json()) == tr


def test_silver_membership():
    T = make_silver(SilverSpec(FreeSet.progression(0, 2), Periodic((), (5,))))
    assert (7, 5, -3, 5) in T
    assert (7, 4) not in T
    assert T.successors((1,), 3) == (5,)
    # free coordinates stream around the center
    assert T.successors((), 3) == (5, 6, 4)


@given(st.integers(1, 3), st.integers(0, 2), st.integers(-2, 2), st.sampled_from([1, 3]))
def test_silver_sum_identity_small(step, first, c, b):
    # odd budgets give symmetric windows around the center
    spec = SilverSpec(FreeSet.progression(first, step), Periodic((), (c,)))
    T = make_silver(spec)
    d = 4
    lhs_body = body_at_depth(truncate(T, d, b))
    rhs = {word_add(t, tuple(spec.center(i) for i in range(d))) for t in body_at_depth(truncate(T, d, 2 * b - 1))}
    assert brute_sum(lhs_body, lhs_body) == rhs


def test_silver_sum_identity_needs_odd_budget():
    T = make_silver(SilverSpec(FreeSet.progression(0, 1)))
    body = body_at_depth(truncate(T, 2, 2))
    assert brute_sum(body, body) != body_at_depth(truncate(T, 2, 3))


def test_laver_stem_and_window():
    T = make_laver((3, 1))
    assert stem(T, 10) == (3, 1)
    assert (3, 1, 9, -4) in T
    assert (2,) not in T
    assert is_laver_window(truncate(T, 4, 3), (3, 1))


def test_miller_window():
    T = make_miller(lambda n: len(n) % 3 == 0)
    assert is_miller_window(truncate(T, 6, 3))
    assert is_perfect_window(truncate(T, 6, 3), slack=2)


def test_uniformly_perfect():
    T = make_uniformly_perfect(lambda n: n % 2 == 0)
    tr = truncate(T, 3, 3)
    assert len(body_at_depth(tr)) == 4
    assert is_uniform_window(tr)
    with pytest.raises(TreeError):
        make_uniformly_perfect(lambda n: True, width=1)


def test_perfect_from_map_validates():
    good = make_perfect_from_map(lambda s: tuple(2 * v for v in s))
    assert good.is_split(())
    with pytest.raises(TreeError):
        make_perfect_from_map(lambda s: (0,) * (len(s) + 1))


def test_stem_exceeds_depth():
    T = make_silver(SilverSpec(FreeSet((), 20, 1, (0,))))
    with pytest.raises(StemExceedsDepth):
        stem(T, 5)


def test_level_and_leq():
    T = make_full()
    assert level(T, 1, 5) == {(0,), (1,)}
    core = [(0, 0), (0, 1), (1, 0), (1, 1)]
    S = subtree_of(T, core, core)
    P, Q = truncate(S, 3, 2), truncate(T, 3, 2)
    assert leq_n(P, Q, 1)
    assert not leq_n(P, Q, 2) or truncation_level(P, 2) == truncation_level(Q, 2)
    with pytest.raises(TreeError):
        leq_n(truncate(S, 2, 2), Q, 0)


def test_subtree_of_follows_parent_above_leaves():
    T = make_full()
    S = subtree_of(T, [(2, 0)], [(2, 0)])
    assert (2, 0, 5, -1) in S
    assert (2, 1) not in S
    assert S.successors((2,), 3) == (0,)


@given(st.integers(1, 4), st.integers(1, 3))
def test_truncation_is_prefix_closed(d, b):
    tr = truncate(make_miller(lambda n: len(n) % 2 == 0), d, b)
    assert all(w[:-1] in tr.nodes for w in tr.nodes if w)
