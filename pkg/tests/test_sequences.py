import pytest
from hypothesis import given, strategies as st

from zbaire.sequences import Cuts, FreeSet, Patched, Periodic, SequenceError, seq_from_json


def test_periodic_and_patched():
    p = Periodic((5,), (1, 2))
    assert p.prefix(5) == (5, 1, 2, 1, 2)
    q = Patched(p, {1: 9})
    assert q.prefix(3) == (5, 9, 2)
    assert seq_from_json(p.to_json()).prefix(6) == p.prefix(6)


def test_freeset_membership():
    fs = FreeSet((1,), 3, 2, (0,))
    assert [n for n in range(9) if n in fs] == [1, 3, 5, 7]
    assert fs.upto(6) == [1, 3, 5]
    assert FreeSet.from_json(fs.to_json()) == fs
    with pytest.raises(SequenceError):
        FreeSet((), 0, 2, ())


def test_cuts_powers_of_two():
    c = Cuts.powers_of_two()
    assert [c(n) for n in range(5)] == [0, 1, 2, 4, 8]
    assert list(c.interval(3)) == [4, 5, 6, 7]


@given(st.integers(1, 4), st.integers(0, 200))
def test_cuts_index_of_inverse(width, pos):
    c = Cuts.uniform(width)
    n = c.index_of(pos)
    assert pos in c.interval(n)
    assert Cuts.from_json(c.to_json()).index_of(pos) == n
