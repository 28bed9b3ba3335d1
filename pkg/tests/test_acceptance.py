"""Acceptance suite: one test per criterion, each under its runtime limit.

Run with ``pytest tests/test_acceptance.py`` (a PASS/FAIL line per criterion is
printed in the terminal summary) or directly with ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import time
from fractions import Fraction

import pytest

from zbaire import ideals, shrink, trees
from zbaire.bench import (
    Window,
    fakenull_level_oracle,
    run_scenario,
    sacks_grid_oracle,
)
from zbaire.ideals import const_witness, level_bound

RESULTS: list[str] = []

W6 = Window(2, 6, 2, 0)


def _scenario(name, window, params, seed=0):
    rep = run_scenario(name, window, params, seed)
    return rep.ok, [c.to_json() for c in rep.failures()][:3]


def silver_identity():
    return _scenario("silver-sum-translate", Window(2, 8, 3, 0), {"suite": True})


def laver_full_sum():
    return _scenario("laver-full-sum", W6, {"count": 100, "depth": 12, "stem": [2, -1]})


def m_not_mminus():
    return _scenario("m-not-mminus", W6, {"count": 10, "m": 5})


def sacks_meager():
    return _scenario("sacks-meager", W6, {"n_max": 4})


def sacks_fusion():
    return _scenario("sacks-fusion", W6, {"stages": 3})


def cover_slalom():
    ok, fails = _scenario("cover-slalom", W6, {"count": 4, "bound_depth": 8})
    return ok and level_bound(3) == 15, fails


def fakenull_perfect():
    return _scenario("fakenull-perfect", W6, {"horizon": 8, "count": 5, "budget": 2 ** 9, "n_fold": 2})


def miller_null():
    return _scenario("miller-null", Window(2, 10, 3, 0), {"kmax": 5})


def miller_pair():
    return _scenario("miller-pair-escape", W6, {"kmax": 5, "count": 5, "steps": 8})


def escape_traces():
    out = []
    for name in ("miller-meager-escape", "silver-nwd-escape"):
        a = run_scenario(name, W6, {"steps": 6})
        b = run_scenario(name, W6, {"steps": 6})
        out.append((a.ok and a.dumps() == b.dumps(), [c.to_json() for c in a.failures()]))
    return all(o for o, _ in out), [f for _, f in out if f]


def mutation_sensitivity():
    missed = []
    # single h_table entries of the meager shrink
    for p in ((7,), (0,), (1, -1)):
        f = const_witness(p)
        res = shrink.sacks_shrink_meager(trees.make_full(), f, 4, 400)
        for m, hv in res.h_table.items():
            for pos in range(len(hv)):
                table = dict(res.h_table)
                table[m] = hv[:pos] + (hv[pos] + 1,) + hv[pos + 1:]
                ok, cex = sacks_grid_oracle(res, res.witness.with_table(table))
                if ok or "x" not in cex:
                    missed.append(("h", p, m, pos))
    # single S'-levels of the fake-null shrink
    import random

    from zbaire.bench import random_slalom

    rng = random.Random(0)
    W8 = Window(2, 8, 2, 0)
    for i in range(5):
        s = random_slalom(rng, 8, 1, 2)
        res = shrink.fakenull_shrink_perfect(trees.make_full(), s, 400, Fraction(2 ** 9))
        for n, lv in res.slalom.levels.items():
            if not lv:
                continue
            levels = dict(res.slalom.levels)
            levels[n] = frozenset()
            caught = any(not fakenull_level_oracle(res, s, levels, j, W8)[0] for j in (1, 2))
            if not caught:
                missed.append(("S'", i, n))
    return not missed, missed


CRITERIA = [
    (1, "omega-Silver sum identity (20 specs, d=8, b=3)", silver_identity, 10),
    (2, "Laver full sum (100 z, d=12)", laver_full_sum, 1),
    (3, "M not inside M- witness (10 pairs, m=5)", m_not_mminus, 1),
    (4, "meager shrink of the full tree (n_max=4, 3 witnesses)", sacks_meager, 30),
    (5, "fusion chain (3 stages)", sacks_fusion, 60),
    (6, "cover/slalom conversions (bounds n<=8, window B=2 d=6)", cover_slalom, 10),
    (7, "fake-null shrink (5 slaloms, n<=8, n-fold<=2)", fakenull_perfect, 60),
    (8, "Miller null subtree (k<=5)", miller_null, 10),
    (9, "Miller pair escape (full scan)", miller_pair, 10),
    (10, "escape ledgers and determinism (steps=6)", escape_traces, 10),
    (11, "mutation sensitivity (h entries, S' levels)", mutation_sensitivity, 30),
]


def run_criterion(num, label, fn, limit):
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    passed = ok and dt < limit
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {num:2d}: {label} ({dt:.2f}s, limit {limit}s)"
    if not passed:
        line += f" detail={detail}"
    return passed, line


@pytest.mark.parametrize("num,label,fn,limit", CRITERIA, ids=[f"criterion-{c[0]}" for c in CRITERIA])
def test_criterion(num, label, fn, limit):
    passed, line = run_criterion(num, label, fn, limit)
    RESULTS.append(line)
    print(line)
    assert passed, line


if __name__ == "__main__":
    import sys

    lines = [run_criterion(*c) for c in CRITERIA]
    for _, line in lines:
        print(line)
    sys.exit(0 if all(p for p, _ in lines) else 1)
