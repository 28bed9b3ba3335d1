"""Brute-force oracles, exhaustive window checks and the scenario runner.

Oracles here only borrow coordinate-wise arithmetic from ``words``; sums are
formed by plain enumeration so a bug in the trie sumset or in a construction
cannot hide itself.
"""
from __future__ import annotations

import hashlib
import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from . import escape, ideals, shrink, trees
from .ideals import CertError, CoverFamily, IntervalCert, MeagerWitness, Slalom
from .sequences import Cuts, FreeSet, Periodic
from .trees import SilverSpec, TreeSpec
from .words import (
    EMPTY,
    Word,
    binary_lex,
    enum_index,
    enum_word,
    is_prefix,
    window_alphabet,
    word_add,
    word_sub,
    zeros,
)

COST_CEILING = 10 ** 7


class WindowError(ValueError):
    pass


@dataclass(frozen=True)
class Window:
    B: int = 2
    d: int = 6
    budget: int = 3
    N: int = 0

    def __post_init__(self):
        if self.B < 1 or self.d < 1 or self.budget < 1 or self.N < 0:
            raise WindowError(f"bad window {self}")

    @classmethod
    def parse(cls, text: str) -> "Window":
        try:
            parts = [int(p) for p in text.split(",")]
        except ValueError:
            raise WindowError(f"window must be B,d,budget,N integers, got {text!r}") from None
        if not 1 <= len(parts) <= 4:
            raise WindowError(f"window must be B,d,budget,N, got {text!r}")
        return cls(*parts)

    def size(self) -> int:
        return (2 * self.B + 1) ** self.d

    def to_json(self) -> dict:
        return {"B": self.B, "d": self.d, "budget": self.budget, "N": self.N}


@dataclass
class Check:
    name: str
    scope: str
    passed: bool
    counterexample: object = None
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        d = {"name": self.name, "scope": self.scope, "pass": bool(self.passed)}
        if not self.passed:
            d["counterexample"] = _jsonable(self.counterexample)
        if self.detail:
            d["detail"] = _jsonable(self.detail)
        return d


@dataclass
class ScenarioReport:
    scenario: str
    digest: str
    checks: list[Check] = field(default_factory=list)
    runtime: float = 0.0
    seed: int = 0
    artifacts: dict = field(default_factory=dict)
    inputs: dict | None = None

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, scope: str, passed: bool, counterexample=None, **detail) -> Check:
        if not passed and counterexample is None:
            counterexample = {"failed": name}
        c = Check(name, scope, bool(passed), None if passed else counterexample, detail)
        self.checks.append(c)
        return c

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self, timing: bool = False) -> dict:
        d = {"scenario": self.scenario, "digest": self.digest, "seed": self.seed,
             "pass": self.ok, "checks": [c.to_json() for c in self.checks]}
        if self.artifacts:
            d["artifacts"] = _jsonable(self.artifacts)
        if self.inputs is not None:
            d["inputs"] = self.inputs
        if timing:
            d["runtime"] = round(self.runtime, 4)
        return d

    def dumps(self, timing: bool = False) -> str:
        return json.dumps(self.to_json(timing), sort_keys=True, indent=1)


def _jsonable(x):
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator}
    if isinstance(x, (tuple, list, set, frozenset)):
        items = [_jsonable(v) for v in x]
        return sorted(items, key=json.dumps) if isinstance(x, (set, frozenset)) else items
    if isinstance(x, Mapping):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


def digest_of(obj) -> str:
    return hashlib.sha256(json.dumps(_jsonable(obj), sort_keys=True).encode()).hexdigest()[:16]


# --- enumeration

def enumerate_window(w: Window, length: int | None = None, ceiling: int = COST_CEILING) -> Iterator[Word]:
    """All words of length d over {-B..B}, zigzag-lex."""
    d = w.d if length is None else length
    count = (2 * w.B + 1) ** d
    if count > ceiling:
        raise WindowError(f"window holds {count} words, above the ceiling {ceiling}")
    return product(window_alphabet(w.B), repeat=d)


def _sum_all(words: Iterable[Word]) -> Word:
    acc = None
    for v in words:
        acc = v if acc is None else word_add(acc, v)
    return acc


# --- certificate membership at window scale

def in_ideal_set(cert, x: Word, N: int) -> tuple[bool | None, object]:
    """Whether finite x lies in the certificate's set, within the window.

    Meager witness: no pattern of index >= N inside x.  Interval certificate:
    no complete interval (from the threshold on) copies the center.  Slalom:
    x hits some level n >= max(N, 1).  Returns (None, reason) when undecided.
    """
    if isinstance(cert, IntervalCert):
        upto = ideals.complete_intervals(cert, len(x))
        if upto < 0:
            return None, "no complete interval"
        v = ideals.interval_member(cert, x, upto)
        return v.status == "in-cert-set", v.index
    if isinstance(cert, Slalom):
        v = ideals.slalom_member(cert, x, max(N, 1))
        return v.status == "hits", v.hits
    if callable(cert):
        try:
            v = ideals.meager_member(cert, x, N)
        except CertError:
            return True, "no pattern fits"
        return v.status == "avoids", v.index
    raise CertError(f"unsupported certificate {type(cert).__name__}")


def oracle_sum_in_cert(F_set: Iterable[Word], bodies: Sequence[Iterable[Word]], cert, w: Window,
                       name: str = "sum-in-cert", report: ScenarioReport | None = None) -> ScenarioReport:
    """Every f + t_1 + ... + t_n lies in the certificate's set."""
    rep = report or ScenarioReport(name, digest_of([name, w.to_json()]))
    F = sorted(set(map(tuple, F_set)))
    Bs = [sorted(set(map(tuple, b))) for b in bodies]
    cost = len(F)
    for b in Bs:
        cost *= max(1, len(b))
    if cost > COST_CEILING:
        raise WindowError(f"{cost} sums exceed the ceiling {COST_CEILING}")
    lengths = {len(v) for v in F} | {len(v) for b in Bs for v in b}
    if len(lengths) > 1:
        raise WindowError(f"mixed word lengths {sorted(lengths)}")
    checked = undecided = 0
    for f in F:
        for ts in product(*Bs):
            s = _sum_all((f,) + ts)
            ok, why = in_ideal_set(cert, s, w.N)
            if ok is None:
                undecided += 1
                continue
            checked += 1
            if not ok:
                rep.add(name, "forall f, t_i in window", False,
                        {"f": f, "t": list(ts), "sum": s, "witness": why}, checked=checked)
                return rep
    rep.add(name, "forall f, t_i in window", True, checked=checked, undecided=undecided)
    return rep


# --- Sacks / meager oracles

def sacks_iv_window(res: shrink.SacksShrinkResult, f: Callable[[Word], Word], w: Window) -> tuple[bool, object, int]:
    """Condition (iv) over every x in {-B..B}^{|tau'|} for every constructed (n, k).

    Depth-first over x; a branch is cut once x + tau' leaves sigma^n_k, since
    the conclusion then holds for all its extensions.  Survivors at full length
    must violate the premise.
    """
    alphabet = window_alphabet(w.B)
    visited = 0
    for (n, k), sig in sorted(res.sigma_grid.items()):
        if k < 0 or n <= res.frozen:
            continue
        tp = res.tau_prime[binary_lex(n, k)]
        target = word_sub(sig, tp[: len(sig)])
        stack = [EMPTY]
        while stack:
            x = stack.pop()
            visited += 1
            if len(x) == len(sig):
                if _avoids_from(f, x, n):
                    return False, {"n": n, "k": k, "x": x, "tau_prime": tp}, visited
                continue
            for a in alphabet:
                if a == target[len(x)]:
                    stack.append(x + (a,))
    return True, None, visited


def _avoids_from(f: Callable[[Word], Word], x: Word, n: int) -> bool:
    """No sigma_m^f(sigma_m) ⊆ x with m >= n."""
    for L in range(len(x) + 1):
        p = x[:L]
        if enum_index(p) < n:
            continue
        pat = p + tuple(f(p))
        if len(pat) <= len(x) and x[: len(pat)] == pat:
            return False
    return True


def sacks_iv_exact(res: shrink.SacksShrinkResult, f: Callable[[Word], Word]) -> tuple[bool, object]:
    """Condition (iv) over all of Z: the only x with sigma^n_k ⊆ x + tau' start with sigma^n_k - tau'."""
    for (n, k), sig in sorted(res.sigma_grid.items()):
        if k < 0 or n <= res.frozen:
            continue
        tp = res.tau_prime[binary_lex(n, k)]
        x0 = word_sub(sig, tp[: len(sig)])
        if _avoids_from(f, x0, n):
            return False, {"n": n, "k": k, "x": x0}
    return True, None


def sacks_cover_oracle(res: shrink.SacksShrinkResult, f: Callable[[Word], Word], h: Callable[[Word], Word],
                       w: Window) -> tuple[bool, object, int]:
    """F + [T'] ⊆ H at window scale.

    For each stage m >= N and each branch t of T' (budgeted), the unique
    x-prefix with x + t ⊇ sigma_m^h(sigma_m) must already contain an
    f-pattern of index >= N.
    """
    lo = max(w.N, res.frozen + 1)
    checked = 0
    for m in range(lo, res.stages + 1):
        sm = enum_word(m)
        pat = sm + tuple(h(sm))
        tr = trees.truncate(res.subtree, len(pat), w.budget)
        for t in sorted(trees.body_at_depth(tr)):
            x0 = word_sub(pat, t)
            checked += 1
            if _avoids_from(f, x0, w.N):
                return False, {"m": m, "t": t, "x": x0, "pattern": pat}, checked
    return True, None, checked


def sacks_grid_oracle(res: shrink.SacksShrinkResult, h: Callable[[Word], Word]) -> tuple[bool, object]:
    """sigma^m_k ⊆ sigma_m^h(sigma_m) for every constructed (m, k).

    This is the inclusion the covering argument uses: the x-prefix
    sigma^m_k - tau' carries an f-pattern, and it must sit inside the h-pattern.
    """
    for (m, k), sig in sorted(res.sigma_grid.items()):
        if k < 0 or m <= res.frozen:
            continue
        sm = enum_word(m)
        pat = sm + tuple(h(sm))
        if not is_prefix(sig, pat):
            tp = res.tau_prime[binary_lex(m, k)]
            pos = next((i for i in range(min(len(sig), len(pat))) if sig[i] != pat[i]), min(len(sig), len(pat)))
            return False, {"m": m, "k": k, "x": word_sub(sig, tp[: len(sig)]), "tau_prime": tp,
                           "position": pos, "pattern": pat}
    return True, None


def fusion_chain(fr: shrink.FusionResult, budget: int = 2) -> list[tuple[int, bool]]:
    out = []
    for n in range(len(fr.shrinks)):
        a, b = shrink.fusion_window(fr, n, budget)
        out.append((n, trees.leq_n(a, b, n)))
    return out


# --- fake null oracles

def fakenull_window_oracle(res: shrink.FakeNullShrinkResult, s: Slalom, levels: Mapping[int, frozenset],
                           j: int, w: Window) -> tuple[bool, object, int]:
    """x hitting S_n with k_n >= j, plus j branches of T', hits the levels ``levels``."""
    ks = res.plan.k_seq
    d = w.d
    body = sorted(trees.body_at_depth(trees.truncate(res.subtree, d, w.budget)))
    sums = sorted({_sum_all(c) for c in combinations_with_replacement(body, j)})
    checked = 0
    for x in enumerate_window(w):
        hit = [n for n in range(1, d + 1) if n < len(ks) and ks[n] >= j and x[:n] in s.level(n)]
        if not hit:
            continue
        for t in sums:
            z = word_add(x, t)
            checked += 1
            if not any(z[:n] in levels.get(n, ()) for n in range(1, d + 1)):
                return False, {"x": x, "t_sum": t, "j": j, "x_hits": hit, "sum": z}, checked
    return True, None, checked


def fakenull_level_oracle(res: shrink.FakeNullShrinkResult, s: Slalom, levels: Mapping[int, frozenset],
                          j: int, w: Window) -> tuple[bool, object, int]:
    """S_n + (j-fold sums of T' ∩ Z^n) ⊆ S'_n for every n <= d with k_n >= j."""
    ks = res.plan.k_seq
    checked = 0
    for n in range(1, min(w.d, len(ks) - 1) + 1):
        if ks[n] < j or not s.level(n):
            continue
        body = sorted(trees.body_at_depth(trees.truncate(res.subtree, n, w.budget)))
        for c in combinations_with_replacement(body, j):
            t = _sum_all(c)
            for x in sorted(s.level(n)):
                checked += 1
                z = word_add(x, t)
                if z not in levels.get(n, ()):
                    return False, {"n": n, "x": x, "t": list(c), "sum": z, "j": j}, checked
    return True, None, checked


def m_sequence_reference(k_seq: Sequence[int]) -> list[int]:
    """Direct evaluation: m_j is where k first exceeds its value at m_{j-1}."""
    out = [0]
    for m, k in enumerate(k_seq):
        if m and k > k_seq[out[-1]]:
            out.append(m)
    return out


# --- random inputs

def random_silver(rng: random.Random, max_center: int = 2) -> SilverSpec:
    period = rng.randint(1, 4)
    offsets = tuple(sorted(rng.sample(range(period), rng.randint(1, period))))
    start = rng.randint(0, 3)
    head = tuple(sorted(rng.sample(range(start), rng.randint(0, start)))) if start else ()
    fs = FreeSet(head, start, period, offsets)
    cyc = tuple(rng.randint(-max_center, max_center) for _ in range(rng.randint(1, 3)))
    return SilverSpec(fs, Periodic((), cyc))


def random_slalom(rng: random.Random, horizon: int, B: int = 1, per_level: int = 2) -> Slalom:
    alpha = window_alphabet(B)
    levels = {}
    for n in range(1, horizon + 1):
        cnt = rng.randint(0, per_level)
        levels[n] = {tuple(rng.choice(alpha) for _ in range(n)) for _ in range(cnt)}
    return ideals.make_slalom(levels, horizon)


def random_families(rng: random.Random, count: int, d: int, B: int) -> list[CoverFamily]:
    alpha = window_alphabet(B)
    fams = []
    for i in range(count):
        cap = Fraction(1, 2 ** i)
        gens: list[Word] = []
        mass = Fraction(0)
        for _ in range(6):
            L = rng.randint(i + 1, d)
            g = tuple(rng.choice(alpha) for _ in range(L))
            if g in gens or mass + Fraction(1, 2 ** L) >= cap:
                continue
            gens.append(g)
            mass += Fraction(1, 2 ** L)
        fams.append(CoverFamily(tuple(gens), i))
    return fams


def random_witness(rng: random.Random, B: int = 2) -> MeagerWitness:
    L = rng.randint(1, 2)
    return ideals.const_witness(tuple(rng.randint(-B, B) for _ in range(L)))


# --- scenarios

Scenario = Callable[[ScenarioReport, Window, dict, random.Random], None]
REGISTRY: dict[str, Scenario] = {}


def scenario(name: str):
    def deco(fn: Scenario) -> Scenario:
        REGISTRY[name] = fn
        return fn
    return deco


def run_scenario(name: str, w: Window, params: Mapping | None = None, seed: int = 0) -> ScenarioReport:
    if name not in REGISTRY:
        raise KeyError(f"unknown scenario {name!r}; known: {', '.join(sorted(REGISTRY))}")
    params = dict(params or {})
    inputs = {"scenario": name, "window": w.to_json(), "params": params, "seed": seed}
    rep = ScenarioReport(name, digest_of(inputs), seed=seed)
    try:
        json.dumps(params)
        rep.inputs = inputs
    except TypeError:
        pass
    rng = random.Random(seed)
    t0 = time.perf_counter()
    REGISTRY[name](rep, w, params, rng)
    rep.runtime = time.perf_counter() - t0
    return rep


def silver_suite() -> list[SilverSpec]:
    """Twenty fixed specs: one all-free worst case, the rest mixed free sets and centers."""
    P = lambda *c: Periodic((), c)
    rows = [
        (FreeSet.progression(0, 1), P(1, -1)),
        (FreeSet.progression(0, 2), P(0)),
        (FreeSet.progression(1, 2), P(2)),
        (FreeSet.progression(0, 3), P(0, 1, -1)),
        (FreeSet.progression(2, 3), P(-2)),
        (FreeSet((0, 2), 3, 4, (1,)), P(1)),
        (FreeSet((), 0, 4, (0, 1)), P(0, 3)),
        (FreeSet((1,), 2, 5, (0, 2)), P(-1, 2)),
        (FreeSet.progression(3, 1), P(1)),
        (FreeSet((0,), 4, 2, (1,)), P(2, -2)),
        (FreeSet.progression(1, 4), P(5)),
        (FreeSet((), 0, 5, (0, 3)), P(0)),
        (FreeSet.progression(4, 2), P(-3, 1)),
        (FreeSet((0, 1), 2, 3, (2,)), P(1, 1, 0)),
        (FreeSet.progression(0, 4), P(-1)),
        (FreeSet((), 1, 3, (0, 1)), P(2, 0)),
        (FreeSet.progression(7, 1), P(4)),
        (FreeSet((0, 1, 2), 3, 6, (0,)), P(0, -1)),
        (FreeSet.progression(5, 1), P(1, 2, 3)),
        (FreeSet((), 0, 2, (1,)), P(3, -3)),
    ]
    return [SilverSpec(fs, c) for fs, c in rows]


def _product_oracle(body: set[Word], d: int) -> tuple[list[set[int]], bool]:
    cols = [set(col) for col in zip(*body)] if body else [set() for _ in range(d)]
    size = 1
    for c in cols:
        size *= len(c)
    return cols, size == len(body)


@scenario("silver-sum-translate")
def _silver_sum(rep, w, params, rng):
    """[T]+[T] = [T] + x_T on the window: budget b on the left, 2b-1 on the right."""
    if params.get("suite"):
        specs = silver_suite()
    else:
        specs = params.get("specs") or [random_silver(rng) for _ in range(params.get("count", 20))]
    b, d = w.budget, w.d
    for i, sp in enumerate(specs):
        T = trees.make_silver(sp)
        lhs_body = trees.body_at_depth(trees.truncate(T, d, b))
        rhs_body = trees.body_at_depth(trees.truncate(T, d, 2 * b - 1))
        xt = tuple(sp.center(k) for k in range(d))
        lhs = trees.sumset(lhs_body, lhs_body)
        rhs = {word_add(t, xt) for t in rhs_body}
        # independent check: both sides are products of their coordinate projections
        cols, is_prod = _product_oracle(lhs_body, d)
        rcols, r_prod = _product_oracle(rhs, d)
        coord = [{a + c for a in col for c in col} for col in cols]
        indep = is_prod and r_prod and coord == rcols
        ok = lhs == rhs and indep
        cex = None
        if not ok:
            diff = sorted(lhs ^ rhs)
            cex = {"spec": sp.to_json(), "symmetric_difference": diff[:3], "independent": indep}
        rep.add(f"spec-{i}", "set equality at depth d", ok, cex, size=len(lhs))


@scenario("laver-full-sum")
def _laver(rep, w, params, rng):
    count, d = params.get("count", 100), params.get("depth", 12)
    stem = tuple(params.get("stem", (rng.randint(-3, 3) for _ in range(rng.randint(0, 3)))))
    T = trees.make_laver(stem)
    bad = None
    for _ in range(count):
        z = tuple(rng.randint(-5, 5) for _ in range(d))
        tr = escape.laver_sum_decompose(T, z)
        x, y = tr.x_prefix, tr.t_prefix
        good = (word_add(x, y) == z and T.contains(y)
                and all(x[n] != 0 for n in range(len(stem), d)))
        if not good:
            bad = {"z": z, "x": x, "y": y}
            break
    rep.add("decompose", f"{count} random z, depth {d}", bad is None, bad, stem=list(stem))


@scenario("m-not-mminus")
def _m_not_mminus(rep, w, params, rng):
    pairs, m = params.get("count", 10), params.get("m", 5)
    for i in range(pairs):
        cyc = tuple(rng.randint(-3, 3) for _ in range(rng.randint(1, 4)))
        y = Periodic((), cyc)
        cuts = Cuts.uniform(rng.randint(1, 4))
        tr = escape.m_not_mminus_branch(None, y, cuts, m)
        T = escape.avoid_tree()
        x = tr.x_prefix
        agree = sum(1 for s in range(m) if all(x[j] == y(j) for j in cuts.interval(2 * s + 1)))
        bound = all(len(st["forbidden"]) <= st["interval"][1] - st["interval"][0] + 1 for st in tr.step_log)
        ok = T.contains(x) and agree >= m and bound
        rep.add(f"pair-{i}", f"m={m}", ok, None if ok else {"x": x, "agree": agree, "cycle": cyc})


@scenario("sacks-meager")
def _sacks(rep, w, params, rng):
    n_max = params.get("n_max", 4)
    depth = params.get("depth", 400)
    wits = params.get("witnesses") or [ideals.const_witness(p) for p in ((7,), (0,), (1, -1))]
    T = params.get("tree") or trees.make_full()
    for i, f in enumerate(wits):
        res = shrink.sacks_shrink_meager(T, f, n_max, depth)
        for c in ("i", "ii", "iii"):
            rep.add(f"w{i}-{c}", "all constructed indices", res.ledger[c], res.ledger["failures"])
        ok, cex, visited = sacks_iv_window(res, f, w)
        rep.add(f"w{i}-iv-window", f"all x in {{-{w.B}..{w.B}}}^|tau'|", ok and res.ledger["iv"], cex,
                visited=visited)
        ok, cex = sacks_iv_exact(res, f)
        rep.add(f"w{i}-iv-exact", "all x in Z^|tau'|", ok, cex)
        h = params.get("h_override", {}).get(i, res.witness)
        ok, cex = sacks_grid_oracle(res, h)
        rep.add(f"w{i}-grid", "sigma^m_k inside sigma_m^h(sigma_m)", ok, cex)
        ok, cex, checked = sacks_cover_oracle(res, f, h, w)
        rep.add(f"w{i}-cover", "F + [T'] ⊆ H on budgeted branches", ok, cex, checked=checked)


@scenario("sacks-fusion")
def _fusion(rep, w, params, rng):
    stages = params.get("stages", 3)
    f = params.get("witness") or ideals.const_witness((1, -1))
    fr = shrink.sacks_fusion(trees.make_full(), f, stages, params.get("depth", 400))
    for n, ok in fusion_chain(fr):
        rep.add(f"leq-{n}", f"level {n} of T_{n + 1} vs T_{n}", ok)
    for n in range(stages - 1):
        nxt = fr.shrinks[n + 1]
        same = all(tuple(fr.witnesses[n + 1](enum_word(m))) == nxt.h_table[m]
                   for m in range(n + 2))
        rep.add(f"witness-{n + 1}", "stage-n+1 witness equals stage-n h", same)


@scenario("cover-slalom")
def _cover_slalom(rep, w, params, rng):
    d = w.d
    top = max(d, params.get("bound_depth", 8))
    fams = params.get("families") or random_families(rng, params.get("count", 4), top, w.B)
    s, ledger = ideals.cover_to_slalom(fams, top)
    for n in range(top + 1):
        size = len(s.level(n))
        rep.add(f"bound-{n}", "|S_n| < sum 2^(n-k)", size < ideals.level_bound(n), {"n": n, "size": size})
    covers = [ideals.slalom_to_cover(s, n, d) for n in range(d)]
    bad = None
    for x in enumerate_window(w):
        hits = {k for k in range(1, d + 1) if x[:k] in s.level(k)}
        for fam in fams:
            if fam.covers(x) and not any(len(g) in hits and is_prefix(g, x) for g in fam.generators):
                bad = {"x": x, "family": fam.index, "direction": "cover->slalom"}
        for n, cv in enumerate(covers):
            if cv.covers(x) != any(k > n for k in hits):
                bad = {"x": x, "n": n, "direction": "slalom->cover"}
        if bad:
            break
    rep.add("membership", f"all x in window d={d}", bad is None, bad)
    for n, cv in enumerate(covers):
        rep.add(f"tail-{n}", "cover mass equals tail mass", cv.mass == ideals.tail_mass(s, n, d))


def _slalom_list(params, rng, horizon, count):
    return params.get("slaloms") or [random_slalom(rng, horizon, 1, 2) for _ in range(count)]


@scenario("fakenull-perfect")
def _fakenull(rep, w, params, rng):
    horizon = params.get("horizon", 8)
    budget = Fraction(params.get("budget", 2 ** 9))
    nfold = params.get("n_fold", 2)
    mutate = params.get("mutate_level")
    for i, s in enumerate(_slalom_list(params, rng, horizon, params.get("count", 5))):
        res = shrink.fakenull_shrink_perfect(trees.make_full(), s, params.get("depth", 400), budget)
        ks = res.plan.k_seq
        for n in range(horizon + 1):
            size, bound = len(res.slalom.level(n)), len(s.level(n)) * 2 ** (ks[n] ** 3)
            if size > bound:
                rep.add(f"s{i}-bound-{n}", "|S'_n| <= |S_n| 2^(k_n^3)", False, {"n": n, "size": size, "bound": bound})
                break
        else:
            rep.add(f"s{i}-bound", f"n <= {horizon}", True)
        ref = m_sequence_reference(ks)
        rep.add(f"s{i}-m-recurrence", "m_n", ref == res.plan.m_seq, {"ref": ref, "got": res.plan.m_seq})
        rep.add(f"s{i}-nodes", "|T' ∩ Z^n| <= 2^(k_n)", all(res.ledger["node_count"].values()))
        levels = dict(res.slalom.levels)
        if mutate is not None and i == 0:
            levels[mutate] = frozenset()
        for j in range(1, nfold + 1):
            ok, cex, checked = fakenull_level_oracle(res, s, levels, j, w)
            rep.add(f"s{i}-level-{j}", f"S_n + {j}-fold sums ⊆ S'_n", ok, cex, checked=checked)
            ok, cex, checked = fakenull_window_oracle(res, s, levels, j, w)
            rep.add(f"s{i}-window-{j}", f"F + {j}-fold [T'] hits S'", ok, cex, checked=checked)
        rep.artifacts[f"s{i}"] = {"k_seq": ks, "m_seq": res.plan.m_seq}


@scenario("miller-null")
def _miller_null(rep, w, params, rng):
    kmax = params.get("kmax", 5)
    res = shrink.miller_null_subtree(params.get("tree") or trees.make_full(), kmax)
    for k in range(kmax + 1):
        size = len(res.slalom.level(2 * k))
        rep.add(f"bound-{k}", "|S_2k| <= 2^k", size <= 2 ** k, {"k": k, "size": size})
    mass = ideals.slalom_mass(res.slalom, 2 * kmax)
    rep.add("mass", "partial mass <= 2", mass <= 2, {"mass": mass})
    D = 2 * kmax
    tr = trees.truncate(res.subtree, D, w.budget)
    bad = None
    for t in sorted(trees.body_at_depth(tr)):
        path = _miller_path(res, t, kmax)
        miss = [k for k in path if 2 * k <= D and t[: 2 * k] not in res.slalom.level(2 * k)]
        if miss or not path:
            bad = {"t": t, "path": path, "missed": miss}
            break
    rep.add("branches-hit", f"budget {w.budget}, depth {D}", bad is None, bad)
    rep.artifacts["slalom"] = res.slalom.to_json()


def _miller_path(res: shrink.MillerNullResult, t: Word, kmax: int) -> list[int]:
    """Indices i_0 < i_1 < ... with tau_(i_0..i_j) ⊆ t (compatible within t)."""
    sig: Word = EMPTY
    path = []
    while True:
        lo = sig[-1] + 1 if sig else 0
        nxt = None
        for i in range(lo, kmax + 1):
            cand = res.tau(sig + (i,))
            L = min(len(cand), len(t))
            if cand[:L] == t[:L] and len(res.tau(sig)) < len(t):
                nxt = i
                break
        if nxt is None:
            return path
        sig = sig + (nxt,)
        path.append(nxt)


def pair_scan(tr: escape.EscapeTrace, s: Slalom) -> tuple[bool, object]:
    total = word_add(tr.s_prefix, tr.t_prefix)
    for k in range(1, len(total) + 1):
        if total[:k] in s.level(k):
            return False, {"k": k, "prefix": total[:k]}
    return True, None


@scenario("miller-pair-escape")
def _pair(rep, w, params, rng):
    steps = params.get("steps", 8)
    kmax = params.get("kmax", 5)
    mn = shrink.miller_null_subtree(trees.make_full(), kmax)
    cases = [("miller-null", trees.make_full(), mn.subtree, mn.slalom)]
    T2 = trees.make_miller(lambda n: len(n) % 2 == 0)
    for i in range(params.get("count", 5)):
        cases.append((f"random-{i}", trees.make_full(), T2, random_slalom(rng, 2 * steps + 4, 1, 3)))
    for name, A, B, s in cases:
        tr = escape.miller_pair_escape(A, B, s, steps)
        ok, cex = pair_scan(tr, s)
        rep.add(f"{name}-scan", "every 0 < k <= length", ok and tr.ok, cex or tr.checked_conditions,
                length=len(tr.x_prefix))


def _twice(fn):
    a, b = fn(), fn()
    return a, a.dumps() == b.dumps()


@scenario("miller-meager-escape")
def _mme(rep, w, params, rng):
    steps = params.get("steps", 6)
    h = params.get("witness") or ideals.const_witness((0, 0))
    A = escape.make_alpha_tree()
    tr, same = _twice(lambda: escape.miller_meager_escape(A, h, steps))
    for c, v in tr.checked_conditions.items():
        rep.add(f"cond-{c}", "finished trace", v)
    rep.add("deterministic", "two runs", same)
    rep.artifacts["trace"] = tr.to_json()


@scenario("silver-nwd-escape")
def _sne(rep, w, params, rng):
    steps = params.get("steps", 6)
    h = params.get("witness") or ideals.const_witness((0, 0))
    sp = params.get("spec") or SilverSpec(FreeSet.progression(1, 3), Periodic((), (2, -1)))
    tr, same = _twice(lambda: escape.silver_nwd_escape(sp, h, steps))
    for c, v in tr.checked_conditions.items():
        rep.add(f"cond-{c}", "finished trace", v)
    rep.add("deterministic", "two runs", same)
    rep.artifacts["trace"] = tr.to_json()


def _mminus_check(rep, tag, res, c, n, w, depth_cap):
    d = min(res.horizon, depth_cap)
    body = sorted(trees.body_at_depth(trees.truncate(res.subtree, d, w.budget)))
    # F: words whose complete intervals from the threshold on avoid the old center
    wshort = Window(w.B, d, w.budget, w.N)
    F = []
    for x in enumerate_window(wshort):
        ok, _ = in_ideal_set(c, x, w.N)
        if ok:
            F.append(x)
    sums = sorted({_sum_all(t) for t in combinations_with_replacement(body, n)})
    rep.add(f"{tag}-sizes", "window", True, F=len(F), sums=len(sums))
    oracle_sum_in_cert(F, [sums], res.cert, wshort, f"{tag}-sum-in-cert", rep)


@scenario("mminus-perfect")
def _mmp(rep, w, params, rng):
    n = params.get("n_fold", 2)
    c = IntervalCert(Periodic((), (1,)), Cuts.uniform(1), "cofinite", 0)
    res = shrink.mminus_shrink_perfect(trees.make_full(), c, n, params.get("depth", 12))
    _mminus_check(rep, "perfect", res, c, n, w, w.d)
    rep.artifacts["cert"] = res.cert.to_json()


@scenario("mminus-silver")
def _mms(rep, w, params, rng):
    n = params.get("n_fold", 2)
    sp = params.get("spec") or SilverSpec(FreeSet.progression(0, 1), Periodic((), (1, 0)))
    c = IntervalCert(Periodic((), (0,)), Cuts.uniform(1), "cofinite", 0)
    res = shrink.mminus_shrink_silver(sp, c, n, params.get("depth", 12))
    _mminus_check(rep, "silver", res, c, n, w, w.d)
    rep.artifacts["cert"] = res.cert.to_json()
