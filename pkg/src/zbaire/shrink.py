"""Subtree constructions that keep F + [T'] + ... + [T'] inside an ideal.

Each construction returns the subtree lazily (continuing with the input tree
above the constructed leaves), the new certificate, and a ledger of the
numbered conditions of the underlying argument, checked on the finite data.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Mapping

from .ideals import IntervalCert, MeagerWitness, Slalom, make_slalom, slalom_mass
from .sequences import Cuts, FreeSet, Patched, SequenceError
from .trees import (
    SilverSpec,
    TreeError,
    TreeSpec,
    level,
    make_silver,
    nfold_sumset,
    subtree_of,
    truncate,
    truncation_level,
)
from .words import (
    EMPTY,
    Word,
    binary_lex,
    binary_words,
    enum_index,
    enum_word,
    incompatible,
    is_prefix,
    word_add,
    word_sub,
    zeros,
)


class ShrinkError(ValueError):
    pass


# --- meager sets and perfect trees

@dataclass
class SacksShrinkResult:
    tau: dict[Word, Word]                 # rho -> tau_rho
    tau_prime: dict[Word, Word]           # rho -> tau'_rho
    sigma_grid: dict[tuple[int, int], Word]  # (n, k) -> sigma^n_k, k = -1 included
    h_table: dict[int, Word]
    pads: dict[Word, int]                 # zeros appended to f(u) to reach the child length
    subtree: TreeSpec
    witness: MeagerWitness
    stages: int
    frozen: int = -1
    ledger: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        w = lambda x: list(x)
        return {
            "stages": self.stages,
            "frozen": self.frozen,
            "tau_map": [[w(r), w(self.tau_prime.get(r, ())), w(t)] for r, t in sorted(self.tau.items(), key=lambda kv: (len(kv[0]), kv[0]))],
            "sigma_grid": [[n, k, w(s)] for (n, k), s in sorted(self.sigma_grid.items())],
            "h_table": [[n, w(h)] for n, h in sorted(self.h_table.items())],
            "pads": [[w(r), p] for r, p in sorted(self.pads.items()) if p],
            "ledger": self.ledger,
        }


def _align_split(T: TreeSpec, nodes: list[Word], depth: int) -> list[Word]:
    """Extend all nodes (leftmost) to the least common length where each splits."""
    L = max(len(v) for v in nodes)
    while L <= depth:
        ext = [T.leftmost(v, L) for v in nodes]
        if all(T.is_split(e) for e in ext):
            return ext
        L += 1
    raise TreeError(f"no common splitting level within depth {depth}")


def sacks_shrink_meager(T: TreeSpec, f: Callable[[Word], Word], n_max: int, depth: int,
                        frozen: int = -1) -> SacksShrinkResult:
    """Perfect T' ⊆ T and witness h with F + [T'] covered by h, built up to stage n_max.

    Stages ``0..frozen`` keep the splitting levels of T (first two successors
    of each level node) instead of running the grid; the fusion uses this to
    keep T_{n+1} ⪯_n T_n.  ``h`` agrees with ``f`` on frozen indices.
    """
    tau: dict[Word, Word] = {}
    tau_p: dict[Word, Word] = {}
    grid: dict[tuple[int, int], Word] = {}
    pads: dict[Word, int] = {}
    h: dict[int, Word] = {}

    def split_ext(v: Word) -> Word:
        return T.split_above(v, depth)

    # stage 0
    if frozen >= 0:
        tau_p[EMPTY] = EMPTY
        tau[EMPTY] = split_ext(EMPTY)
        h[0] = tuple(f(EMPTY))
    else:
        f0 = tuple(f(EMPTY))
        tp = T.leftmost(EMPTY, len(f0))
        tau_p[EMPTY] = tp
        tau[EMPTY] = split_ext(tp)
        grid[(0, -1)] = EMPTY
        grid[(0, 0)] = word_add(f0, tp)
        h[0] = grid[(0, 0)]

    completed = 0
    for m in range(1, n_max + 1):
        parents = binary_words(m - 1)
        kids: dict[Word, Word] = {}
        for rho in parents:
            t = tau[rho]
            succ = T.successors(t, 2)
            if len(succ) < 2:
                raise ShrinkError(f"tau_{rho} = {t} is not splitting")
            for i in (0, 1):
                kids[rho + (i,)] = t + (succ[i],)
        if m <= frozen:
            for r, start in kids.items():
                tau_p[r] = start
            h[m] = tuple(f(enum_word(m)))
        else:
            sm = enum_word(m)
            prev = sm + zeros(m)
            grid[(m, -1)] = prev
            for k in range(2 ** m):
                r = binary_lex(m, k)
                start = kids[r]
                L0 = len(prev)
                base = T.leftmost(start, max(L0, len(start)))
                u = word_sub(prev, base[:L0])
                fu = tuple(f(u))
                pad = max(0, len(start) - (L0 + len(fu)))
                tp = T.leftmost(base, L0 + len(fu) + pad)
                tau_p[r] = tp
                pads[r] = pad
                prev = word_add(u + fu + zeros(pad), tp)
                grid[(m, k)] = prev
            h[m] = prev[len(sm):]
        new = list(kids)
        if T.uniform:
            aligned = _align_split(T, [tau_p[r] for r in new], depth)
            tau.update(zip(new, aligned))
        else:
            for r in new:
                tau[r] = split_ext(tau_p[r])
        completed = m

    leaves = [tau[r] for r in binary_words(n_max)]
    sub = subtree_of(T, leaves, leaves)
    witness = MeagerWitness({"rule": "fallback"}, h, f, n_max + 1)
    res = SacksShrinkResult(tau, tau_p, grid, h, pads, sub, witness, completed, frozen)
    res.ledger = check_sacks(res, T, f)
    return res


def check_sacks(res: SacksShrinkResult, T: TreeSpec, f: Callable[[Word], Word]) -> dict:
    """Conditions (i)-(iii) and the structural half of (iv) on every constructed index."""
    out = {"i": True, "ii": True, "iii": True, "iv": True, "failures": []}

    def fail(cond, msg):
        out[cond] = False
        out["failures"].append(f"({cond}) {msg}")

    for rho, t in res.tau.items():
        if not T.is_split(t):
            fail("i", f"tau_{rho} not splitting")
        if len(rho) < res.stages:
            c0, c1 = res.tau_prime[rho + (0,)], res.tau_prime[rho + (1,)]
            for i, c in ((0, c0), (1, c1)):
                if not (is_prefix(t, c) and is_prefix(c, res.tau[rho + (i,)]) and len(c) > len(t)):
                    fail("i", f"tau_{rho} ⊆ tau'_{rho + (i,)} ⊆ tau_{rho + (i,)} fails")
            if not incompatible(c0, c1):
                fail("i", f"tau'_{rho}^0 and tau'_{rho}^1 compatible")
    for m in range(res.stages + 1):
        if m <= res.frozen or (m, -1) not in res.sigma_grid:
            continue
        sm = enum_word(m)
        if res.sigma_grid[(m, -1)] != sm + zeros(m):
            fail("ii", f"sigma^{m}_-1 != sigma_{m}^0^{m}")
        chain = [res.sigma_grid[(m, k)] for k in range(-1, 2 ** m)]
        if not all(is_prefix(a, b) for a, b in zip(chain, chain[1:])):
            fail("ii", f"stage {m} grid not increasing")
        if res.h_table[m] != chain[-1][len(sm):] or not is_prefix(sm, chain[-1]):
            fail("ii", f"h(sigma_{m}) does not close the grid")
        for k in range(2 ** m):
            r = binary_lex(m, k)
            tp, prev = res.tau_prime[r], chain[k]
            u = word_sub(prev, tp[: len(prev)])
            fu = tuple(f(u)) + zeros(res.pads.get(r, 0))
            if len(tp) != len(u) + len(fu):
                fail("iii", f"|tau'_{r}| = {len(tp)} != {len(u) + len(fu)}")
            if chain[k + 1] != word_add(u + fu, tp):
                fail("iii", f"sigma^{m}_{k} != (u^f(u)) + tau'")
            if res.pads.get(r, 0) and len(prev) + len(f(u)) >= len(res.tau[r[:-1]]) + 1:
                fail("iii", f"padding at {r} was not needed")
            # (iv): sigma^m_k ⊆ x + tau' forces u^f(u) ⊆ x with index(u) >= m
            if enum_index(u) < m:
                fail("iv", f"index of u at ({m},{k}) below {m}")
    return out


def avoidance_holds(res: SacksShrinkResult, f: Callable[[Word], Word], n: int, k: int, x: Word) -> bool | None:
    """Condition (iv) for one x: returns None when x does not satisfy the premise.

    Only prefixes of x can realise a pattern sigma_m^f(sigma_m) ⊆ x, so the
    premise over all m >= n is decidable on the finite word.
    """
    tp = res.tau_prime[binary_lex(n, k)]
    if len(x) < len(tp):
        raise ShrinkError("x shorter than tau'")
    for L in range(len(x) + 1):
        p = x[:L]
        if enum_index(p) >= n:
            pat = p + tuple(f(p))
            if is_prefix(pat, x):
                return None
    s = res.sigma_grid[(n, k)]
    return not is_prefix(s, word_add(x[: len(tp)], tp))


@dataclass
class FusionResult:
    trees: list[TreeSpec]
    shrinks: list[SacksShrinkResult]
    witnesses: list[Callable[[Word], Word]]

    @property
    def tree(self) -> TreeSpec:
        return self.trees[-1]


def sacks_fusion(T: TreeSpec, w: Callable[[Word], Word], stages: int, depth: int,
                 extra: int = 1) -> FusionResult:
    """T_0 = T, T_{n+1} = shrink of T_n with stages 0..n frozen, F_{n+1} witnessed by h_n."""
    trees, shrinks, wits = [T], [], [w]
    for n in range(stages):
        res = sacks_shrink_meager(trees[-1], wits[-1], n + extra, depth, frozen=n)
        shrinks.append(res)
        trees.append(res.subtree)
        wits.append(res.witness)
    return FusionResult(trees, shrinks, wits)


def fusion_window(fr: FusionResult, n: int, budget: int = 2):
    """Truncations of T_{n+1} and T_n deep enough to contain level n of both."""
    lv = fr.shrinks[n].tau
    d = max(len(t) for r, t in lv.items() if len(r) == n) + 1
    return truncate(fr.trees[n + 1], d, budget), truncate(fr.trees[n], d, budget)


# --- M- (interval partition) certificates

@dataclass
class MinusShrinkResult:
    subtree: TreeSpec
    cert: IntervalCert
    blocks: list[dict]          # per block: start/end, designated intervals, patterns
    horizon: int                # positions covered by completed blocks
    silver: SilverSpec | None = None
    ledger: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        d = {"cert": self.cert.to_json(), "horizon": self.horizon, "blocks": self.blocks,
             "ledger": self.ledger}
        if self.silver is not None:
            d["silver"] = self.silver.to_json()
        return d


def _sum_patterns(patterns: list[Word], n: int, width: int) -> list[Word]:
    out = []
    for combo in combinations_with_replacement(range(len(patterns)), n):
        acc = zeros(width)
        for i in combo:
            acc = word_add(acc, patterns[i])
        out.append(acc)
    return out


def mminus_shrink_perfect(T: TreeSpec, c: IntervalCert, n: int, depth: int) -> MinusShrinkResult:
    """Perfect T' ⊆ T and a coarser interval certificate for F + n-fold [T'].

    Stage j freezes T' on a stretch of whole intervals, one interval per
    possible n-fold sum of the frontier's patterns; there the new center is
    the old center plus that sum.  Each frontier node then splits once.  The
    new blocks run from one stretch to the next.
    """
    if c.mode != "cofinite":
        raise ShrinkError("M- shrink expects a cofinite-mode certificate")
    if n == 0:
        return MinusShrinkResult(T, c, [], depth, ledger={"unchanged": True})
    cuts = c.cuts
    frontier = [EMPTY]
    blocks: list[dict] = []
    center_vals: dict[int, int] = {}
    m0 = 0
    leaves = frontier
    while True:
        count_q = len(_sum_patterns([()] * len(frontier), n, 0))
        end = cuts(m0 + count_q)
        if end > depth:
            break
        start = cuts(m0)
        ext = [T.leftmost(v, end) for v in frontier]
        pats = [e[start:end] for e in ext]
        sums = _sum_patterns(pats, n, end - start)
        designated = []
        for q, p in enumerate(sums):
            I = cuts.interval(m0 + q)
            for pos in I:
                center_vals[pos] = c.center(pos) + p[pos - start]
            designated.append(m0 + q)
        blocks.append({"start": start, "stretch_end": end, "designated": designated,
                       "frontier": len(frontier)})
        leaves = ext
        new = []
        for e in ext:
            s = T.split_above(e, depth)
            a, b = T.successors(s, 2)[:2]
            new += [s + (a,), s + (b,)]
        frontier = new
        L = max(len(v) for v in frontier)
        m0 = cuts.index_of(L)
        if cuts(m0) < L:
            m0 += 1
        if cuts(m0) > depth:
            break
    if not blocks:
        raise ShrinkError(f"window depth {depth} too small for one split-free stretch")
    # blocks partition: block j = [start_j, start_{j+1}); the last extends to the next cut
    starts = [b["start"] for b in blocks]
    last_end = cuts(cuts.index_of(max(len(v) for v in frontier)) + 1)
    head = tuple(starts) + (max(last_end, blocks[-1]["stretch_end"]),)
    new_cuts = Cuts(head, step=max(1, head[-1] - head[-2]))
    for j, b in enumerate(blocks):
        b["end"] = head[j + 1]
    thr = next((j for j, b in enumerate(blocks) if b["designated"][0] >= c.threshold), len(blocks))
    cert = IntervalCert(Patched(c.center, center_vals), new_cuts, "cofinite", thr)
    # T' keeps the leftmost path through each stretch and both chosen successors after it
    core = [v for v in frontier]
    sub = subtree_of(T, core, core)
    res = MinusShrinkResult(sub, cert, blocks, head[len(blocks)])
    res.ledger = {"blocks": len(blocks), "threshold": thr, "horizon": res.horizon}
    return res


class ThinnedSet:
    """A free set with whole intervals removed: after each interval that keeps a
    free element, the next interval is dropped entirely."""

    def __init__(self, base: FreeSet, cuts: Cuts):
        self.base = base
        self.cuts = cuts
        self._dropped: list[bool] = []

    def dropped(self, m: int) -> bool:
        while len(self._dropped) <= m:
            j = len(self._dropped)
            prev_kept = j > 0 and not self._dropped[j - 1] and any(
                p in self.base for p in self.cuts.interval(j - 1))
            self._dropped.append(prev_kept)
        return self._dropped[m]

    def __contains__(self, p: int) -> bool:
        return p in self.base and not self.dropped(self.cuts.index_of(p))

    def upto(self, d: int) -> list[int]:
        return [p for p in range(d) if p in self]

    def designated(self, d: int) -> list[int]:
        return [m for m in range(self.cuts.index_of(d) + 1)
                if self.cuts(m + 1) <= d and self.dropped(m)]

    def to_json(self) -> dict:
        return {"type": "thinned", "base": self.base.to_json(), "cuts": self.cuts.to_json()}


def mminus_shrink_silver(s: SilverSpec, c: IntervalCert, n: int, depth: int) -> MinusShrinkResult:
    """omega-Silver T' ⊆ T (same center, A' ⊆ A) and an interval certificate for F + n-fold [T'].

    On a dropped interval every branch of T' equals the center x_T, so an
    n-fold sum adds n * x_T there; the new center is c + n * x_T on dropped
    intervals and each block ends with one dropped interval.
    """
    if c.mode != "cofinite":
        raise ShrinkError("M- shrink expects a cofinite-mode certificate")
    thinned = ThinnedSet(s.free_set, c.cuts)
    s2 = SilverSpec(thinned, s.center)
    if n == 0:
        return MinusShrinkResult(make_silver(s2), c, [], depth, s2, {"unchanged": True})
    designated = thinned.designated(depth)
    if not designated:
        raise ShrinkError(f"window depth {depth} too small to drop an interval")
    center_vals = {}
    for m in designated:
        for p in c.cuts.interval(m):
            center_vals[p] = c.center(p) + n * s.center(p)
    # block j ends right after designated interval j
    ends = [c.cuts(m + 1) for m in designated]
    head = (0,) + tuple(ends)
    new_cuts = Cuts(head, step=max(1, head[-1] - head[-2]) if len(head) > 1 else 1)
    thr = next((j for j, m in enumerate(designated) if m >= c.threshold), len(designated))
    cert = IntervalCert(Patched(c.center, center_vals), new_cuts, "cofinite", thr)
    blocks = [{"start": head[j], "end": head[j + 1], "designated": [m]} for j, m in enumerate(designated)]
    res = MinusShrinkResult(make_silver(s2), cert, blocks, head[-1], s2)
    res.ledger = {"subset": all(p in s.free_set for p in thinned.upto(depth)),
                  "free_infinite_in_window": len(thinned.upto(depth)) > 0,
                  "blocks": len(blocks), "threshold": thr}
    return res


# --- fake null sets

@dataclass
class FakeNullShrinkPlan:
    k_seq: list[int]
    m_seq: list[int]
    budget: Fraction
    weighted: list[Fraction]      # running sums of 2^(k_n^3) |S_n| / 2^n

    def to_json(self) -> dict:
        return {"k_seq": self.k_seq, "m_seq": self.m_seq,
                "budget": {"num": self.budget.numerator, "den": self.budget.denominator},
                "weighted_total": str(self.weighted[-1]) if self.weighted else "0"}


def m_sequence(k_seq: list[int]) -> list[int]:
    """m_0 = 0, m_{j+1} = least m > m_j with k_m > k_{m_j}, as far as k_seq reaches."""
    ms = [0]
    while True:
        cur = ms[-1]
        nxt = next((m for m in range(cur + 1, len(k_seq)) if k_seq[m] > k_seq[cur]), None)
        if nxt is None:
            return ms
        ms.append(nxt)


def choose_kn(s: Slalom, horizon: int, budget: Fraction | None = None) -> FakeNullShrinkPlan:
    """Greedy non-decreasing k_n <= n keeping sum 2^(k^3)|S_n|/2^n within ``budget``.

    k_n is the largest value for which holding it constant over the rest of
    the horizon still fits the budget, so earlier choices never become
    infeasible.  The default budget is 2 * mass + 1.
    """
    mass = slalom_mass(s, horizon)
    W = Fraction(budget) if budget is not None else 2 * mass + 1
    if mass > W:
        raise ShrinkError(f"slalom mass {mass} exceeds budget {W}")
    terms = [Fraction(len(s.level(n)), 2 ** n) for n in range(horizon + 1)]
    tails = [sum(terms[n:], Fraction(0)) for n in range(horizon + 2)]
    ks, run, weighted = [], Fraction(0), []
    k = 0
    for n in range(horizon + 1):
        best = k
        for cand in range(k, n + 1):
            if run + 2 ** (cand ** 3) * tails[n] <= W:
                best = cand
            else:
                break
        k = best
        run += 2 ** (k ** 3) * terms[n]
        ks.append(k)
        weighted.append(run)
    return FakeNullShrinkPlan(ks, m_sequence(ks), W, weighted)


@dataclass
class FakeNullShrinkResult:
    subtree: TreeSpec
    slalom: Slalom
    plan: FakeNullShrinkPlan
    tau: dict[Word, Word]
    levels: dict[int, frozenset]   # T' ∩ Z^n for n <= horizon
    ledger: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"plan": self.plan.to_json(), "slalom": self.slalom.to_json(),
                "tau": [[list(r), list(t)] for r, t in sorted(self.tau.items(), key=lambda kv: (len(kv[0]), kv[0]))],
                "ledger": self.ledger}


def fakenull_shrink_perfect(T: TreeSpec, s: Slalom, depth: int, budget: Fraction | None = None,
                            plan: FakeNullShrinkPlan | None = None) -> FakeNullShrinkResult:
    """Perfect T' ⊆ T with S'_n = S_n + union_{j<=k_n} j-fold sums of T' ∩ Z^n.

    Splitting nodes tau_sigma (sigma binary) have |tau_sigma| >= m_{|sigma|+1},
    which keeps |T' ∩ Z^n| <= 2^(k_n).  After the last m available in the
    window the leaves are extended past the horizon before T takes over.
    """
    horizon = s.horizon
    plan = plan or choose_kn(s, horizon, budget)
    ms = plan.m_seq
    tau: dict[Word, Word] = {}

    def place(v: Word, j: int) -> Word:
        need = ms[j + 1] if j + 1 < len(ms) else horizon + 1
        return T.split_above(T.leftmost(v, max(len(v), need)), depth)

    tau[EMPTY] = place(EMPTY, 0)
    frontier = [EMPTY]
    j = 0
    while j + 1 < len(ms):
        new = []
        for r in frontier:
            a, b = T.successors(tau[r], 2)[:2]
            for i, v in ((0, a), (1, b)):
                tau[r + (i,)] = place(tau[r] + (v,), j + 1)
                new.append(r + (i,))
        frontier = new
        j += 1
    leaves = [tau[r] for r in frontier]
    sub = subtree_of(T, leaves, leaves)
    tr = truncate(sub, horizon, 2)
    lv = {n: frozenset(w for w in tr.nodes if len(w) == n) for n in range(horizon + 1)}
    new_levels = {}
    ledger = {"bound": {}, "node_count": {}, "tau_i": True, "tau_ii": True, "tau_iii": True}
    for n in range(horizon + 1):
        S = s.level(n)
        kn = plan.k_seq[n]
        sums: set[Word] = set()
        if S and kn:
            for jj in range(1, kn + 1):
                sums |= nfold_sumset(lv[n], jj, n)
        Sp = {word_add(a, b) for a in S for b in sums}
        new_levels[n] = frozenset(Sp)
        ledger["bound"][n] = len(Sp) <= len(S) * 2 ** (kn ** 3)
        ledger["node_count"][n] = len(lv[n]) <= 2 ** kn
    for r, t in tau.items():
        need = ms[len(r)] if len(r) < len(ms) else 0
        ledger["tau_i"] &= len(t) >= need
        ledger["tau_iii"] &= T.is_split(t)
        if r:
            ledger["tau_ii"] &= is_prefix(tau[r[:-1]], t)
        if r + (0,) in tau:
            ledger["tau_iii"] &= incompatible(tau[r + (0,)], tau[r + (1,)])
    mass = sum((Fraction(len(v), 2 ** n) for n, v in new_levels.items()), Fraction(0))
    s2 = Slalom({n: v for n, v in new_levels.items() if v}, horizon, mass,
                {"rule": "weighted", "k_seq": plan.k_seq})
    res = FakeNullShrinkResult(sub, s2, plan, tau, lv, ledger)
    if not all(ledger["bound"].values()):
        raise ShrinkError(f"level bound violated: {ledger['bound']}")
    return res


@dataclass
class MillerNullResult:
    subtree: TreeSpec
    slalom: Slalom
    tau: Callable[[Word], Word]
    kmax: int
    ledger: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        from itertools import combinations

        taus = []
        for k in range(self.kmax + 1):
            for r in range(k + 1):
                for sub in combinations(range(k), r):
                    sig = sub + (k,)
                    taus.append([list(sig), list(self.tau(sig))])
        return {"kmax": self.kmax, "tau": taus, "slalom": self.slalom.to_json(), "ledger": self.ledger}


def miller_null_subtree(T: TreeSpec, kmax: int, depth: int = 200) -> MillerNullResult:
    """Miller T' ⊆ T with [T'] captured by S_{2k} = {tau_sigma|2k : max sigma = k}.

    tau_sigma is indexed by strictly increasing sequences; tau_{sigma^i} takes
    the r-th omega-successor of tau_sigma (r = i - max(sigma) - 1) and climbs
    to an omega-splitting node of length >= 2i.  T' is lazy and remains Miller.
    """
    from functools import lru_cache
    from itertools import combinations

    def omega_above(v: Word, min_len: int) -> Word:
        while len(v) < min_len or not T.infinite_stream(v):
            if len(v) > depth:
                raise TreeError(f"no omega-splitting node above {v} within depth {depth}")
            v = T.leftmost(v, len(v) + 1)
        return v

    @lru_cache(maxsize=None)
    def tau(sig: Word) -> Word:
        if not sig:
            return omega_above(EMPTY, 0)
        parent = tau(sig[:-1])
        lo = sig[-2] + 1 if len(sig) > 1 else 0
        r = sig[-1] - lo
        v = T.successors(parent, r + 1)[r]
        return omega_above(parent + (v,), 2 * sig[-1])

    def locate(w: Word):
        """(sigma, next index or None) with tau_sigma ⊆ w maximal."""
        sig = EMPTY
        t = tau(sig)
        if len(w) <= len(t):
            return sig, None
        while True:
            v = w[len(t)]
            succ = T.successors(t, 1)
            r = 0
            budget = 1
            while True:
                succ = T.successors(t, budget)
                if v in succ:
                    r = succ.index(v)
                    break
                if len(succ) < budget:
                    return None
                budget *= 2
            lo = sig[-1] + 1 if sig else 0
            nxt = sig + (lo + r,)
            tn = tau(nxt)
            if len(w) <= len(tn):
                return sig, nxt
            sig, t = nxt, tn

    def succ(node: Word):
        loc = locate(node)
        if loc is None:
            return ()
        sig, nxt = loc
        t = tau(sig)
        if nxt is None:
            if not is_prefix(node, t):
                return ()
            return None if node == t else (t[len(node)],)
        tn = tau(nxt)
        if not is_prefix(node, tn):
            return ()
        return None if node == tn else (tn[len(node)],)

    sub = TreeSpec("miller", succ, T.allowed, origin=T.origin, meta={"parent": T})
    levels = {}
    ledger = {"i": True, "ii": True, "iii": True, "iv": True, "bound": {}}
    for k in range(kmax + 1):
        sigs = [sub_ + (k,) for r in range(k + 1) for sub_ in combinations(range(k), r)]
        levels[2 * k] = frozenset(tau(sg)[: 2 * k] for sg in sigs)
        ledger["bound"][k] = len(levels[2 * k]) <= 2 ** k
        for sg in sigs:
            t = tau(sg)
            ledger["i"] &= T.infinite_stream(t)
            ledger["ii"] &= len(t) > len(tau(sg[:-1])) and is_prefix(tau(sg[:-1]), t)
            ledger["iv"] &= len(t) >= 2 * k
        for sg in [()] + [s_ for s_ in sigs if len(s_) and s_[-1] < kmax]:
            lo = sg[-1] + 1 if sg else 0
            firsts = [tau(sg + (i,))[len(tau(sg))] for i in range(lo, kmax + 1)]
            ledger["iii"] &= len(set(firsts)) == len(firsts)
    mass = sum((Fraction(len(v), 2 ** n) for n, v in levels.items()), Fraction(0))
    sl = Slalom({n: v for n, v in levels.items() if v}, 2 * kmax, mass,
                {"rule": "geometric", "bound": "2^k/2^(2k)", "total": 2})
    return MillerNullResult(sub, sl, tau, kmax, ledger)
