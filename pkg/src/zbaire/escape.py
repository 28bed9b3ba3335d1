"""Branch constructions for the negative results.

Each builds explicit finite prefixes of points x, t (and s) whose sum escapes
an ideal or hits a target, step by step, logging every forbidden set and
choice so a trace replays exactly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .ideals import Slalom
from .sequences import Cuts
from .trees import SilverSpec, TreeError, TreeSpec
from .words import (
    EMPTY,
    Word,
    enum_index,
    enum_word,
    is_prefix,
    word_add,
    word_sub,
    zigzag,
    zigzag_int,
    zigzag_rank,
)


class EscapeError(ValueError):
    pass


@dataclass
class EscapeTrace:
    x_prefix: Word
    t_prefix: Word
    s_prefix: Word | None = None
    step_log: list[dict] = field(default_factory=list)
    checked_conditions: dict[str, bool] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checked_conditions.values())

    def to_json(self) -> dict:
        d = {"x_prefix": list(self.x_prefix), "t_prefix": list(self.t_prefix),
             "step_log": self.step_log, "ledger": self.checked_conditions}
        if self.s_prefix is not None:
            d["s_prefix"] = list(self.s_prefix)
        if self.notes:
            d["notes"] = self.notes
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _pick(T: TreeSpec, node: Word, forbidden: set[int], budget_cap: int | None = None) -> int:
    """Zigzag-least successor of ``node`` outside ``forbidden``."""
    need = len(forbidden) + 1
    if T.infinite_stream(node):
        if budget_cap is not None and budget_cap < need:
            raise EscapeError(f"budget {budget_cap} at {node} below required {need} "
                              f"(deficit {need - budget_cap})")
        cands = T.successors(node, need)
    else:
        cands = T.successors(node, need)
    for v in cands:
        if v not in forbidden:
            return v
    raise EscapeError(f"every successor of {node} is forbidden ({sorted(forbidden)})")


def _omega_above(T: TreeSpec, v: Word, strict: bool = False, limit: int = 10_000) -> Word:
    if strict:
        v = T.leftmost(v, len(v) + 1)
    while not T.infinite_stream(v):
        if len(v) > limit:
            raise TreeError(f"no omega-splitting node above {v}")
        v = T.leftmost(v, len(v) + 1)
    return v


# --- M is not contained in M-

class Bijection:
    """A bijection Z^{<w} -> Z with its inverse (default: zigzag of the enumeration index)."""

    def __init__(self, f: Callable[[Word], int] | None = None, inv: Callable[[int], Word] | None = None):
        self.f = f or (lambda s: zigzag_int(enum_index(s)))
        self.inv = inv if f is not None else (lambda v: enum_word(zigzag_rank(v)))

    def __call__(self, s: Sequence[int]) -> int:
        return self.f(tuple(s))


def avoid_tree(fbij: Callable[[Word], int] | None = None) -> TreeSpec:
    """{sigma : sigma(n) != f(sigma|n) for all n < |sigma|}."""
    fb = fbij or Bijection()
    return TreeSpec("avoid", lambda node: None, lambda node, i: i != fb(node), meta={"f": fb})


def m_not_mminus_branch(fbij: Bijection | None, y: Callable[[int], int], cuts: Cuts, m: int) -> EscapeTrace:
    """x in [T] agreeing with y on the odd intervals I_1, I_3, ..., I_{2m-1}."""
    if m < 1:
        raise EscapeError("need m >= 1")
    fb = fbij or Bijection()
    T = avoid_tree(fb)
    x: Word = EMPTY
    log = []
    bound_ok = True
    for step in range(m):
        n = 2 * step + 1
        a, end = cuts(n), cuts(n + 1)
        pat = tuple(y(i) for i in range(a, end))
        # F: the sigma of length a for which appending pat leaves T
        forbidden: set[Word] = set()
        if fb.inv is not None:
            for j in range(len(pat)):
                tw = fb.inv(pat[j])
                if len(tw) == a + j and tw[a:] == pat[:j] and is_prefix(x, tw):
                    forbidden.add(tw[:a])
        base = T.leftmost(x, a - 1) if a > len(x) else x
        chosen = None
        tried = 0
        for v in zigzag():
            if a > len(x):
                if not T.has_child(base, v):
                    continue
                sigma = base + (v,)
            else:
                sigma = base
            tried += 1
            cand = sigma + pat
            if T.contains(cand) and sigma not in forbidden:
                chosen = sigma
                break
            if a <= len(x):
                break
        if chosen is None:
            raise EscapeError(f"step {step}: no admissible sigma")
        if fb.inv is None:
            forbidden = set()
        bound_ok &= len(forbidden) <= end - a
        x = chosen + pat
        log.append({"step": step, "interval": [a, end - 1], "forbidden": sorted(list(f) for f in forbidden),
                    "chosen": list(chosen), "pattern": list(pat), "tried": tried})
    agree = sum(1 for s in range(m) if all(x[i] == y(i) for i in cuts.interval(2 * s + 1)))
    ledger = {"x_in_T": T.contains(x), "agreements>=m": agree >= m, "forbidden_bound": bound_ok}
    return EscapeTrace(x, tuple(y(i) for i in range(len(x))), None, log, ledger)


# --- Laver trees against A = {x : x(n) != 0 for almost all n}

def laver_sum_decompose(T: TreeSpec, z: Sequence[int], depth: int | None = None) -> EscapeTrace:
    """x + y = z with y in T, x(n) != 0 beyond the stem."""
    z = tuple(z)
    depth = len(z) if depth is None else depth
    st = T.split_above(EMPTY, depth)
    if len(st) > len(z):
        raise EscapeError("z shorter than the stem")
    y = st
    log = []
    for n in range(len(st), depth):
        node = y
        succ = T.successors(node, 2)
        if len(succ) < 2:
            raise EscapeError(f"node {node} above the stem has fewer than 2 successors; "
                              "the decomposition needs every node above the stem to split")
        v = succ[0] if succ[0] != z[n] else succ[1]
        y = y + (v,)
        log.append({"step": n, "forbidden": [z[n]], "chosen": v})
    x = word_sub(z[:depth], y)
    ledger = {
        "sum_exact": word_add(x, y) == z[:depth],
        "y_in_T": T.contains(y),
        "x_nonzero_beyond_stem": all(x[n] != 0 for n in range(len(st), depth)),
    }
    return EscapeTrace(x, y, None, log, ledger)


# --- Miller trees against meager sets

def make_alpha_tree(alpha: Bijection | None = None, check: int = 3) -> TreeSpec:
    """rng(alpha-hat) where alpha-hat(s^i) = alpha-hat(s)^alpha(s^i).

    Successors of alpha-hat(s) stream as alpha(s^i) for i in zigzag order.
    """
    al = alpha or Bijection()
    if al.inv is None:
        raise EscapeError("alpha needs an inverse to decide membership")

    def decode(w: Word):
        s: Word = EMPTY
        for v in w:
            pre = al.inv(v)
            if len(pre) != len(s) + 1 or pre[:-1] != s:
                return None
            s = pre
        return s

    def allowed(node, v):
        s = decode(node)
        if s is None:
            return False
        pre = al.inv(v)
        return len(pre) == len(s) + 1 and pre[:-1] == s

    T = TreeSpec("alpha-image", lambda node: None, allowed, meta={"alpha": al, "decode": decode})
    object.__setattr__(T, "successors", lambda node, budget: _alpha_stream(al, decode, tuple(node), budget))
    # injectivity on a small window
    seen = set()
    for n in range(2 * check + 1):
        for m in range(3):
            s = tuple(zigzag_int(r) for r in (n, m))[: 1 + (m > 0)]
            v = al(s)
            if (v, s) not in seen and any(v == u for u, _ in seen):
                raise EscapeError(f"alpha not injective at {s}")
            seen.add((v, s))
    return T


def _alpha_stream(al, decode, node: Word, budget: int) -> tuple[int, ...]:
    s = decode(node)
    if s is None:
        return ()
    return tuple(al(s + (zigzag_int(r),)) for r in range(budget))


def miller_meager_escape(Tp: TreeSpec, h: Callable[[Word], Word], steps: int,
                         budget_cap: int | None = None) -> EscapeTrace:
    """x with nonzero entries and t in [Tp] whose sum contains sigma_n^h(sigma_n) for each step."""
    st = Tp.split_above(EMPTY, 10_000)
    sigma = tuple(0 if v != 0 else 1 for v in st)
    target = sigma + tuple(h(sigma))

    def steer(start: Word, tgt: Word) -> Word:
        t = start
        while len(t) < len(tgt):
            v = _pick(Tp, t, {tgt[len(t)]}, budget_cap)
            t = t + (v,)
        return t

    log = []
    t = steer(st, target) if len(target) > len(st) else st[: len(target)]
    if len(target) < len(st):
        t = st[: len(target)]
    tau = [t]
    xi = [word_sub(target, t)]
    sig = [sigma]
    tgts = [target]
    tp = [_omega_above(Tp, t)]
    log.append({"step": 0, "sigma": list(sigma), "pattern": list(target[len(sigma):]),
                "tau": list(t), "tau_prime": list(tp[0])})
    for n in range(steps):
        prev_t, prev_tp = tau[-1], tp[-1]
        if len(prev_tp) <= len(sig[-1]):
            prev_tp = _omega_above(Tp, prev_tp, strict=True)
            tp[-1] = prev_tp
        base = tgts[-1]
        new_sig = base + tuple(0 if prev_tp[k] != 0 else 1 for k in range(len(base), len(prev_tp)))
        target = new_sig + tuple(h(new_sig))
        t = steer(prev_tp, target)
        tau.append(t)
        xi.append(word_sub(target, t))
        sig.append(new_sig)
        tgts.append(target)
        tp.append(_omega_above(Tp, t))
        log.append({"step": n + 1, "sigma": list(new_sig), "pattern": list(target[len(new_sig):]),
                    "tau": list(t), "tau_prime": list(tp[-1])})
    ledger = {
        "i": all(len(b) > len(a) for a, b in zip(sig, sig[1:])),
        "ii": all(is_prefix(tau[j], tp[j]) and Tp.infinite_stream(tp[j]) for j in range(len(tau)))
        and all(is_prefix(tp[j], tau[j + 1]) for j in range(len(tau) - 1)),
        "iii": all(is_prefix(a, b) for a, b in zip(xi, xi[1:]))
        and all(len(xi[j]) == len(tau[j]) and all(e != 0 for e in xi[j]) for j in range(len(xi))),
        "iv": all(is_prefix(tgts[j], word_add(xi[j], tau[j])) for j in range(len(xi))),
        "t_in_tree": Tp.contains(tau[-1]),
    }
    return EscapeTrace(xi[-1], tau[-1], None, log, ledger)


# --- omega-Silver trees against meager sets

def _silver_F_ok(rho: Word) -> bool:
    """No sigma_k^0^k ⊆ rho, for sigma_k ranging over prefixes of rho.

    k = 0 is skipped: sigma_0 is empty and would put every x outside F.
    """
    for L in range(1, len(rho) + 1):
        k = enum_index(rho[:L])
        if L + k <= len(rho) and all(e == 0 for e in rho[L:L + k]):
            return False
    return True


def silver_nwd_escape(A: SilverSpec, h: Callable[[Word], Word], steps: int,
                      window: int = 10_000) -> EscapeTrace:
    """x in F = {x : no sigma_n^0^n ⊆ x} and t in [T] with (t+x) containing eta^h(eta) each step.

    A nonzero center is handled by running against the translated witness
    h'(s) = h(s + c|s) - c on the pattern positions and adding c to t.
    """
    c = A.center
    fs = A.free_set

    def hh(s: Word) -> Word:
        cs = tuple(c(i) for i in range(len(s)))
        out = tuple(h(word_add(s, cs)))
        return tuple(v - c(len(s) + i) for i, v in enumerate(out))

    def next_free(L: int) -> int:
        p = L
        while p not in fs:
            p += 1
            if p > window:
                raise EscapeError(f"free set has no element in [{L}, {window}]")
        return p

    log = []
    rho_l, tau_l = [], []
    a0 = next_free(0)
    rho_p, tau_p = (1,) * a0, (0,) * a0
    for n in range(steps + 1):
        if n > 0:
            rho_prev, tau_prev = rho_l[-1], tau_l[-1]
            pat = hh(word_add(tau_prev, rho_prev))
            L = next_free(len(rho_prev) + len(pat))
            rho_p = rho_prev + pat + (1,) * (L - len(rho_prev) - len(pat))
            tau_p = tau_prev + (0,) * (L - len(tau_prev))
        bound = len(hh(word_add(tau_p, rho_p) + (1,)))
        chosen, tried = None, []
        for v in zigzag():
            if v == 0:
                continue
            cand = rho_p + (v,)
            tried.append(v)
            if enum_index(cand) > bound and _silver_F_ok(cand):
                chosen = v
                break
        rho_l.append(rho_p + (chosen,))
        tau_l.append(tau_p + (1 - chosen,))
        log.append({"step": n, "free_position": len(rho_p), "l": chosen, "index_bound": bound,
                    "forbidden": [v for v in tried if v != chosen],
                    "pattern": list(hh(word_add(tau_p, rho_p) + (1,)))})
    sums = [word_add(t, r) for t, r in zip(tau_l, rho_l)]
    t_final = word_add(tau_l[-1], tuple(c(i) for i in range(len(tau_l[-1]))))
    ledger = {
        "i": all(len(b) > len(a) and is_prefix(a, b) for a, b in zip(rho_l, rho_l[1:]))
        and all(is_prefix(a, b) for a, b in zip(tau_l, tau_l[1:])),
        "ii": all(_silver_F_ok(r) for r in rho_l),
        "iii": all(t[k] == 0 for t in tau_l for k in range(len(t)) if k not in fs),
        "iv": all(is_prefix(s + hh(s), s2) for s, s2 in zip(sums, sums[1:])),
    }
    cs = tuple(c(i) for i in range(len(t_final)))
    orig = [word_add(u, cs[: len(u)]) for u in sums]
    ledger["iv_uncentered"] = all(is_prefix(u + tuple(h(u)), word_add(v, cs[: len(v)]))
                                  for u, v in zip(orig, sums[1:]))
    notes = ["l_n is the zigzag-least nonzero value with index(rho'_n^l_n) > |h(...^1)| "
             "and the completed prefix still outside F"]
    return EscapeTrace(rho_l[-1], t_final, None, log, ledger, notes)


# --- pairs of Miller trees against fake null sets

def miller_pair_escape(T1: TreeSpec, T2: TreeSpec, s: Slalom, steps: int,
                       budget_cap: int | None = None) -> EscapeTrace:
    """s in [T1], t in [T2] with (s+t)|k outside S_k for every 0 < k <= length."""
    a = _omega_above(T1, EMPTY)
    b = _omega_above(T2, EMPTY)
    swapped = len(a) > len(b)
    if swapped:
        T1, T2, a, b = T2, T1, b, a
    sig, tau = [a], [b[: len(a)]]
    log = []

    def forbid(pos: int, lo: int, hi: int, other: Word) -> set[int]:
        return {eta[pos] - other[pos] for k in range(lo + 1, hi + 1) for eta in s.level(k)}

    for step in range(1, steps + 1):
        if step % 2 == 1:
            # extend tau to a strictly longer omega-split node, steer sigma at the old length
            new_t = _omega_above(T2, tau[-1], strict=True)
            pos = len(tau[-1])
            F = forbid(pos, pos, len(new_t), new_t)
            v = _pick(T1, sig[-1], F, budget_cap)
            new_s = T1.leftmost(sig[-1] + (v,), len(new_t))
            mover = "sigma"
        else:
            new_s = _omega_above(T1, sig[-1], strict=True)
            pos = len(sig[-1])
            F = forbid(pos, pos, len(new_s), new_s)
            v = _pick(T2, tau[-1], F, budget_cap)
            new_t = T2.leftmost(tau[-1] + (v,), len(new_s))
            mover = "tau"
        if not (T1.infinite_stream(sig[-1]) if mover == "sigma" else T2.infinite_stream(tau[-1])):
            raise EscapeError(f"step {step}: steering node is not omega-splitting")
        sig.append(new_s)
        tau.append(new_t)
        log.append({"step": step, "steered": mover, "position": pos,
                    "forbidden": sorted(F, key=zigzag_rank), "chosen": v})
    S_pref, T_pref = sig[-1], tau[-1]
    total = word_add(S_pref, T_pref)
    ledger = {
        "i": all(len(q) > len(p) and is_prefix(p, q) for p, q in zip(sig, sig[1:]))
        and all(len(q) > len(p) and is_prefix(p, q) for p, q in zip(tau, tau[1:])),
        "ii": all(len(p) == len(q) for p, q in zip(sig, tau)),
        "iii": all(total[:k] not in s.level(k) for k in range(len(sig[0]) + 1, len(total) + 1)),
        # levels inside the initial stem are fixed by the trees, not steered
        "iii_full": all(total[:k] not in s.level(k) for k in range(1, len(total) + 1)),
        "in_trees": T1.contains(S_pref) and T2.contains(T_pref),
    }
    if swapped:
        S_pref, T_pref = T_pref, S_pref
    notes = ["sigma_0 is the first omega-splitting node of the tree with the shorter one"]
    tr = EscapeTrace(T_pref, T_pref, S_pref, log, ledger, notes)
    tr.x_prefix = total
    return tr
