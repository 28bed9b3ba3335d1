"""Certificates for nwd-, M-, M and fake-null membership, with window evaluators.

Every quantifier over an infinite index set is evaluated on a finite window
and the verdict records that window.  Masses are exact ``Fraction`` values.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .sequences import Cuts, Periodic, seq_from_json
from .words import EMPTY, Word, enum_index, enum_word, is_prefix, word_add, zeros


class CertError(ValueError):
    pass


@dataclass(frozen=True)
class Verdict:
    status: str
    index: int | None = None
    hits: tuple[int, ...] = ()
    window: Mapping = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.status in ("avoids", "in-cert-set", "clean")


def frac_json(q: Fraction) -> dict:
    return {"num": q.numerator, "den": q.denominator}


def frac_from_json(d: Mapping) -> Fraction:
    return Fraction(d["num"], d["den"])


# --- meager witnesses

def _rule(desc: Mapping) -> Callable[[Word], Word]:
    kind = desc["rule"]
    if kind == "const":
        pattern = tuple(desc["pattern"])
        return lambda s: pattern
    if kind == "zeros":
        k = desc["k"]
        return lambda s: zeros(k)
    if kind == "repeat-last":
        # sigma's last entry repeated k times (0 for the empty word)
        k = desc["k"]
        return lambda s: ((s[-1] if s else 0),) * k
    if kind == "interval-center":
        center = seq_from_json(desc["center"])
        cuts = Cuts.from_json(desc["cuts"])

        def f(s):
            n = cuts.index_of(len(s))
            if cuts(n) < len(s):
                n += 1
            return tuple(center(i) for i in range(len(s), cuts(n + 1)))

        return f
    raise CertError(f"unknown witness rule {kind!r}")


@dataclass(frozen=True, eq=False)
class MeagerWitness:
    """f : Z^{<w} -> Z^{<w} given by a rule, overridden on finitely many indices.

    The covered set is {x : for all but finitely many sigma, sigma^f(sigma) is
    not an initial segment of x}.
    """

    rule: Mapping = field(default_factory=lambda: {"rule": "const", "pattern": [0]})
    table: Mapping[int, Word] = field(default_factory=dict)
    fallback: Callable[[Word], Word] | None = None
    horizon: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "_f", _rule(self.rule) if self.fallback is None else None)

    def __call__(self, s: Sequence[int]) -> Word:
        s = tuple(s)
        if self.table:
            i = enum_index(s)
            if i in self.table:
                return tuple(self.table[i])
        if self.fallback is not None:
            return self.fallback(s)
        return self._f(s)

    def pattern(self, n: int) -> Word:
        s = enum_word(n)
        return s + self(s)

    def with_table(self, table: Mapping[int, Word]) -> "MeagerWitness":
        return MeagerWitness(self.rule, {**self.table, **table}, self.fallback, self.horizon)

    def to_json(self) -> dict:
        d = {"kind": "meager-witness", "rule": dict(self.rule),
             "table": [[i, list(w)] for i, w in sorted(self.table.items())]}
        if hasattr(self.fallback, "to_json"):
            d["fallback"] = self.fallback.to_json()
        if self.horizon is not None:
            d["horizon"] = self.horizon
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "MeagerWitness":
        fb = cls.from_json(d["fallback"]) if "fallback" in d else None
        return cls(d["rule"], {int(i): tuple(w) for i, w in d.get("table", [])}, fb, d.get("horizon"))


def const_witness(pattern: Sequence[int]) -> MeagerWitness:
    return MeagerWitness({"rule": "const", "pattern": list(pattern)})


def meager_member(w: Callable[[Word], Word], x: Sequence[int], N: int) -> Verdict:
    """Least n >= N with sigma_n^f(sigma_n) ⊆ x, scanning the prefixes of x.

    Only prefixes of x can produce a hit, so the scan is complete for every
    n whose pattern fits inside x.
    """
    x = tuple(x)
    hits = []
    checked = 0
    for L in range(len(x) + 1):
        s = x[:L]
        n = enum_index(s)
        if n < N:
            continue
        p = s + tuple(w(s))
        if len(p) > len(x):
            continue
        checked += 1
        if x[: len(p)] == p:
            hits.append(n)
    window = {"N": N, "length": len(x), "checked": checked}
    if hits:
        return Verdict("hits", min(hits), tuple(sorted(hits)), window)
    if not checked:
        raise CertError("insufficient prefix: no pattern fits inside x")
    return Verdict("avoids", window=window)


def meager_from_nwd_sequence(fs: Sequence[Callable[[Word], Word]], horizon: int):
    """Diagonal witness f(sigma_n) = f_n(sigma_n) for n < horizon.

    Indices beyond the last given f_n reuse the last one.  If the sequence is
    not pointwise increasing in the prefix order, f_n is replaced by the running
    concatenation f_0(s) ^ ... so that f_n(s) ⊆ f_{n+1}(s); the returned flag
    says whether that happened.
    """
    if not fs:
        raise CertError("need at least one nowhere dense witness")
    monotonized = False
    table: dict[int, Word] = {}
    for n in range(horizon):
        s = enum_word(n)
        vals = [tuple(f(s)) for f in fs[: n + 1]]
        ok = all(is_prefix(a, b) for a, b in zip(vals, vals[1:]))
        if ok:
            table[n] = vals[-1]
        else:
            monotonized = True
            run: Word = ()
            for v in vals:
                run = v if is_prefix(run, v) else run + v
            table[n] = run
    return MeagerWitness({"rule": "fallback"}, table, fs[-1], horizon), monotonized


# --- interval certificates

@dataclass(frozen=True, eq=False)
class IntervalCert:
    center: Callable[[int], int]
    cuts: Cuts
    mode: str = "cofinite"
    threshold: int = 0

    def __post_init__(self):
        if self.mode not in ("forall", "cofinite"):
            raise CertError(f"mode must be forall or cofinite, not {self.mode!r}")

    def to_json(self) -> dict:
        return {"kind": "interval", "center": self.center.to_json(), "cuts": self.cuts.to_json(),
                "mode": self.mode, "threshold": self.threshold}

    @classmethod
    def from_json(cls, d: Mapping) -> "IntervalCert":
        return cls(seq_from_json(d["center"]), Cuts.from_json(d["cuts"]), d["mode"], d["threshold"])


def interval_member(c: IntervalCert, x: Sequence[int], upto: int) -> Verdict:
    need = c.cuts(upto + 1)
    if len(x) < need:
        raise CertError(f"x has length {len(x)}, intervals up to {upto} need {need}")
    lo = c.threshold if c.mode == "cofinite" else 0
    window = {"mode": c.mode, "from": lo, "upto": upto}
    for n in range(lo, upto + 1):
        I = c.cuts.interval(n)
        if all(x[i] == c.center(i) for i in I):
            return Verdict("escapes", n, window=window)
    return Verdict("in-cert-set", window=window)


def complete_intervals(c: IntervalCert, length: int) -> int:
    """Largest n with interval n inside [0, length), or -1."""
    n = -1
    while c.cuts(n + 2) <= length:
        n += 1
    return n


def translate_cert(c: IntervalCert, v: Callable[[int], int], d: int) -> IntervalCert:
    from .sequences import Patched

    return IntervalCert(Patched(c.center, {i: c.center(i) + v(i) for i in range(d)}),
                        c.cuts, c.mode, c.threshold)


def witness_from_interval(c: IntervalCert) -> MeagerWitness:
    """f(sigma) fills up to the end of the first interval starting at or after |sigma| with the center."""
    return MeagerWitness({"rule": "interval-center", "center": c.center.to_json(),
                          "cuts": c.cuts.to_json()})


# --- fake null: slaloms and covers

@dataclass(frozen=True)
class Slalom:
    """Levels S_n ⊆ Z^n given up to ``horizon``; empty beyond it.

    ``mass_bound`` bounds the total weighted size; ``tail`` is a declared rule
    for the tail sums (e.g. geometric), recorded not inferred.
    """

    levels: Mapping[int, frozenset]
    horizon: int
    mass_bound: Fraction
    tail: Mapping = field(default_factory=lambda: {"rule": "finite"})

    def __post_init__(self):
        for n, S in self.levels.items():
            if any(len(w) != n for w in S):
                raise CertError(f"level {n} holds a word of the wrong length")

    def level(self, n: int) -> frozenset:
        return self.levels.get(n, frozenset())

    def to_json(self) -> dict:
        return {"kind": "slalom", "horizon": self.horizon,
                "levels": {str(n): sorted(list(w) for w in S) for n, S in sorted(self.levels.items()) if S},
                "mass_bound": frac_json(self.mass_bound), "tail": dict(self.tail)}

    @classmethod
    def from_json(cls, d: Mapping) -> "Slalom":
        levels = {int(n): frozenset(tuple(w) for w in ws) for n, ws in d["levels"].items()}
        return cls(levels, d["horizon"], frac_from_json(d["mass_bound"]), d.get("tail", {"rule": "finite"}))


def make_slalom(levels: Mapping[int, Iterable[Word]], horizon: int | None = None,
                mass_bound: Fraction | None = None, tail: Mapping | None = None) -> Slalom:
    lv = {n: frozenset(tuple(w) for w in ws) for n, ws in levels.items()}
    h = horizon if horizon is not None else max(lv, default=0)
    mass = sum((Fraction(len(S), 2 ** n) for n, S in lv.items() if n <= h), Fraction(0))
    return Slalom(lv, h, mass if mass_bound is None else mass_bound, tail or {"rule": "finite"})


def slalom_mass(s: Slalom, d: int) -> Fraction:
    return sum((Fraction(len(s.level(n)), 2 ** n) for n in range(d + 1)), Fraction(0))


def slalom_member(s: Slalom, x: Sequence[int], N: int) -> Verdict:
    x = tuple(x)
    hits = tuple(n for n in range(N, len(x) + 1) if x[:n] in s.level(n))
    window = {"N": N, "length": len(x)}
    return Verdict("hits" if hits else "clean", hits[0] if hits else None, hits, window)


@dataclass(frozen=True)
class CoverFamily:
    generators: tuple[Word, ...]
    index: int = 0

    @property
    def mass(self) -> Fraction:
        return sum((Fraction(1, 2 ** len(g)) for g in self.generators), Fraction(0))

    def covers(self, x: Sequence[int]) -> bool:
        return any(is_prefix(g, x) for g in self.generators)

    def to_json(self) -> dict:
        return {"kind": "cover", "index": self.index, "generators": [list(g) for g in self.generators],
                "mass": frac_json(self.mass)}

    @classmethod
    def from_json(cls, d: Mapping) -> "CoverFamily":
        return cls(tuple(tuple(g) for g in d["generators"]), d.get("index", 0))


def level_bound(n: int) -> int:
    """sum_{k<=n} 2^(n-k)."""
    return sum(2 ** (n - k) for k in range(n + 1))


def cover_to_slalom(families: Sequence[CoverFamily], d: int) -> tuple[Slalom, dict]:
    """S_n = generators of length n across all families, n <= d.

    Family i must have mass < 1/2^i.  Returns the slalom and a ledger of the
    per-level bound checks.
    """
    for i, fam in enumerate(families):
        if fam.mass >= Fraction(1, 2 ** i):
            raise CertError(f"family {i} has mass {fam.mass} >= 1/2^{i}")
    levels: dict[int, set] = {}
    for fam in families:
        for g in fam.generators:
            if len(g) <= d:
                levels.setdefault(len(g), set()).add(g)
    ledger = {}
    for n in range(d + 1):
        size = len(levels.get(n, ()))
        ledger[n] = {"size": size, "bound": level_bound(n), "ok": size < level_bound(n)}
    if not all(v["ok"] for v in ledger.values()):
        raise CertError(f"level bound violated: {ledger}")
    # sum_n (2^(n+1) - 1)/2^n diverges; the bound that matters is the family masses
    bound = sum((fam.mass for fam in families), Fraction(0))
    s = make_slalom(levels, d, None, {"rule": "families", "count": len(families)})
    return Slalom(s.levels, d, max(bound, slalom_mass(s, d)), s.tail), ledger


def slalom_to_cover(s: Slalom, n: int, d: int) -> CoverFamily:
    gens = tuple(w for k in range(n + 1, d + 1) for w in sorted(s.level(k)))
    return CoverFamily(gens, n)


def tail_mass(s: Slalom, n: int, d: int) -> Fraction:
    return sum((Fraction(len(s.level(k)), 2 ** k) for k in range(n + 1, d + 1)), Fraction(0))


def cert_from_json(d: Mapping):
    kind = d["kind"]
    if kind == "meager-witness":
        return MeagerWitness.from_json(d)
    if kind == "interval":
        return IntervalCert.from_json(d)
    if kind == "slalom":
        return Slalom.from_json(d)
    if kind == "cover":
        return CoverFamily.from_json(d)
    raise CertError(f"unknown certificate kind {kind!r}")
