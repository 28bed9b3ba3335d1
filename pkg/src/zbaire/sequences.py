"""Finitely described infinite sequences: centers, free sets, interval cuts.

Each type serialises to a small JSON descriptor so certificates replay.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count
from typing import Mapping

from .words import Word


class SequenceError(ValueError):
    pass


@dataclass(frozen=True)
class Periodic:
    """An eventually periodic integer sequence n -> value."""

    head: tuple[int, ...] = ()
    cycle: tuple[int, ...] = (0,)

    def __call__(self, n: int) -> int:
        if n < len(self.head):
            return self.head[n]
        return self.cycle[(n - len(self.head)) % len(self.cycle)]

    def prefix(self, d: int) -> Word:
        return tuple(self(n) for n in range(d))

    def to_json(self) -> dict:
        return {"type": "periodic", "head": list(self.head), "cycle": list(self.cycle)}


@dataclass(frozen=True)
class Patched:
    """``base`` with finitely many positions overwritten."""

    base: "Periodic | Patched"
    values: Mapping[int, int] = field(default_factory=dict)

    def __call__(self, n: int) -> int:
        return self.values[n] if n in self.values else self.base(n)

    def prefix(self, d: int) -> Word:
        return tuple(self(n) for n in range(d))

    def to_json(self) -> dict:
        return {"type": "patched", "base": self.base.to_json(),
                "values": [[k, v] for k, v in sorted(self.values.items())]}


ZERO = Periodic()


def seq_from_json(d: Mapping):
    kind = d.get("type", "periodic")
    if kind == "periodic":
        return Periodic(tuple(d.get("head", ())), tuple(d.get("cycle", (0,))))
    if kind == "patched":
        return Patched(seq_from_json(d["base"]), {int(k): int(v) for k, v in d["values"]})
    raise SequenceError(f"unknown sequence type {kind!r}")


@dataclass(frozen=True)
class FreeSet:
    """An infinite subset of N: explicit ``head`` below ``start``, periodic after.

    From ``start`` on, n is a member iff ``(n - start) % period`` is in ``offsets``.
    """

    head: tuple[int, ...] = ()
    start: int = 0
    period: int = 1
    offsets: tuple[int, ...] = (0,)

    def __post_init__(self):
        if not self.offsets or self.period < 1:
            raise SequenceError("free set must be infinite")
        if any(not 0 <= o < self.period for o in self.offsets):
            raise SequenceError("offsets must lie in [0, period)")
        if any(not 0 <= h < self.start for h in self.head):
            raise SequenceError("head elements must lie below start")

    @classmethod
    def progression(cls, first: int, step: int) -> "FreeSet":
        return cls(start=first, period=step, offsets=(0,))

    def __contains__(self, n: int) -> bool:
        if n < self.start:
            return n in self.head
        return (n - self.start) % self.period in self.offsets

    def elements(self):
        """Strictly increasing enumeration; never exhausts."""
        for n in count():
            if n in self:
                yield n

    def upto(self, d: int) -> list[int]:
        return [n for n in range(d) if n in self]

    def to_json(self) -> dict:
        return {"head": list(self.head), "start": self.start, "period": self.period,
                "offsets": list(self.offsets)}

    @classmethod
    def from_json(cls, d: Mapping) -> "FreeSet":
        if "first" in d:
            return cls.progression(d["first"], d["step"])
        return cls(tuple(d.get("head", ())), d.get("start", 0), d["period"], tuple(d["offsets"]))


@dataclass(frozen=True)
class Cuts:
    """Strictly increasing cut points with cuts(0) = 0.

    ``head`` lists the first cut points; after them the gaps follow ``step``
    (arithmetic) or the points double (``doubling=True``).
    """

    head: tuple[int, ...] = (0,)
    step: int = 1
    doubling: bool = False

    def __post_init__(self):
        if not self.head or self.head[0] != 0:
            raise SequenceError("cuts must start at 0")
        if any(a >= b for a, b in zip(self.head, self.head[1:])):
            raise SequenceError("cuts must be strictly increasing")
        if self.step < 1:
            raise SequenceError("step must be positive")

    @classmethod
    def uniform(cls, width: int) -> "Cuts":
        return cls((0,), width)

    @classmethod
    def powers_of_two(cls) -> "Cuts":
        # [0,1), [1,2), [2,4), [4,8), ...
        return cls((0, 1), doubling=True)

    def __call__(self, n: int) -> int:
        if n < len(self.head):
            return self.head[n]
        last = self.head[-1]
        extra = n - len(self.head) + 1
        if self.doubling:
            return last * 2 ** extra
        return last + self.step * extra

    def interval(self, n: int) -> range:
        return range(self(n), self(n + 1))

    def index_of(self, pos: int) -> int:
        """The n with pos in interval n."""
        n = 0
        while self(n + 1) <= pos:
            n += 1
        return n

    def intervals_within(self, d: int) -> list[range]:
        out = []
        n = 0
        while self(n + 1) <= d:
            out.append(self.interval(n))
            n += 1
        return out

    def to_json(self) -> dict:
        return {"head": list(self.head), "step": self.step, "doubling": self.doubling}

    @classmethod
    def from_json(cls, d: Mapping) -> "Cuts":
        return cls(tuple(d["head"]), d.get("step", 1), d.get("doubling", False))
