"""Lazy trees over Z^{<omega}, finite truncations, splitting levels and sumsets.

A :class:`TreeSpec` never materialises its (infinite) node set.  It answers
membership queries and enumerates the successors of a node in zigzag order;
an omega-splitting node yields a stream that is cut at the caller's budget.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count, islice, product
from typing import Callable, Iterable, Mapping, Sequence

from .sequences import ZERO, FreeSet, Periodic, seq_from_json
from .words import (
    EMPTY,
    Word,
    comparable,
    is_prefix,
    word_add,
    zigzag,
    zigzag_int,
    zigzag_rank,
    zigzag_sorted,
)

KINDS = (
    "full",
    "perfect-from-map",
    "uniformly-perfect",
    "miller",
    "laver",
    "omega-silver",
    "alpha-image",
    "avoid",
    "subtree-of",
)


class TreeError(ValueError):
    pass


class StemExceedsDepth(TreeError):
    pass


class PartialLevelError(TreeError):
    def __init__(self, message: str, branch: Word):
        super().__init__(message)
        self.branch = branch


def _stream(allowed: Callable[[int], bool], budget: int, origin: int = 0) -> tuple[int, ...]:
    out = []
    r = 0
    while len(out) < budget:
        i = origin + zigzag_int(r)
        if allowed(i):
            out.append(i)
        r += 1
    return tuple(out)


@dataclass(frozen=True, eq=False)
class TreeSpec:
    """An intensional tree.

    ``succ(node)`` returns either a finite collection of successor values or
    ``None``; ``None`` means the node is omega-splitting and its successors are
    the integers accepted by ``allowed(node, i)``, an infinite set.
    """

    kind: str
    succ: Callable[[Word], Iterable[int] | None]
    allowed: Callable[[Word, int], bool] = lambda node, i: True
    stem_hint: Word = EMPTY
    uniform: bool = False
    origin: Callable[[Word], int] = lambda node: 0
    meta: Mapping = field(default_factory=dict)

    def infinite_stream(self, node: Word) -> bool:
        return self.succ(tuple(node)) is None

    def successors(self, node: Sequence[int], budget: int) -> tuple[int, ...]:
        node = tuple(node)
        fin = self.succ(node)
        if fin is None:
            return _stream(lambda i: self.allowed(node, i), budget, self.origin(node))
        o = self.origin(node)
        return tuple(sorted(set(fin), key=lambda i: zigzag_rank(i - o)))

    def has_child(self, node: Word, i: int) -> bool:
        fin = self.succ(node)
        if fin is None:
            return self.allowed(node, i)
        return i in set(fin)

    def contains(self, w: Sequence[int]) -> bool:
        w = tuple(w)
        return all(self.has_child(w[:n], w[n]) for n in range(len(w)))

    __contains__ = contains

    def is_split(self, node: Word) -> bool:
        return len(self.successors(node, 2)) >= 2

    def leftmost(self, node: Word, length: int) -> Word:
        """Extend ``node`` to ``length`` along zigzag-least successors."""
        node = tuple(node)
        while len(node) < length:
            nxt = self.successors(node, 1)
            if not nxt:
                raise TreeError(f"dead end at {node}")
            node = node + (nxt[0],)
        return node

    def split_above(self, node: Word, depth: int) -> Word:
        """The shortest splitting extension of ``node`` (zigzag-least path)."""
        node = tuple(node)
        while not self.is_split(node):
            if len(node) >= depth:
                raise StemExceedsDepth(f"no splitting node above {node} within depth {depth}")
            node = self.leftmost(node, len(node) + 1)
        return node


# --- constructors

def make_full() -> TreeSpec:
    return TreeSpec("full", lambda node: None, uniform=True)


@dataclass(frozen=True)
class SilverSpec:
    free_set: FreeSet
    center: Callable[[int], int] = ZERO

    def to_json(self) -> dict:
        return {"free_set": self.free_set.to_json(), "center": self.center.to_json()}

    @classmethod
    def from_json(cls, d: Mapping) -> "SilverSpec":
        return cls(FreeSet.from_json(d["free_set"]), seq_from_json(d["center"]))


def make_silver(s: SilverSpec) -> TreeSpec:
    def succ(node):
        n = len(node)
        return None if n in s.free_set else (s.center(n),)

    # free coordinates stream outward from the center value
    return TreeSpec("omega-silver", succ, uniform=True,
                    origin=lambda node: s.center(len(node)), meta={"silver": s})


def make_laver(stem: Sequence[int], allowed: Callable[[Word, int], bool] | None = None) -> TreeSpec:
    """Laver tree with the given stem; above it every node omega-splits.

    ``allowed(node, i)`` must accept infinitely many ``i`` for each node.
    """
    stem = tuple(stem)

    def succ(node):
        if len(node) < len(stem):
            return (stem[len(node)],) if is_prefix(node, stem) else ()
        return None if is_prefix(stem, node) else ()

    return TreeSpec("laver", succ, allowed or (lambda node, i: True), stem_hint=stem)


def make_miller(omega_at: Callable[[Word], bool], fixed: Callable[[Word], int] = lambda node: 0) -> TreeSpec:
    """Miller tree: ``omega_at`` nodes split fully, others continue with ``fixed(node)``.

    The caller is responsible for ``omega_at`` holding cofinally on every branch.
    """

    def succ(node):
        return None if omega_at(node) else (fixed(node),)

    return TreeSpec("miller", succ)


def make_uniformly_perfect(split_levels: Callable[[int], bool], width: int = 2) -> TreeSpec:
    """At split lengths the successors are the first ``width`` zigzag integers, else 0."""
    if width < 2:
        raise TreeError("width must be at least 2")
    vals = tuple(zigzag_sorted(range(-width, width + 1))[:width])

    def succ(node):
        return vals if split_levels(len(node)) else (0,)

    return TreeSpec("uniformly-perfect", succ, uniform=True, meta={"width": width})


def make_perfect_from_map(m: Callable[[Word], Word], check_depth: int = 4) -> TreeSpec:
    """Downward closure of ``{m(rho) : rho binary}``.

    ``m`` must be monotone with ``m(rho+(0,))`` incompatible with ``m(rho+(1,))``;
    this is checked for binary words up to ``check_depth``.
    """
    for n in range(check_depth):
        for rho in product((0, 1), repeat=n):
            a, b, c = tuple(m(rho)), tuple(m(rho + (0,))), tuple(m(rho + (1,)))
            if not (is_prefix(a, b) and is_prefix(a, c)):
                raise TreeError(f"map not monotone at {rho}")
            if comparable(b, c):
                raise TreeError(f"children of {rho} are compatible")

    def succ(node):
        out: set[int] = set()
        stack = [()]
        while stack:
            rho = stack.pop()
            mr = tuple(m(rho))
            if len(node) < len(mr):
                if is_prefix(node, mr):
                    out.add(mr[len(node)])
            elif is_prefix(mr, node):
                stack += [rho + (0,), rho + (1,)]
        return out

    return TreeSpec("perfect-from-map", succ)


def subtree_of(parent: TreeSpec, core: Iterable[Word], leaves: Iterable[Word] = (),
               kind: str | None = None) -> TreeSpec:
    """Prefix closure of ``core``, continued by ``parent`` above each of ``leaves``.

    Leaves are nodes of ``core``; above a leaf the subtree agrees with the parent.
    """
    nodes = set()
    for w in core:
        w = tuple(w)
        nodes.update(w[:i] for i in range(len(w) + 1))
    leaf_set = frozenset(tuple(w) for w in leaves)
    leaf_lengths = sorted({len(w) for w in leaf_set})
    frozen_nodes = frozenset(nodes)

    def above_leaf(node):
        return any(node[:L] in leaf_set for L in leaf_lengths if L <= len(node))

    def succ(node):
        if node in frozen_nodes and node not in leaf_set:
            return {w[len(node)] for w in _children_cache(node)}
        if above_leaf(node) and parent.contains(node):
            return parent.succ(node)
        return ()

    children: dict[Word, list[Word]] = {}
    for w in frozen_nodes:
        if w:
            children.setdefault(w[:-1], []).append(w)

    def _children_cache(node):
        return children.get(node, ())

    return TreeSpec(kind or "subtree-of", succ, parent.allowed, uniform=parent.uniform,
                    origin=parent.origin, meta={"parent": parent, "core": frozen_nodes, "leaves": leaf_set})


# --- truncations

@dataclass(frozen=True)
class Truncation:
    depth: int
    budget: int
    nodes: frozenset
    split: frozenset
    omega: frozenset

    def children(self, node: Word) -> list[Word]:
        return [w for w in self.nodes if len(w) == len(node) + 1 and w[:-1] == node]

    def to_json(self) -> dict:
        key = lambda w: (len(w), [zigzag_rank(e) for e in w])
        return {
            "depth": self.depth,
            "budget": self.budget,
            "nodes": [list(w) for w in sorted(self.nodes, key=key)],
            "split": [list(w) for w in sorted(self.split, key=key)],
            "omega": [list(w) for w in sorted(self.omega, key=key)],
        }

    @classmethod
    def from_json(cls, d: Mapping) -> "Truncation":
        conv = lambda ws: frozenset(tuple(w) for w in ws)
        return cls(d["depth"], d["budget"], conv(d["nodes"]), conv(d["split"]), conv(d["omega"]))


def truncate(T: TreeSpec, depth: int, budget: int) -> Truncation:
    if depth < 0 or budget < 1:
        raise TreeError("need depth >= 0 and budget >= 1")
    nodes, split, omega = {EMPTY}, set(), set()
    frontier = [EMPTY]
    for _ in range(depth):
        nxt = []
        for node in frontier:
            fin = T.succ(node)
            if fin is None:
                omega.add(node)
                split.add(node)
                kids = _stream(lambda i: T.allowed(node, i), budget, T.origin(node))
            else:
                kids = T.successors(node, budget)
                if len(kids) >= 2:
                    split.add(node)
            nxt.extend([node + (i,) for i in kids])
        nodes.update(nxt)
        frontier = nxt
    return Truncation(depth, budget, frozenset(nodes), frozenset(split), frozenset(omega))


def body_at_depth(tr: Truncation) -> set[Word]:
    return {w for w in tr.nodes if len(w) == tr.depth}


def stem(T: TreeSpec, depth: int) -> Word:
    return T.split_above(EMPTY, depth)


def _next_split(children_of, is_split, node: Word, depth: int) -> Word:
    while not is_split(node):
        kids = children_of(node)
        if len(node) >= depth or not kids:
            raise PartialLevelError(f"no splitting node above {node} within depth {depth}", node)
        node = kids[0]
    return node


def _levels(children_of, is_split, n: int, depth: int) -> set[Word]:
    level = {_next_split(children_of, is_split, EMPTY, depth)}
    for _ in range(n):
        level = {_next_split(children_of, is_split, c, depth)
                 for s in level for c in children_of(s)}
    return level


def level(T: TreeSpec, n: int, depth: int, budget: int = 2) -> set[Word]:
    """The n-th front of consecutive splitting nodes, searched within ``depth``."""
    return _levels(lambda w: [w + (i,) for i in T.successors(w, budget)],
                   T.is_split, n, depth)


def truncation_level(tr: Truncation, n: int) -> set[Word]:
    kids: dict[Word, list[Word]] = {}
    for w in tr.nodes:
        if w:
            kids.setdefault(w[:-1], []).append(w)
    for v in kids.values():
        v.sort(key=lambda w: zigzag_rank(w[-1]))  # leftmost continuation is zigzag-least
    return _levels(lambda w: kids.get(w, []), lambda w: len(kids.get(w, ())) >= 2, n, tr.depth)


def leq_n(P: Truncation, Q: Truncation, n: int) -> bool:
    if (P.depth, P.budget) != (Q.depth, Q.budget):
        raise TreeError("truncation windows differ")
    return P.nodes <= Q.nodes and truncation_level(P, n) == truncation_level(Q, n)


# --- sums

class _TrieSum:
    """Sumset of equal-length word sets over hash-consed tries.

    Bodies of structured trees repeat the same subtree under many nodes, so
    memoising on subtrie pairs avoids the quadratic pair loop.
    """

    def __init__(self):
        self.intern: dict = {}
        self.sums: dict = {}
        self.unions: dict = {}

    def make(self, edges) -> frozenset:
        t = frozenset(edges)
        return self.intern.setdefault(t, t)

    def build(self, words: list[Word], pos: int = 0) -> frozenset:
        groups: dict[int, list[Word]] = {}
        for w in words:
            if pos < len(w):
                groups.setdefault(w[pos], []).append(w)
        return self.make((v, self.build(ws, pos + 1)) for v, ws in groups.items())

    def union(self, a: frozenset, b: frozenset) -> frozenset:
        if a is b:
            return a
        key = (id(a), id(b))
        if key not in self.unions:
            kids: dict[int, frozenset] = {}
            for v, c in list(a) + list(b):
                kids[v] = self.union(kids[v], c) if v in kids else c
            self.unions[key] = self.make(kids.items())
        return self.unions[key]

    def add(self, a: frozenset, b: frozenset) -> frozenset:
        key = (id(a), id(b))
        if key not in self.sums:
            kids: dict[int, frozenset] = {}
            for va, ca in a:
                for vb, cb in b:
                    c = self.add(ca, cb)
                    v = va + vb
                    kids[v] = self.union(kids[v], c) if v in kids else c
            self.sums[key] = self.make(kids.items())
        return self.sums[key]

    @staticmethod
    def words(t: frozenset, length: int) -> set[Word]:
        out: set[Word] = set()
        stack = [((), t)]
        while stack:
            pre, node = stack.pop()
            if len(pre) == length:
                out.add(pre)
                continue
            for v, c in node:
                stack.append((pre + (v,), c))
        return out


def sumset(A: Iterable[Word], B: Iterable[Word]) -> set[Word]:
    A, B = [tuple(w) for w in A], [tuple(w) for w in B]
    lengths = {len(w) for w in A} | {len(w) for w in B}
    if len(lengths) > 1:
        raise TreeError(f"mixed word lengths {sorted(lengths)}")
    if not A or not B:
        return set()
    ts = _TrieSum()
    return ts.words(ts.add(ts.build(A), ts.build(B)), lengths.pop())


def nfold_sumset(A: Iterable[Word], n: int, length: int) -> set[Word]:
    """A + ... + A (n times); the zero-fold sum is the zero word."""
    A = set(A)
    out = {(0,) * length}
    for _ in range(n):
        out = sumset(out, A)
    return out


# --- kind predicates on truncations

def is_miller_window(tr: Truncation) -> bool:
    """No node is refuted: each has an omega-marked extension in the window, or
    the window shows no splitting above it (so the question is undecided)."""
    for w in tr.nodes:
        above = [m for m in tr.split if is_prefix(w, m)]
        if above and not any(m in tr.omega for m in above):
            return False
    return True


def is_laver_window(tr: Truncation, stem_word: Word) -> bool:
    return all(w in tr.omega for w in tr.nodes
               if len(w) < tr.depth and is_prefix(stem_word, w))


def is_uniform_window(tr: Truncation) -> bool:
    for n in range(tr.depth):
        at = [w for w in tr.nodes if len(w) == n]
        marks = {w in tr.split for w in at}
        if len(marks) > 1:
            return False
    return True


def is_perfect_window(tr: Truncation, slack: int = 0) -> bool:
    """Every node shorter than ``d - slack`` has a split mark at or above it."""
    return all(any(is_prefix(w, s) for s in tr.split)
               for w in tr.nodes if len(w) < tr.depth - slack)
