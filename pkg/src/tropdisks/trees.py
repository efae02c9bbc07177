"""Canonical weighted pointed trees and their statistics.

A tree is built from ray leaves ``L:a``, marked-point leaves ``M:i`` and
binary joins.  Children of a join are stored in a fixed total order, so two
isomorphic trees have the same encoding string, e.g. ``J(L:a, J(L:b, M:1))``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Union

from .geom2d import IntVec, det2, primitive
from .ringalg import RAY_LABELS, Fan, PWeight, add_weights


class TreeError(ValueError):
    pass


class ForbiddenJoin(TreeError):
    """Two ray leaves, or two marked points, meeting at one vertex."""


class MarkCollision(TreeError):
    """The same marked point used twice (``u_i^2 = 0``)."""


class _Node:
    __slots__ = ()
    rank = 0

    def order_key(self):
        return (self.rank, self.code)

    def __eq__(self, other):
        return isinstance(other, _Node) and self.code == other.code

    def __hash__(self):
        return hash(self.code)

    def __lt__(self, other):
        return self.order_key() < other.order_key()

    def __str__(self):
        return self.code

    def __repr__(self):
        return f"Tree({self.code})"


class Leaf(_Node):
    __slots__ = ("ray", "code")
    rank = 0
    marks: FrozenSet[int] = frozenset()

    def __init__(self, ray: int):
        self.ray = ray
        self.code = f"L:{RAY_LABELS[ray]}"


class Mark(_Node):
    __slots__ = ("index", "code", "marks")
    rank = 1

    def __init__(self, index: int):
        if index < 1:
            raise TreeError("marked points are numbered from 1")
        self.index = index
        self.code = f"M:{index}"
        self.marks = frozenset((index,))


class Join(_Node):
    __slots__ = ("left", "right", "code", "marks")
    rank = 2

    def __init__(self, a: "TreeType", b: "TreeType"):
        if b.order_key() < a.order_key():
            a, b = b, a
        self.left, self.right = a, b
        self.code = f"J({a.code}, {b.code})"
        self.marks = a.marks | b.marks


TreeType = Union[Leaf, Join]
Node = Union[Leaf, Mark, Join]


def make_join(c1: Node, c2: Node) -> Join:
    if isinstance(c1, Leaf) and isinstance(c2, Leaf):
        raise ForbiddenJoin("two unmarked incoming leaves cannot meet at a vertex")
    if isinstance(c1, Mark) and isinstance(c2, Mark):
        raise ForbiddenJoin("two marked points cannot meet at a vertex")
    if c1.marks & c2.marks:
        raise MarkCollision(f"marked points {sorted(c1.marks & c2.marks)} used twice")
    return Join(c1, c2)


@dataclass(frozen=True)
class TreeStats:
    k: int
    d: int
    marks: FrozenSet[int]
    m: PWeight
    mbar: IntVec
    k_div: int
    mult: int

    @property
    def maslov(self) -> int:
        return 2 * (self.k - self.d)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "d": self.d,
            "marks": sorted(self.marks),
            "m": list(self.m),
            "mbar": list(self.mbar),
            "k_div": self.k_div,
            "mult": self.mult,
            "maslov": self.maslov,
        }


def _divisibility(mbar: IntVec) -> int:
    return 0 if mbar == (0, 0) else primitive(mbar)[1]


def leaf_stats(fan: Fan, leaf: Leaf) -> TreeStats:
    m = fan.basis(leaf.ray)
    mbar = fan.rays[leaf.ray]
    return TreeStats(1, 0, frozenset(), m, mbar, 1, 1)


def mark_stats(fan: Fan, mark: Mark) -> TreeStats:
    return TreeStats(0, 1, mark.marks, fan.zero(), (0, 0), 0, 1)


def vertex_multiplicity(s1: TreeStats, s2: TreeStats, touches_mark: bool) -> int:
    return 1 if touches_mark else abs(det2(s1.mbar, s2.mbar))


def join_stats(s1: TreeStats, s2: TreeStats, touches_mark: bool) -> TreeStats:
    """Statistics of a join from the statistics of its two children."""
    m = add_weights(s1.m, s2.m)
    mbar = (s1.mbar[0] + s2.mbar[0], s1.mbar[1] + s2.mbar[1])
    return TreeStats(
        k=s1.k + s2.k,
        d=s1.d + s2.d,
        marks=s1.marks | s2.marks,
        m=m,
        mbar=mbar,
        k_div=_divisibility(mbar),
        mult=s1.mult * s2.mult * vertex_multiplicity(s1, s2, touches_mark),
    )


def stats(fan: Fan, t: Node) -> TreeStats:
    if isinstance(t, Leaf):
        return leaf_stats(fan, t)
    if isinstance(t, Mark):
        return mark_stats(fan, t)
    touches = isinstance(t.left, Mark) or isinstance(t.right, Mark)
    return join_stats(stats(fan, t.left), stats(fan, t.right), touches)


def parse_tree(text: str) -> Node:
    """Inverse of the canonical encoding."""
    pos = 0

    def skip():
        nonlocal pos
        while pos < len(text) and text[pos] == " ":
            pos += 1

    def node():
        nonlocal pos
        skip()
        if text.startswith("J(", pos):
            pos += 2
            a = node()
            skip()
            if text[pos] != ",":
                raise TreeError(f"expected ',' at {pos} in {text!r}")
            pos += 1
            b = node()
            skip()
            if text[pos] != ")":
                raise TreeError(f"expected ')' at {pos} in {text!r}")
            pos += 1
            return make_join(a, b)
        if text.startswith("L:", pos):
            pos += 2
            lab = text[pos]
            pos += 1
            return Leaf(RAY_LABELS.index(lab))
        if text.startswith("M:", pos):
            pos += 2
            start = pos
            while pos < len(text) and text[pos].isdigit():
                pos += 1
            return Mark(int(text[start:pos]))
        raise TreeError(f"cannot parse tree at {pos} in {text!r}")

    out = node()
    skip()
    if pos != len(text):
        raise TreeError(f"trailing characters in {text!r}")
    return out
