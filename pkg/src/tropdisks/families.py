"""Enumeration of Maslov index 0 and 2 tropical disk families.

Families are grown bottom-up by tree size.  A family stores its canonical
tree, the tree statistics and the locus swept out by the stop.  Three joins
produce everything that can carry a nonempty locus:

* an index-2 family whose locus strictly contains ``P_i``, joined with the
  marked point ``i``, gives a wall ``P_i - R>=0 * mbar``;
* two walls meeting transversally at ``x`` give a wall ``x - R>=0 * mbar``;
* a wall crossing an index-2 locus in a segment ``S`` gives the index-2
  region ``S - R>=0 * mbar``.

Joins of total index other than 0 or 2, and joins with vertex multiplicity 0,
are dropped.
"""
from __future__ import annotations

import json
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .geom2d import (
    FULLPLANE,
    Cell,
    GeometryError,
    Point,
    contains,
    format_point,
    format_scalar,
    intersect,
    point_cell,
    scalar,
    sweep,
)
from .ringalg import Fan, PotentialElement
from .trees import (
    Join,
    Leaf,
    Mark,
    TreeStats,
    join_stats,
    leaf_stats,
    mark_stats,
    parse_tree,
    stats,
    vertex_multiplicity,
)

log = logging.getLogger(__name__)


class NonGenericConfiguration(GeometryError):
    """The marked points are not in generic position."""


class NonGenericQuery(GeometryError):
    """The query point lies on a wall or on the boundary of a disk locus."""


class AmbiguousRealization(GeometryError):
    """A tree admits a positive-dimensional family of disks through the data."""


@dataclass(frozen=True)
class DiskFamily:
    tree: object
    stats: TreeStats
    locus: Cell

    @property
    def maslov(self) -> int:
        return self.stats.maslov

    @property
    def code(self) -> str:
        return self.tree.code

    def to_json(self) -> dict:
        return {"tree": self.tree.code, "stats": self.stats.to_json(), "locus": self.locus.to_json()}


@dataclass(frozen=True)
class FamilySet:
    fan: Fan
    points: Tuple[Point, ...]
    families: Tuple[DiskFamily, ...]

    @property
    def walls(self) -> Tuple[DiskFamily, ...]:
        return tuple(f for f in self.families if f.maslov == 0)

    @property
    def disks(self) -> Tuple[DiskFamily, ...]:
        return tuple(f for f in self.families if f.maslov == 2)

    def to_json(self) -> dict:
        return {
            "fan": self.fan.to_json(),
            "points": [[format_scalar(x), format_scalar(y)] for x, y in self.points],
            "families": [f.to_json() for f in self.families],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, doc: dict) -> "FamilySet":
        fan = Fan(tuple(tuple(r) for r in doc["fan"]))
        points = tuple((scalar(x), scalar(y)) for x, y in doc["points"])
        fams = []
        for row in doc["families"]:
            tree = parse_tree(row["tree"])
            fams.append(DiskFamily(tree, stats(fan, tree), Cell.from_json(row["locus"])))
        return cls(fan, points, tuple(fams))


# ---------------------------------------------------------------------------
# productions


def _interior_point(c: Cell) -> Point:
    """Some point of the relative interior of a 1-cell."""
    b, e = c.base, c.end
    if b is not None and e is not None:
        return ((b[0] + e[0]) / 2, (b[1] + e[1]) / 2)
    if b is not None:
        return (b[0] + c.t[0], b[1] + c.t[1])
    if e is not None:
        return (e[0] - c.t[0], e[1] - c.t[1])
    (a, rhs), = c.eq
    return (rhs / a[0], Fraction(0)) if a[0] else (Fraction(0), rhs / a[1])


def _join_mark(fan: Fan, f: DiskFamily, mark: DiskFamily, p: Point) -> Optional[DiskFamily]:
    if not contains(f.locus, p, strict=True):
        if contains(f.locus, p):
            raise NonGenericConfiguration(
                f"marked point {mark.tree.index} at {format_point(p)} lies on the boundary of the locus of {f.code}"
            )
        return None
    st = join_stats(f.stats, mark.stats, touches_mark=True)
    return DiskFamily(Join(f.tree, mark.tree), st, sweep(point_cell(p), st.mbar))


def _join_walls(w1: DiskFamily, w2: DiskFamily) -> Optional[DiskFamily]:
    if vertex_multiplicity(w1.stats, w2.stats, False) == 0:
        return None
    hit = intersect(w1.locus, w2.locus)
    if hit is None:
        return None
    cell, transversal = hit
    if not transversal or cell.dim != 0:
        raise NonGenericConfiguration(f"walls {w1.code} and {w2.code} overlap")
    x = cell.vertex
    if not (contains(w1.locus, x, strict=True) and contains(w2.locus, x, strict=True)):
        raise NonGenericConfiguration(
            f"walls {w1.code} and {w2.code} meet at an endpoint {format_point(x)}"
        )
    st = join_stats(w1.stats, w2.stats, touches_mark=False)
    return DiskFamily(Join(w1.tree, w2.tree), st, sweep(cell, st.mbar))


def _join_wall_region(w: DiskFamily, r: DiskFamily) -> Optional[DiskFamily]:
    if vertex_multiplicity(w.stats, r.stats, False) == 0:
        return None
    hit = intersect(w.locus, r.locus)
    if hit is None:
        return None
    seg, _ = hit
    if seg.dim != 1 or not contains(r.locus, _interior_point(seg), strict=True):
        raise NonGenericConfiguration(
            f"wall {w.code} only touches the boundary of the locus of {r.code}"
        )
    st = join_stats(w.stats, r.stats, touches_mark=False)
    return DiskFamily(Join(w.tree, r.tree), st, sweep(seg, st.mbar))


def produce(fan: Fan, points: Sequence[Point], a: DiskFamily, b: DiskFamily) -> Optional[DiskFamily]:
    """The family of ``Join(a, b)``, or ``None`` if its locus is empty or it does not count."""
    if a.stats.marks & b.stats.marks:
        return None
    ia, ib = a.maslov, b.maslov
    if ia < ib:
        a, b, ia, ib = b, a, ib, ia
    if ib == -2:
        if ia != 2:
            return None
        return _join_mark(fan, a, b, points[b.tree.index - 1])
    if ia == 0 and ib == 0:
        return _join_walls(a, b)
    if ia == 2 and ib == 0:
        return _join_wall_region(b, a)
    return None


def _produce_batch(args):
    fan, points, left, rights = args
    out = []
    for b in rights:
        f = produce(fan, points, left, b)
        if f is not None:
            out.append(f)
    return out


def _check_points(points: Sequence[Point]) -> Tuple[Point, ...]:
    pts = tuple((scalar(x), scalar(y)) for x, y in points)
    if len(set(pts)) != len(pts):
        raise NonGenericConfiguration("marked points must be pairwise distinct")
    return pts


def enumerate_families(fan: Fan, points: Sequence[Point], workers: Optional[int] = None) -> FamilySet:
    """All index 0 and 2 disk families with nonempty locus through ``points``.

    ``workers > 1`` evaluates each size class in a process pool; the result
    does not depend on it.
    """
    points = _check_points(points)
    n = len(points)
    buckets: Dict[int, List[DiskFamily]] = {1: []}
    for i in range(len(fan)):
        leaf = Leaf(i)
        buckets[1].append(DiskFamily(leaf, leaf_stats(fan, leaf), FULLPLANE))
    for i in range(1, n + 1):
        mark = Mark(i)
        buckets[1].append(DiskFamily(mark, mark_stats(fan, mark), point_cell(points[i - 1])))
    buckets[1].sort(key=lambda f: f.tree.order_key())

    pool = ProcessPoolExecutor(max_workers=workers) if workers and workers > 1 else None
    try:
        for size in range(2, 2 * n + 2):
            jobs = []
            for s1 in range(1, size // 2 + 1):
                s2 = size - s1
                left, right = buckets.get(s1, []), buckets.get(s2, [])
                for i, a in enumerate(left):
                    rights = right[i + 1:] if s1 == s2 else right
                    rights = [b for b in rights if not (a.stats.marks & b.stats.marks)]
                    if rights:
                        jobs.append((fan, points, a, rights))
            if pool is not None:
                results = pool.map(_produce_batch, jobs, chunksize=max(1, len(jobs) // (4 * workers)))
            else:
                results = map(_produce_batch, jobs)
            made = [f for batch in results for f in batch]
            made.sort(key=lambda f: f.code)
            seen = set()
            for f in made:
                assert f.code not in seen, f"duplicate family {f.code}"
                seen.add(f.code)
                assert f.locus.dim == f.maslov // 2 + 1, f"bad locus dimension for {f.code}"
            buckets[size] = made
            log.debug("size %d: %d families", size, len(made))
    finally:
        if pool is not None:
            pool.shutdown()

    families = [f for size in sorted(buckets) for f in buckets[size] if not isinstance(f.tree, Mark)]
    families.sort(key=lambda f: (f.maslov, f.code))
    fs = FamilySet(fan, points, tuple(families))
    _check_marks_off_walls(fs)
    return fs


def _check_marks_off_walls(fs: FamilySet) -> None:
    for w in fs.walls:
        for j, p in enumerate(fs.points, start=1):
            if contains(w.locus, p) and p != w.locus.base:
                raise NonGenericConfiguration(f"marked point {j} at {format_point(p)} lies on the wall {w.code}")


def potential_at(fs: FamilySet, q: Point) -> PotentialElement:
    """The n-pointed potential: ``sum Mult * z^m * u_I`` over index-2 families stopping at ``q``."""
    q = (scalar(q[0]), scalar(q[1]))
    for w in fs.walls:
        if contains(w.locus, q):
            raise NonGenericQuery(f"{format_point(q)} lies on the wall {w.code}")
    out = PotentialElement()
    for f in fs.disks:
        if contains(f.locus, q, strict=True):
            out.add_term(f.stats.m, f.stats.marks, Fraction(f.stats.mult))
        elif contains(f.locus, q):
            raise NonGenericQuery(f"{format_point(q)} lies on the boundary of the locus of {f.code}")
    return out


def perturb(points: Sequence[Point], seed: int) -> Tuple[Point, ...]:
    """Nudge points by tiny rationals with denominators ``10**6 * prime``."""
    primes = (1000003, 1000033, 1000037, 1000039, 1000081, 1000099)
    rng = random.Random(seed)
    out = []
    for x, y in points:
        p = rng.choice(primes)
        out.append((scalar(x) + Fraction(rng.randint(-50, 50), 10**6 * p),
                    scalar(y) + Fraction(rng.randint(-50, 50), 10**6 * p)))
    return tuple(out)


from .oracle import brute_force_potential  # noqa: E402  (re-export)
