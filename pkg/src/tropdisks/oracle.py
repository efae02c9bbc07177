"""Brute-force count of Maslov index 2 disks stopping at a point.

Independent of the locus machinery: every candidate tree is realised by
solving for its internal edge lengths directly.  With the stop at ``Q`` each
vertex sits at ``Q + sum(l_w * mbar_w)`` over the edges ``w`` on its path to
the stop, and a vertex carrying marked point ``i`` must sit at ``P_i``.
Intended for a handful of marked points only.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import sympy

from .geom2d import format_point
from .ringalg import Fan, PotentialElement
from .trees import ForbiddenJoin, Join, Leaf, Mark, MarkCollision, make_join, stats


@lru_cache(maxsize=32)
def candidate_trees(fan: Fan, n: int) -> Tuple[Join | Leaf, ...]:
    """Every canonical tree with ``d <= n`` marks, ``k = d + 1`` leaves and nonzero multiplicity."""
    by_size: Dict[int, list] = {1: [Leaf(i) for i in range(len(fan))] + [Mark(i) for i in range(1, n + 1)]}
    info = {t.code: stats(fan, t) for t in by_size[1]}
    for size in range(2, 2 * n + 2):
        made = {}
        for s1 in range(1, size // 2 + 1):
            for a in by_size[s1]:
                for b in by_size[size - s1]:
                    try:
                        t = make_join(a, b)
                    except (ForbiddenJoin, MarkCollision):
                        continue
                    if t.code in made:
                        continue
                    st = stats(fan, t)
                    if st.mult == 0 or st.k > n + 1 or st.d > n:
                        continue
                    made[t.code] = t
                    info[t.code] = st
        by_size[size] = [made[c] for c in sorted(made)]
    out = []
    for size in sorted(by_size):
        for t in by_size[size]:
            if isinstance(t, Mark):
                continue
            st = info[t.code]
            if st.maslov == 2 and st.mult != 0:
                out.append(t)
    return tuple(out)


def _constraints(fan: Fan, tree: Join, points, q):
    """Linear system ``A l = b`` for the edge lengths of ``tree``."""
    joins: List[Join] = []
    rows = []

    def walk(node, path):
        if isinstance(node, Join):
            joins.append(node)
            here = path + [len(joins) - 1]
            for child in (node.left, node.right):
                if isinstance(child, Mark):
                    rows.append((here, child.index))
                else:
                    walk(child, here)

    walk(tree, [])
    mbar = [stats(fan, j).mbar for j in joins]
    A = sympy.zeros(2 * len(rows), len(joins))
    b = sympy.zeros(2 * len(rows), 1)
    for r, (path, idx) in enumerate(rows):
        p = points[idx - 1]
        for w in path:
            A[2 * r, w] = mbar[w][0]
            A[2 * r + 1, w] = mbar[w][1]
        b[2 * r] = sympy.Rational(p[0] - q[0])
        b[2 * r + 1] = sympy.Rational(p[1] - q[1])
    return A, b


def realize(fan: Fan, tree, points: Sequence, q) -> bool:
    """Whether a disk of type ``tree`` through the marked points stops at ``q``."""
    from .families import AmbiguousRealization, NonGenericQuery

    if isinstance(tree, Leaf):
        return True
    A, b = _constraints(fan, tree, points, q)
    if A.det() == 0:
        aug = A.row_join(b)
        if A.rank() == aug.rank():
            raise AmbiguousRealization(f"{tree.code} has a positive-dimensional solution set at {format_point(q)}")
        return False
    lengths = A.LUsolve(b)
    if any(x == 0 for x in lengths):
        raise NonGenericQuery(f"{format_point(q)} is at the boundary of the locus of {tree.code}")
    return all(x > 0 for x in lengths)


def brute_force_potential(fan: Fan, points: Sequence, q) -> PotentialElement:
    from .families import NonGenericQuery, _check_points

    points = _check_points(points)
    q = (Fraction(q[0]), Fraction(q[1]))
    if q in points:
        raise NonGenericQuery(f"{format_point(q)} is a marked point")
    out = PotentialElement()
    for tree in candidate_trees(fan, len(points)):
        if realize(fan, tree, points, q):
            st = stats(fan, tree)
            out.add_term(st.m, st.marks, Fraction(st.mult))
    return out
