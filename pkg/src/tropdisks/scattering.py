"""Scattering diagram of the Maslov index 0 families and its wall-crossing.

Each index-0 family contributes a wall: its ray locus oriented along the
propagation direction ``t = -mbar``, carrying ``log = k * Mult * z^m d_n u_I``
with ``n`` the clockwise normal of ``t``.  Crossing a wall applies
``exp(sigma * log)``, ``sigma = sign det(t, direction of travel)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .families import FamilySet, NonGenericQuery, enumerate_families, potential_at
from .geom2d import (
    Cell,
    IntVec,
    NonGenericPath,
    Point,
    angle_key,
    contains,
    det2,
    dot,
    format_point,
    format_scalar,
    intersect,
    scalar,
    segment_crossings,
)
from .ringalg import Fan, LieElement, PotentialElement, PWeight, clockwise_normal, exp_apply

__all__ = [
    "Wall",
    "Joint",
    "Diagram",
    "build_diagram",
    "path_ordered_apply",
    "check_joint_consistency",
    "check_wall_crossing",
    "wall_crossing_holds",
    "transport",
]


@dataclass(frozen=True)
class Wall:
    support: Cell
    m: PWeight
    n: IntVec
    log_theta: LieElement
    source_tree: object
    marks: frozenset
    coeff: int

    @property
    def t(self) -> IntVec:
        return self.support.t

    @property
    def base(self) -> Point:
        return self.support.base

    def to_json(self) -> dict:
        x, y = self.base
        return {
            "tree": self.source_tree.code,
            "base": [format_scalar(x), format_scalar(y)],
            "t": list(self.t),
            "m": list(self.m),
            "n": list(self.n),
            "marks": sorted(self.marks),
            "coeff": self.coeff,
            "log": self.log_theta.to_json(),
            "support": self.support.to_json(),
        }


@dataclass(frozen=True)
class Joint:
    point: Point
    walls: Tuple[int, ...]

    def to_json(self) -> dict:
        return {"point": [format_scalar(c) for c in self.point], "walls": list(self.walls)}


@dataclass(frozen=True)
class Diagram:
    fan: Fan
    walls: Tuple[Wall, ...]
    joints: Tuple[Joint, ...]
    marked_points: Tuple[Point, ...]

    def without_wall(self, k: int) -> "Diagram":
        """The diagram with wall ``k`` deleted (a test hook for negative controls)."""
        walls = self.walls[:k] + self.walls[k + 1:]
        return replace(self, walls=walls, joints=find_joints(walls, self.marked_points))

    @property
    def singular_points(self) -> Tuple[Point, ...]:
        return tuple(j.point for j in self.joints) + self.marked_points

    def scattered(self) -> List[int]:
        """Indices of walls that start at a joint rather than at a marked point."""
        return [i for i, w in enumerate(self.walls) if w.base not in self.marked_points]

    def to_json(self) -> dict:
        return {
            "fan": self.fan.to_json(),
            "marked_points": [[format_scalar(x), format_scalar(y)] for x, y in self.marked_points],
            "walls": [w.to_json() for w in self.walls],
            "joints": [j.to_json() for j in self.joints],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, doc: dict) -> "Diagram":
        from .trees import parse_tree

        fan = Fan(tuple(tuple(r) for r in doc["fan"]))
        points = tuple((scalar(x), scalar(y)) for x, y in doc["marked_points"])
        walls = []
        for row in doc["walls"]:
            walls.append(Wall(
                support=Cell.from_json(row["support"]),
                m=tuple(row["m"]),
                n=tuple(row["n"]),
                log_theta=LieElement.from_json(fan, row["log"]),
                source_tree=parse_tree(row["tree"]),
                marks=frozenset(row["marks"]),
                coeff=int(row["coeff"]),
            ))
        joints = tuple(
            Joint(tuple(scalar(c) for c in j["point"]), tuple(j["walls"])) for j in doc["joints"]
        )
        return cls(fan, tuple(walls), joints, points)


def find_joints(walls: Sequence[Wall], marked_points: Sequence[Point]) -> Tuple[Joint, ...]:
    found = set()
    for i in range(len(walls)):
        for j in range(i + 1, len(walls)):
            hit = intersect(walls[i].support, walls[j].support)
            if hit is None:
                continue
            cell, transversal = hit
            if transversal and cell.dim == 0 and cell.vertex not in marked_points:
                found.add(cell.vertex)
    joints = []
    for x in sorted(found):
        incident = tuple(k for k, w in enumerate(walls) if contains(w.support, x))
        joints.append(Joint(x, incident))
    return tuple(joints)


def build_diagram(fs: FamilySet, normal_sign: int = 1) -> Diagram:
    """One wall per index-0 family; ``normal_sign=-1`` flips the normal convention."""
    walls = []
    for fam in fs.walls:
        st = fam.stats
        t = fam.locus.t
        n = clockwise_normal(t)
        n = (normal_sign * n[0], normal_sign * n[1])
        coeff = st.k_div * st.mult
        log = LieElement.term(fs.fan, st.m, n, st.marks, coeff)
        walls.append(Wall(fam.locus, st.m, n, log, fam.tree, st.marks, coeff))
    walls = tuple(walls)
    return Diagram(fs.fan, walls, find_joints(walls, fs.points), fs.points)


def _on_segment(a: Point, b: Point, s: Point) -> bool:
    d = (b[0] - a[0], b[1] - a[1])
    w = (s[0] - a[0], s[1] - a[1])
    return det2(d, w) == 0 and 0 <= dot(w, d) <= dot(d, d)


def path_ordered_apply(d: Diagram, path: Sequence[Point], f: PotentialElement) -> PotentialElement:
    """Transport ``f`` along a polyline, applying wall automorphisms in crossing order."""
    path = [(scalar(x), scalar(y)) for x, y in path]
    for p in path:
        for w in d.walls:
            if contains(w.support, p):
                raise NonGenericPath(f"path vertex {format_point(p)} lies on the wall {w.source_tree.code}")
    out = f
    for a, b in zip(path, path[1:]):
        if a == b:
            continue
        for s in d.singular_points:
            if _on_segment(a, b, s):
                raise NonGenericPath(f"segment {format_point(a)} -> {format_point(b)} meets the singular point {format_point(s)}")
        hits = []
        for k, w in enumerate(d.walls):
            for tau, _ in segment_crossings(a, b, w.support):
                hits.append((tau, k))
        hits.sort()
        direction = (b[0] - a[0], b[1] - a[1])
        for tau, k in hits:
            w = d.walls[k]
            sigma = 1 if det2(w.t, direction) > 0 else -1
            out = exp_apply(w.log_theta, out, sigma)
    return out


def check_joint_consistency(d: Diagram, joint_index: int) -> bool:
    """Whether the loop around a joint acts as the identity on every ``z^{e_rho}``."""
    joint = d.joints[joint_index]
    x = joint.point
    germs = []
    for k in joint.walls:
        w = d.walls[k]
        t = w.t
        germs.append((t, 1, k))
        if w.base != x:
            germs.append(((-t[0], -t[1]), -1, k))
    germs.sort(key=lambda g: (angle_key(g[0]), g[2]))
    for i in range(len(d.fan)):
        g = PotentialElement.monomial(d.fan.basis(i))
        image = g
        for _, sigma, k in germs:
            image = exp_apply(d.walls[k].log_theta, image, sigma)
        if image != g:
            return False
    return True


_DETOUR_OFFSETS = [Fraction(s * p, q) for p, q in ((1, 3), (1, 5), (2, 7), (1, 11), (3, 13), (1, 17), (5, 19), (1, 23))
                   for s in (1, -1)]


def transport(d: Diagram, q: Point, q2: Point, f: PotentialElement) -> PotentialElement:
    """Path-ordered transport from ``q`` to ``q2``, detouring around singular points if needed."""
    q = (scalar(q[0]), scalar(q[1]))
    q2 = (scalar(q2[0]), scalar(q2[1]))
    try:
        return path_ordered_apply(d, [q, q2], f)
    except NonGenericPath as err:
        first = err
    mid = ((q[0] + q2[0]) / 2, (q[1] + q2[1]) / 2)
    perp = (q[1] - q2[1], q2[0] - q[0])
    if perp == (0, 0):
        perp = (Fraction(1), Fraction(0))
    for s in _DETOUR_OFFSETS:
        way = (mid[0] + s * perp[0], mid[1] + s * perp[1])
        try:
            return path_ordered_apply(d, [q, way, q2], f)
        except NonGenericPath:
            continue
    raise first


def wall_crossing_holds(fs: FamilySet, d: Diagram, q: Point, q2: Point) -> bool:
    q = (scalar(q[0]), scalar(q[1]))
    q2 = (scalar(q2[0]), scalar(q2[1]))
    here = potential_at(fs, q)
    there = potential_at(fs, q2)
    return transport(d, q, q2, here) == there


def check_wall_crossing(fan: Fan, points: Sequence[Point], q: Point, q2: Point) -> bool:
    fs = enumerate_families(fan, points)
    return wall_crossing_holds(fs, build_diagram(fs), q, q2)
