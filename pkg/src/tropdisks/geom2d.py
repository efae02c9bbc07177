"""Exact rational planar geometry for tropical loci.

Every locus is a convex rational polyhedral cell of the plane kept in
H-representation: equalities ``<a, x> = b`` and inequalities ``<a, x> >= b``
with primitive integer normals ``a`` and :class:`~fractions.Fraction`
right-hand sides.  One-dimensional cells also carry an oriented primitive
tangent.  Nothing in this module ever touches floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence, Tuple, Union

IntVec = Tuple[int, int]
Point = Tuple[Fraction, Fraction]
Constraint = Tuple[IntVec, Fraction]

RationalLike = Union[int, str, Fraction]


class GeometryError(Exception):
    """Base class for geometric failures."""


class ZeroVector(GeometryError, ValueError):
    pass


class DegenerateSweep(GeometryError):
    pass


class NonGenericPath(GeometryError):
    """A path touches a wall endpoint, runs along a wall, or hits a singular point."""


# ---------------------------------------------------------------------------
# scalars and vectors


def scalar(value: RationalLike) -> Fraction:
    """Parse ``"num/den"``, an integer string, an int or a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(c in text for c in ".eE"):
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_scalar(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def format_point(p: Sequence) -> str:
    return f"({p[0]}, {p[1]})"


def point(x: RationalLike, y: RationalLike) -> Point:
    return (scalar(x), scalar(y))


def parse_point(text: str) -> Point:
    """Parse ``"x/y,u/v"`` style coordinates."""
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected two comma separated coordinates, got {text!r}")
    return point(parts[0], parts[1])


def det2(v: Sequence, w: Sequence):
    return v[0] * w[1] - v[1] * w[0]


def dot(v: Sequence, w: Sequence):
    return v[0] * w[0] + v[1] * w[1]


def primitive(v: IntVec) -> Tuple[IntVec, int]:
    """Split ``v`` as ``k * v_hat`` with ``v_hat`` primitive and ``k >= 1``."""
    a, b = int(v[0]), int(v[1])
    k = gcd(a, b)
    if k == 0:
        raise ZeroVector("the zero vector has no primitive direction")
    return (a // k, b // k), k


def _sub(p: Point, q: Point) -> Point:
    return (p[0] - q[0], p[1] - q[1])


def _axpy(p: Point, lam: Fraction, v: Sequence) -> Point:
    return (p[0] + lam * v[0], p[1] + lam * v[1])


def _normalize(a: Sequence[int], b: Fraction) -> Constraint:
    (na, k) = primitive((int(a[0]), int(a[1])))
    return na, Fraction(b) / k


# ---------------------------------------------------------------------------
# cells


@dataclass(frozen=True)
class Cell:
    """A nonempty convex rational cell of the plane.

    ``eq`` holds pairs ``(a, b)`` meaning ``<a, x> = b``; ``ineq`` pairs mean
    ``<a, x> >= b``.  ``t`` is the oriented primitive tangent of a
    one-dimensional cell and ``None`` otherwise.  Cells built through the
    module functions are canonical, so ``==`` is point-set equality.
    """

    dim: int
    eq: Tuple[Constraint, ...] = ()
    ineq: Tuple[Constraint, ...] = ()
    t: Optional[IntVec] = None

    def __post_init__(self):
        if self.dim not in (0, 1, 2):
            raise ValueError(f"bad cell dimension {self.dim}")
        if (self.t is None) != (self.dim != 1):
            raise ValueError("exactly the one-dimensional cells carry a tangent")

    # -- convenience views ----------------------------------------------
    @property
    def base(self) -> Optional[Point]:
        """Start point of a ray or segment, or the point of a 0-cell."""
        if self.dim == 0:
            return self.vertex
        if self.dim == 1:
            x0, u, lo, _ = _line_params(self)
            return None if lo is None else _axpy(x0, lo, u)
        return None

    @property
    def end(self) -> Optional[Point]:
        if self.dim != 1:
            return None
        x0, u, _, hi = _line_params(self)
        return None if hi is None else _axpy(x0, hi, u)

    @property
    def vertex(self) -> Point:
        if self.dim != 0:
            raise GeometryError("only 0-cells have a vertex")
        return _solve_eqs(self.eq[0], self.eq[1])

    def endpoints(self) -> Tuple[Point, ...]:
        return tuple(p for p in (self.base, self.end) if p is not None)

    def to_json(self) -> dict:
        doc = {
            "dim": self.dim,
            "eq": [[list(a), format_scalar(b)] for a, b in self.eq],
            "ineq": [[list(a), format_scalar(b)] for a, b in self.ineq],
        }
        if self.t is not None:
            doc["t"] = list(self.t)
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "Cell":
        def cons(rows):
            return tuple(((int(a[0]), int(a[1])), scalar(b)) for a, b in rows)

        t = doc.get("t")
        return cls(
            dim=int(doc["dim"]),
            eq=cons(doc.get("eq", [])),
            ineq=cons(doc.get("ineq", [])),
            t=None if t is None else (int(t[0]), int(t[1])),
        )

    def __str__(self) -> str:
        if self.dim == 0:
            x, y = self.vertex
            return f"point({x}, {y})"
        if self.dim == 1:
            b, e = self.base, self.end
            if b is not None and e is not None:
                return f"segment({b[0]}, {b[1]} -> {e[0]}, {e[1]})"
            if b is not None:
                return f"ray({b[0]}, {b[1]}; {self.t})"
            return f"line(t={self.t})"
        return "region(" + " & ".join(f"{a}.x >= {b}" for a, b in self.ineq) + ")"


FULLPLANE = Cell(dim=2)


def point_cell(p: Point) -> Cell:
    x, y = Fraction(p[0]), Fraction(p[1])
    return Cell(dim=0, eq=(((1, 0), x), ((0, 1), y)))


def _dim1(x0: Point, u: IntVec, lo: Optional[Fraction], hi: Optional[Fraction]) -> Cell:
    """Canonical 1-cell ``{x0 + mu*u : lo <= mu <= hi}`` (``None`` = unbounded)."""
    t, k = primitive(u)
    # rescale the parameter to the primitive tangent
    if lo is not None:
        lo = lo * k
    if hi is not None:
        hi = hi * k
    if lo is not None and hi is not None and lo == hi:
        return point_cell(_axpy(x0, lo, t))
    normal = (-t[1], t[0])
    eqs = (_normalize(normal, dot(normal, x0)),)
    s0 = dot(t, x0)
    tt = dot(t, t)
    ineqs = []
    if lo is not None:
        ineqs.append(((t[0], t[1]), s0 + lo * tt))
    if hi is not None:
        ineqs.append(((-t[0], -t[1]), -(s0 + hi * tt)))
    return Cell(dim=1, eq=eqs, ineq=tuple(sorted(ineqs)), t=t)


def ray_cell(base: Point, t: IntVec) -> Cell:
    return _dim1((Fraction(base[0]), Fraction(base[1])), t, Fraction(0), None)


def segment_cell(a: Point, b: Point) -> Cell:
    """Oriented segment from ``a`` to ``b`` (rational endpoints)."""
    d = _sub(b, a)
    if d == (0, 0):
        return point_cell(a)
    den = d[0].denominator * d[1].denominator // gcd(d[0].denominator, d[1].denominator)
    u = (int(d[0] * den), int(d[1] * den))
    t, k = primitive(u)
    # b = a + (k/den) * t
    return _dim1(a, t, Fraction(0), Fraction(k, den))


def region(ineqs: Iterable[Tuple[Sequence[int], RationalLike]]) -> Cell:
    """Cell cut out by the given inequalities; raises if it is empty."""
    c = _from_constraints((), tuple((tuple(a), scalar(b)) for a, b in ineqs), None)
    if c is None:
        raise GeometryError("empty region")
    return c


def _line_params(c: Cell):
    """Return ``(x0, t, lo, hi)`` with the 1-cell equal to ``x0 + mu*t``, ``mu`` in [lo, hi]."""
    (a, b), = c.eq
    t = c.t
    x0 = _point_on_line(a, b)
    return (x0, t) + _interval(x0, t, c.ineq)


def _point_on_line(a: IntVec, b: Fraction) -> Point:
    if a[0] != 0:
        return (Fraction(b) / a[0], Fraction(0))
    return (Fraction(0), Fraction(b) / a[1])


def _interval(x0: Point, t: IntVec, ineqs: Iterable[Constraint]):
    """Bounds on ``mu`` such that ``x0 + mu*t`` satisfies ``ineqs``.

    Returns ``(lo, hi)``; raises ``_Infeasible`` for a constant violated row.
    """
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    for g, h in ineqs:
        slope = dot(g, t)
        rest = h - dot(g, x0)
        if slope == 0:
            if rest > 0:
                raise _Infeasible
            continue
        bound = Fraction(rest) / slope
        if slope > 0:
            lo = bound if lo is None else max(lo, bound)
        else:
            hi = bound if hi is None else min(hi, bound)
    if lo is not None and hi is not None and lo > hi:
        raise _Infeasible
    return lo, hi


class _Infeasible(Exception):
    pass


def _solve_eqs(c1: Constraint, c2: Constraint) -> Point:
    (a, b), (g, h) = c1, c2
    d = det2(a, g)
    return (Fraction(b * g[1] - h * a[1]) / d, Fraction(a[0] * h - g[0] * b) / d)


# ---------------------------------------------------------------------------
# Fourier-Motzkin feasibility in two variables


def _feasible(rows: Sequence[Tuple[Sequence, Fraction, bool]]) -> bool:
    """Decide ``<g, x> >= h`` (``> h`` when strict) for all rows, exactly."""
    lower, upper, xrows = [], [], []
    for g, h, strict in rows:
        if g[1] > 0:
            lower.append((g, h, strict))
        elif g[1] < 0:
            upper.append((g, h, strict))
        else:
            xrows.append((Fraction(g[0]), Fraction(h), strict))
    # y >= (h_p - g_p0 x)/g_p1  and  y <= (h_q - g_q0 x)/g_q1 (g_q1 < 0)
    for gp, hp, sp in lower:
        for gq, hq, sq in upper:
            # (h_q - g_q0 x)/g_q1 - (h_p - g_p0 x)/g_p1 >= 0
            coef = Fraction(-gq[0], gq[1]) + Fraction(gp[0], gp[1])
            rhs = Fraction(hp, 1) / gp[1] - Fraction(hq, 1) / gq[1]
            xrows.append((coef, rhs, sp or sq))
    lo, lo_strict = None, False
    hi, hi_strict = None, False
    for coef, rhs, strict in xrows:
        if coef == 0:
            if rhs > 0 or (strict and rhs == 0):
                return False
            continue
        bound = rhs / coef
        if coef > 0:
            if lo is None or bound > lo or (bound == lo and strict):
                lo, lo_strict = bound, strict
        else:
            if hi is None or bound < hi or (bound == hi and strict):
                hi, hi_strict = bound, strict
    if lo is None or hi is None:
        return True
    if lo < hi:
        return True
    return lo == hi and not (lo_strict or hi_strict)


def _drop_redundant(ineqs: Sequence[Constraint]) -> Tuple[Constraint, ...]:
    kept = sorted(set(ineqs))
    i = 0
    while i < len(kept):
        g, h = kept[i]
        others = [(a, b, False) for j, (a, b) in enumerate(kept) if j != i]
        if not _feasible(others + [((-g[0], -g[1]), -h, True)]):
            del kept[i]
        else:
            i += 1
    return tuple(kept)


def _from_constraints(eqs: Tuple[Constraint, ...], ineqs: Tuple[Constraint, ...],
                      t_hint: Optional[IntVec]) -> Optional[Cell]:
    """Canonical cell for an arbitrary constraint system, ``None`` if empty."""
    try:
        eqs = _clean(eqs, equality=True)
        ineqs = _clean(ineqs, equality=False)
    except _Infeasible:
        return None
    if eqs:
        a0, b0 = eqs[0]
        other = next((e for e in eqs[1:] if det2(a0, e[0]) != 0), None)
        if other is None:
            # all equalities describe one line (after normalisation they must agree)
            for a, b in eqs[1:]:
                if (a == a0 and b != b0) or (a == (-a0[0], -a0[1]) and b != -b0):
                    return None
            t = t_hint if t_hint is not None and dot(a0, t_hint) == 0 else (a0[1], -a0[0])
            x0 = _point_on_line(a0, b0)
            try:
                lo, hi = _interval(x0, t, ineqs)
            except _Infeasible:
                return None
            if t_hint is None and lo is None and hi is not None:
                t, lo, hi = (-t[0], -t[1]), -hi, None
            return _dim1(x0, t, lo, hi)
        p = _solve_eqs(eqs[0], other)
        if any(dot(a, p) != b for a, b in eqs):
            return None
        if any(dot(a, p) < b for a, b in ineqs):
            return None
        return point_cell(p)
    if not ineqs:
        return FULLPLANE
    if _feasible([(a, b, True) for a, b in ineqs]):
        return Cell(dim=2, ineq=_drop_redundant(ineqs))
    if not _feasible([(a, b, False) for a, b in ineqs]):
        return None
    for i, (g, h) in enumerate(ineqs):
        rows = [(a, b, j == i) for j, (a, b) in enumerate(ineqs)]
        if not _feasible(rows):
            return _from_constraints(((g, h),), ineqs, t_hint)
    raise AssertionError("lower-dimensional set without an implicit equality")


def _clean(rows, equality: bool) -> Tuple[Constraint, ...]:
    out = []
    for a, b in rows:
        if tuple(a) == (0, 0):
            if (equality and b != 0) or (not equality and b > 0):
                raise _Infeasible
            continue
        out.append(_normalize(a, b))
    return tuple(out)


# ---------------------------------------------------------------------------
# operations


def contains(c: Cell, p: Point, strict: bool = False) -> bool:
    """Membership; ``strict`` asks for the relative interior."""
    if any(dot(a, p) != b for a, b in c.eq):
        return False
    if strict:
        return all(dot(a, p) > b for a, b in c.ineq)
    return all(dot(a, p) >= b for a, b in c.ineq)


def transversal(c1: Cell, c2: Cell) -> bool:
    """Whether the affine hulls of two cells meet transversally."""
    if c1.dim == 1 and c2.dim == 1:
        return det2(c1.t, c2.t) != 0
    return True


def intersect(c1: Cell, c2: Cell) -> Optional[Tuple[Cell, bool]]:
    """Intersection cell and transversality flag, or ``None`` if disjoint."""
    hint = c1.t if c1.t is not None else c2.t
    cell = _from_constraints(c1.eq + c2.eq, c1.ineq + c2.ineq, hint)
    if cell is None:
        return None
    return cell, transversal(c1, c2)


def sweep(c: Cell, d: IntVec) -> Cell:
    """Minkowski sum of ``c`` with the ray spanned by ``-d``."""
    if tuple(d) == (0, 0):
        raise ZeroVector("cannot sweep along the zero vector")
    v = (-int(d[0]), -int(d[1]))
    if c.dim == 0:
        return ray_cell(c.vertex, primitive(v)[0])
    if c.dim == 2:
        raise DegenerateSweep("a 2-cell cannot be swept to higher dimension")
    x0, u, lo, hi = _line_params(c)
    D = det2(u, v)
    if D == 0:
        # only sweeping a ray along its own unbounded direction is harmless
        if dot(u, v) > 0 and hi is None:
            return c
        if dot(u, v) < 0 and lo is None:
            return c
        raise DegenerateSweep(f"direction {tuple(d)} is parallel to {c}")
    s = 1 if D > 0 else -1
    ineqs = []
    a_beta = (-s * u[1], s * u[0])
    ineqs.append((a_beta, dot(a_beta, x0)))
    w = (s * v[1], -s * v[0])
    if lo is not None:
        ineqs.append((w, dot(w, x0) + lo * abs(D)))
    if hi is not None:
        ineqs.append(((-w[0], -w[1]), -(dot(w, x0) + hi * abs(D))))
    return Cell(dim=2, ineq=tuple(sorted(_normalize(a, b) for a, b in ineqs)))


def segment_crossings(a: Point, b: Point, c: Cell) -> list:
    """Times ``tau`` in (0, 1) where the open segment ``a -> b`` crosses the 1-cell ``c``.

    Returns a sorted list of ``(tau, point)``.
    """
    if c.dim != 1:
        raise GeometryError("segment_crossings needs a 1-cell")
    (g, h), = c.eq
    d = _sub(b, a)
    ga = dot(g, a)
    slope = dot(g, d)
    if slope == 0:
        if ga != h:
            return []
        seg = segment_cell(a, b)
        if intersect(seg, c) is not None:
            raise NonGenericPath(f"segment runs along {c}")
        return []
    tau = (h - ga) / slope
    if not 0 < tau < 1:
        if (tau == 0 or tau == 1) and contains(c, a if tau == 0 else b):
            raise NonGenericPath("segment endpoint lies on a wall")
        return []
    x = _axpy(a, tau, d)
    if contains(c, x, strict=True):
        return [(tau, x)]
    if contains(c, x):
        raise NonGenericPath(f"segment passes through an endpoint of {c}")
    return []


def angle_key(v: Sequence):
    """Sort key ordering nonzero vectors counterclockwise from the positive x-axis."""
    x, y = v
    half = 0 if (y > 0 or (y == 0 and x > 0)) else 1
    return (half, _SlopeKey(x, y))


class _SlopeKey:
    __slots__ = ("x", "y")

    def __init__(self, x, y):
        self.x, self.y = x, y

    def __lt__(self, other):
        return det2((self.x, self.y), (other.x, other.y)) > 0

    def __eq__(self, other):
        return det2((self.x, self.y), (other.x, other.y)) == 0
