"""Monoid weights, the ring C[P] (x) R_n and the tropical Lie algebra.

Weights ``m`` live in the free monoid on the rays of a fan and are stored as
tuples of nonnegative ints.  A mark set ``I`` stands for the square-free
monomial ``u_I`` of ``R_n = C[u_1..u_n]/(u_i^2)``; products of overlapping
mark sets vanish.  Coefficients are exact :class:`~fractions.Fraction`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, FrozenSet, Iterable, Iterator, Sequence, Tuple

from .geom2d import IntVec, ZeroVector, angle_key, det2, dot, format_scalar, primitive, scalar

PWeight = Tuple[int, ...]
MarkSet = FrozenSet[int]
Key = Tuple[PWeight, MarkSet]


class FanError(ValueError):
    """Invalid fan data; the message carries a repair hint."""


class NonNilpotent(ValueError):
    pass


class LieInvariantError(ValueError):
    pass


RAY_LABELS = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class Fan:
    """Complete fan given by its ray generators, sorted counterclockwise."""

    rays: Tuple[IntVec, ...]

    def __post_init__(self):
        rays = tuple((int(x), int(y)) for x, y in self.rays)
        object.__setattr__(self, "rays", rays)
        if len(rays) < 3:
            raise FanError("a complete fan in the plane needs at least 3 rays")
        if len(rays) > len(RAY_LABELS):
            raise FanError(f"at most {len(RAY_LABELS)} rays are supported")
        for r in rays:
            if r == (0, 0):
                raise FanError("zero ray generator")
            p, k = primitive(r)
            if k != 1:
                raise FanError(f"ray {r} is not primitive; use {p}")
        ordered = sorted(rays, key=angle_key)
        start = ordered.index(rays[0])
        if list(rays) != ordered[start:] + ordered[:start]:
            raise FanError(f"rays are not in counterclockwise order; use {ordered}")
        for i, r in enumerate(rays):
            s = rays[(i + 1) % len(rays)]
            if det2(r, s) <= 0:
                raise FanError(
                    f"rays {r} and {s} leave a gap of at least pi; the fan is not complete"
                )

    def __len__(self) -> int:
        return len(self.rays)

    def label(self, i: int) -> str:
        return RAY_LABELS[i]

    def index(self, label: str) -> int:
        i = RAY_LABELS.find(label)
        if i < 0 or i >= len(self.rays):
            raise KeyError(label)
        return i

    def basis(self, i: int) -> PWeight:
        return tuple(1 if j == i else 0 for j in range(len(self.rays)))

    def zero(self) -> PWeight:
        return (0,) * len(self.rays)

    def theta(self, m: PWeight) -> IntVec:
        return theta(self, m)

    def to_json(self):
        return [list(r) for r in self.rays]


def theta(fan: Fan, m: PWeight) -> IntVec:
    """Boundary class: the sum of ray generators weighted by ``m``."""
    if len(m) != len(fan.rays):
        raise ValueError("weight vector does not match the fan")
    x = y = 0
    for c, (rx, ry) in zip(m, fan.rays):
        x += c * rx
        y += c * ry
    return (x, y)


def add_weights(m1: PWeight, m2: PWeight) -> PWeight:
    return tuple(a + b for a, b in zip(m1, m2))


def clockwise_normal(t: IntVec) -> IntVec:
    """Primitive clockwise rotation ``(t2, -t1)`` of an oriented wall tangent."""
    if tuple(t) == (0, 0):
        raise ZeroVector("wall tangent is zero")
    return primitive((t[1], -t[0]))[0]


def _sort_key(key: Key):
    m, marks = key
    return (m, tuple(sorted(marks)))


def format_monomial(m: PWeight, marks: Iterable[int], fan: Fan | None = None) -> str:
    parts = []
    for i, c in enumerate(m):
        if c:
            lab = fan.label(i) if fan is not None else f"e{i}"
            parts.append(lab if c == 1 else f"{c}{lab}")
    z = "z^{" + "+".join(parts) + "}" if parts else "1"
    u = "".join(f"u{i}" for i in sorted(marks))
    return z + u


class PotentialElement:
    """Finite sum of ``c * z^m * u_I``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[Key, Fraction] | None = None):
        self.terms: Dict[Key, Fraction] = {}
        if terms:
            for k, c in terms.items():
                if c:
                    self.terms[(tuple(k[0]), frozenset(k[1]))] = Fraction(c)

    @classmethod
    def monomial(cls, m: PWeight, marks: Iterable[int] = (), coeff=1) -> "PotentialElement":
        return cls({(tuple(m), frozenset(marks)): Fraction(coeff)})

    @classmethod
    def hori_vafa(cls, fan: Fan) -> "PotentialElement":
        return cls({(fan.basis(i), frozenset()): Fraction(1) for i in range(len(fan))})

    def copy(self) -> "PotentialElement":
        out = PotentialElement()
        out.terms = dict(self.terms)
        return out

    def add_term(self, m: PWeight, marks: MarkSet, coeff) -> None:
        key = (m, marks)
        c = self.terms.get(key, 0) + coeff
        if c:
            self.terms[key] = c
        else:
            self.terms.pop(key, None)

    def __iter__(self) -> Iterator[Tuple[PWeight, MarkSet, Fraction]]:
        for key in sorted(self.terms, key=_sort_key):
            yield key[0], key[1], self.terms[key]

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PotentialElement):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __add__(self, other: "PotentialElement") -> "PotentialElement":
        out = self.copy()
        for k, c in other.terms.items():
            out.add_term(k[0], k[1], c)
        return out

    def __neg__(self) -> "PotentialElement":
        return PotentialElement({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "PotentialElement") -> "PotentialElement":
        return self + (-other)

    def scale(self, c) -> "PotentialElement":
        return PotentialElement({k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, PotentialElement):
            return self.scale(Fraction(other))
        out = PotentialElement()
        for (m1, i1), c1 in self.terms.items():
            for (m2, i2), c2 in other.terms.items():
                if i1 & i2:
                    continue
                out.add_term(add_weights(m1, m2), i1 | i2, c1 * c2)
        return out

    __rmul__ = __mul__

    def without_marks(self) -> "PotentialElement":
        """Specialise every ``u_i`` to zero."""
        return PotentialElement({k: c for k, c in self.terms.items() if not k[1]})

    def to_json(self) -> list:
        return [
            {"m": list(m), "marks": sorted(marks), "coeff": format_scalar(c)}
            for m, marks, c in self
        ]

    @classmethod
    def from_json(cls, rows) -> "PotentialElement":
        out = cls()
        for row in rows:
            out.add_term(tuple(row["m"]), frozenset(row["marks"]), scalar(row["coeff"]))
        return out

    def format(self, fan: Fan | None = None) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for m, marks, c in self:
            mono = format_monomial(m, marks, fan)
            pieces.append(mono if c == 1 else f"({c})*{mono}")
        return " + ".join(pieces)

    def __repr__(self) -> str:
        return f"PotentialElement({self.format()})"


class LieElement:
    """Element of the tropical Lie algebra over ``R_n``.

    Stored as ``{(m, I): v}`` for the term ``z^m d_v u_I`` with ``v`` a
    rational vector of ``N`` (coefficients are absorbed into ``v``).  Every
    term satisfies ``<v, theta(m)> = 0`` and ``m != 0``.
    """

    __slots__ = ("fan", "terms")

    def __init__(self, fan: Fan, terms: Dict[Key, Tuple[Fraction, Fraction]] | None = None):
        self.fan = fan
        self.terms: Dict[Key, Tuple[Fraction, Fraction]] = {}
        for (m, marks), v in (terms or {}).items():
            self._add(tuple(m), frozenset(marks), (Fraction(v[0]), Fraction(v[1])))

    @classmethod
    def term(cls, fan: Fan, m: PWeight, n: Sequence, marks: Iterable[int] = (), coeff=1) -> "LieElement":
        c = Fraction(coeff)
        return cls(fan, {(tuple(m), frozenset(marks)): (c * n[0], c * n[1])})

    def _add(self, m: PWeight, marks: MarkSet, v) -> None:
        if not any(m):
            raise LieInvariantError("Lie algebra terms need a nonzero weight")
        if dot(v, theta(self.fan, m)) != 0:
            raise LieInvariantError(f"n={v} is not orthogonal to theta(m)={theta(self.fan, m)}")
        key = (m, marks)
        old = self.terms.get(key)
        if old is not None:
            v = (old[0] + v[0], old[1] + v[1])
        if v[0] or v[1]:
            self.terms[key] = v
        else:
            self.terms.pop(key, None)

    def __iter__(self):
        """Yield ``(coeff, m, n, marks)`` with ``n`` a primitive integer vector."""
        for key in sorted(self.terms, key=_sort_key):
            v = self.terms[key]
            den = v[0].denominator * v[1].denominator
            n, k = primitive((int(v[0] * den), int(v[1] * den)))
            yield Fraction(k, den), key[0], n, key[1]

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieElement):
            return NotImplemented
        return self.fan == other.fan and self.terms == other.terms

    __hash__ = None

    def __add__(self, other: "LieElement") -> "LieElement":
        out = LieElement(self.fan, self.terms)
        for (m, marks), v in other.terms.items():
            out._add(m, marks, v)
        return out

    def scale(self, c) -> "LieElement":
        c = Fraction(c)
        return LieElement(self.fan, {k: (c * v[0], c * v[1]) for k, v in self.terms.items()})

    def __neg__(self) -> "LieElement":
        return self.scale(-1)

    def __sub__(self, other: "LieElement") -> "LieElement":
        return self + (-other)

    def derive(self, f: PotentialElement) -> PotentialElement:
        """Apply the derivation ``z^m d_v u_I : z^m' u_J -> <v, m'bar> z^(m+m') u_I u_J``."""
        out = PotentialElement()
        fan = self.fan
        mbar_cache: Dict[PWeight, IntVec] = {}
        for (m, marks), v in self.terms.items():
            for (m2, marks2), c in f.terms.items():
                if marks & marks2:
                    continue
                mb = mbar_cache.get(m2)
                if mb is None:
                    mb = mbar_cache[m2] = theta(fan, m2)
                pairing = v[0] * mb[0] + v[1] * mb[1]
                if pairing:
                    out.add_term(add_weights(m, m2), marks | marks2, c * pairing)
        return out

    def to_json(self) -> list:
        return [
            {"m": list(m), "marks": sorted(marks), "coeff": format_scalar(c), "n": list(n)}
            for c, m, n, marks in self
        ]

    @classmethod
    def from_json(cls, fan: Fan, rows) -> "LieElement":
        out = cls(fan)
        for row in rows:
            c = scalar(row["coeff"])
            n = row["n"]
            out._add(tuple(row["m"]), frozenset(row["marks"]), (c * n[0], c * n[1]))
        return out

    def format(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            f"{'' if c == 1 else f'({c})*'}{format_monomial(m, marks, self.fan)}d_{n}"
            for c, m, n, marks in self
        )

    def __repr__(self) -> str:
        return f"LieElement({self.format()})"


def bracket(h1: LieElement, h2: LieElement) -> LieElement:
    """``[z^m d_n, z^m' d_n'] = z^(m+m') d_{(m'bar, n) n' - (mbar, n') n}``, R_n-bilinear."""
    if h1.fan != h2.fan:
        raise ValueError("bracket of elements over different fans")
    fan = h1.fan
    out = LieElement(fan)
    for (m1, i1), v1 in h1.terms.items():
        mb1 = theta(fan, m1)
        for (m2, i2), v2 in h2.terms.items():
            if i1 & i2:
                continue
            mb2 = theta(fan, m2)
            a = dot(mb2, v1)
            b = dot(mb1, v2)
            v = (a * v2[0] - b * v1[0], a * v2[1] - b * v1[1])
            if v[0] or v[1]:
                out._add(add_weights(m1, m2), i1 | i2, v)
    return out


def exp_apply(log_theta: LieElement, f: PotentialElement, sign: int = 1) -> PotentialElement:
    """``exp(sign * D)(f)`` for the derivation ``D`` of ``log_theta``.

    Each application of ``D`` multiplies in a nonempty mark set, so the
    series stops after at most ``n + 1`` terms.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    for (_, marks) in log_theta.terms:
        if not marks:
            raise NonNilpotent("wall functions must carry at least one mark")
    d = log_theta if sign == 1 else -log_theta
    out = f.copy()
    power = f
    j = 0
    while True:
        power = d.derive(power)
        if not power:
            return out
        j += 1
        out = out + power.scale(Fraction(1, factorial(j)))
