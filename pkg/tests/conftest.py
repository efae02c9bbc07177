import random
import sys
from fractions import Fraction

import pytest

from tropdisks.families import NonGenericConfiguration, enumerate_families
from tropdisks.geom2d import det2, primitive
from tropdisks.ringalg import Fan

P2_RAYS = ((1, 0), (0, 1), (-1, -1))
F1_RAYS = ((0, 1), (-1, 0), (0, -1), (1, 1))
DEN = 997


def p2() -> Fan:
    return Fan(P2_RAYS)


def f1() -> Fan:
    return Fan(F1_RAYS)


@pytest.fixture
def P2():
    return p2()


@pytest.fixture
def F1():
    return f1()


def rat(rng: random.Random, box: int, den: int = DEN) -> Fraction:
    return Fraction(rng.randint(-box * den, box * den), den)


def random_fan(rng: random.Random, size: int, bound: int = 3) -> Fan:
    """A random complete fan with ``size`` primitive rays."""
    from tropdisks.geom2d import angle_key

    while True:
        rays = set()
        while len(rays) < size:
            v = (rng.randint(-bound, bound), rng.randint(-bound, bound))
            if v != (0, 0):
                rays.add(primitive(v)[0])
        rays = sorted(rays, key=angle_key)
        if all(det2(rays[i], rays[(i + 1) % size]) > 0 for i in range(size)):
            return Fan(tuple(rays))


def random_config(fan: Fan, n: int, seed: int, box: int = 5):
    """Seeded generic configuration: the first draw that enumerates cleanly."""
    rng = random.Random(seed)
    while True:
        pts = [(rat(rng, box), rat(rng, box)) for _ in range(n)]
        try:
            return pts, enumerate_families(fan, pts)
        except NonGenericConfiguration:
            continue


def random_weight(rng: random.Random, fan: Fan, top: int = 2):
    while True:
        m = tuple(rng.randint(0, top) for _ in range(len(fan)))
        if any(m):
            return m


def random_marks(rng: random.Random, n: int, nonempty: bool = True):
    while True:
        s = frozenset(i for i in range(1, n + 1) if rng.random() < 0.4)
        if s or not nonempty:
            return s


def random_lie(rng: random.Random, fan: Fan, n: int = 3, terms: int = 2, nilpotent: bool = True):
    from tropdisks.ringalg import LieElement, theta

    out = LieElement(fan)
    for _ in range(terms):
        m = random_weight(rng, fan)
        mb = theta(fan, m)
        if mb == (0, 0):
            v = (rng.randint(-2, 2), rng.randint(-2, 2))
        else:
            v = primitive((-mb[1], mb[0]))[0]
        c = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2, 3]))
        out = out + LieElement.term(fan, m, v, random_marks(rng, n, nilpotent), c)
    return out


def random_potential(rng: random.Random, fan: Fan, n: int = 3, terms: int = 3):
    from tropdisks.ringalg import PotentialElement

    out = PotentialElement()
    for _ in range(terms):
        out.add_term(random_weight(rng, fan), random_marks(rng, n, nonempty=False),
                     Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
    return out


def generic_queries(fs, rng: random.Random, count: int, box: int = 8):
    """``count`` seeded query points off walls, locus boundaries and marked points."""
    from tropdisks.families import NonGenericQuery, potential_at

    out = []
    while len(out) < count:
        q = (rat(rng, box), rat(rng, box))
        try:
            potential_at(fs, q)
        except NonGenericQuery:
            continue
        if q not in fs.points:
            out.append(q)
    return out


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
