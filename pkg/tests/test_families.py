import json
import random
from fractions import Fraction

import pytest

from conftest import F1_RAYS, P2_RAYS, generic_queries, rat, random_config
from tropdisks.families import (
    AmbiguousRealization,
    FamilySet,
    NonGenericConfiguration,
    NonGenericQuery,
    brute_force_potential,
    enumerate_families,
    perturb,
    potential_at,
)
from tropdisks.geom2d import NonGenericPath, contains, region, segment_crossings
from tropdisks.ringalg import Fan, PotentialElement

P2 = Fan(P2_RAYS)
F1 = Fan(F1_RAYS)
HV = PotentialElement.hori_vafa(P2)
ORIGIN = [(0, 0)]

# chamber table for one point at the origin; frozen from the brute-force oracle
CHAMBERS = [
    ((-1, -2), (1, 1, 0)),
    ((-2, 1), (1, 0, 1)),
    ((3, 1), (0, 1, 1)),
]


def with_u1(m):
    return HV + PotentialElement.monomial(m, {1})


def test_one_point_counts():
    fs = enumerate_families(P2, ORIGIN)
    assert len(fs.walls) == 3
    assert sorted(w.locus.t for w in fs.walls) == [(-1, 0), (0, -1), (1, 1)]
    assert all(w.locus.base == (0, 0) for w in fs.walls)
    two_leaf = [f for f in fs.disks if f.stats.k == 2]
    assert len(two_leaf) == 6 and len(fs.disks) == 9


def test_ab_loci_abut_on_diagonal():
    fs = enumerate_families(P2, ORIGIN)
    ab = [f.locus for f in fs.disks if f.stats.m == (1, 1, 0)]
    assert sorted(ab, key=str) == sorted([
        region([((-1, 1), 0), ((0, -1), 0)]),  # x <= y <= 0
        region([((1, -1), 0), ((-1, 0), 0)]),  # y <= x <= 0
    ], key=str)
    # the diagonal is not a wall
    assert not any(contains(w.locus, (-1, -1)) for w in fs.walls)


@pytest.mark.parametrize("q,m", CHAMBERS)
def test_chamber_table(q, m):
    fs = enumerate_families(P2, ORIGIN)
    assert potential_at(fs, q) == with_u1(m)
    assert brute_force_potential(P2, ORIGIN, q) == with_u1(m)


def test_no_points_gives_leaves_only():
    for fan in (P2, F1):
        fs = enumerate_families(fan, [])
        assert not fs.walls and len(fs.disks) == len(fan)
        assert potential_at(fs, (1, 1)) == PotentialElement.hori_vafa(fan)
    assert brute_force_potential(P2, [], (5, 7)) == HV


def test_nongeneric_queries():
    fs = enumerate_families(P2, ORIGIN)
    with pytest.raises(NonGenericQuery):
        potential_at(fs, (-3, 0))
    with pytest.raises((NonGenericQuery, AmbiguousRealization)):
        brute_force_potential(P2, ORIGIN, (-1, -1))
    with pytest.raises(NonGenericQuery):
        potential_at(fs, (-1, -1))


def test_nongeneric_configurations():
    with pytest.raises(NonGenericConfiguration):
        enumerate_families(P2, [(0, 0), (0, 0)])
    # second point on the west wall of the first
    with pytest.raises(NonGenericConfiguration):
        enumerate_families(P2, [(0, 0), (-2, 0)])


def test_perturb_is_deterministic_and_small():
    pts = [(0, 0), (-2, 0)]
    moved = perturb(pts, 4)
    assert moved == perturb(pts, 4)
    assert all(abs(p[0] - q[0]) < Fraction(1, 10**6) for p, q in zip(pts, moved))
    enumerate_families(P2, moved)


def test_serialisation_round_trip():
    pts, fs = random_config(P2, 2, 11)
    text = fs.dumps()
    assert FamilySet.from_json(json.loads(text)).dumps() == text


@pytest.mark.parametrize("rays,n,seed", [(P2_RAYS, 2, 5), (F1_RAYS, 2, 6), (P2_RAYS, 3, 7)])
def test_family_invariants(rays, n, seed):
    _, fs = random_config(Fan(rays), n, seed)
    for f in fs.families:
        assert f.locus.dim == f.maslov // 2 + 1
        assert f.maslov in (0, 2)
        if f.maslov == 0:
            assert f.stats.marks


@pytest.mark.parametrize("rays,n,seed", [(P2_RAYS, 2, 8), (F1_RAYS, 2, 9), (F1_RAYS, 3, 10)])
def test_potential_constant_off_walls(rays, n, seed):
    fan = Fan(rays)
    pts, fs = random_config(fan, n, seed)
    rng = random.Random(seed)
    hv = PotentialElement.hori_vafa(fan)
    done = 0
    while done < 15:
        q = (rat(rng, 8), rat(rng, 8))
        q2 = (q[0] + Fraction(rng.randint(-999, 999), 997), q[1] + Fraction(rng.randint(-999, 999), 997))
        try:
            w1, w2 = potential_at(fs, q), potential_at(fs, q2)
            crossed = any(segment_crossings(q, q2, w.locus) for w in fs.walls)
        except (NonGenericQuery, NonGenericPath):
            continue
        if not crossed:
            assert w1 == w2
        assert w1.without_marks() == hv
        done += 1


def test_oracle_matches_small_case():
    pts, fs = random_config(P2, 1, 3)
    for q in generic_queries(fs, random.Random(3), 5):
        assert potential_at(fs, q) == brute_force_potential(P2, pts, q)


def test_parallel_matches_serial():
    pts, fs = random_config(F1, 2, 12)
    assert enumerate_families(F1, pts, workers=2).dumps() == fs.dumps()
