import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import P2_RAYS, F1_RAYS, random_config
from tropdisks.geom2d import det2
from tropdisks.ringalg import Fan
from tropdisks.trees import (
    ForbiddenJoin,
    Join,
    Leaf,
    Mark,
    MarkCollision,
    make_join,
    parse_tree,
    stats,
)

P2 = Fan(P2_RAYS)
a, b, c = Leaf(0), Leaf(1), Leaf(2)


def test_leaf_mark_join():
    st_ = stats(P2, make_join(a, Mark(1)))
    assert (st_.k, st_.d, st_.maslov, st_.mult, st_.mbar, st_.k_div) == (1, 1, 0, 1, (1, 0), 1)


def test_forbidden_joins():
    with pytest.raises(ForbiddenJoin):
        make_join(a, b)
    with pytest.raises(ForbiddenJoin):
        make_join(Mark(1), Mark(2))
    with pytest.raises(MarkCollision):
        make_join(make_join(a, Mark(1)), Mark(1))


def test_two_leaf_disk():
    t = make_join(b, make_join(a, Mark(1)))
    s = stats(P2, t)
    assert (s.k, s.d, s.maslov, s.mult, s.mbar, s.k_div) == (2, 1, 2, 1, (1, 1), 1)
    assert s.m == (1, 1, 0) and s.marks == {1}


def test_parallel_children_have_zero_mult():
    assert stats(P2, make_join(a, make_join(a, Mark(1)))).mult == 0


def test_divisibility():
    # mbar = (2, 0)
    assert stats(P2, make_join(a, make_join(a, Mark(1)))).k_div == 2
    # a + b + c has mbar 0
    t = make_join(c, make_join(b, make_join(a, Mark(1))))
    assert stats(P2, t).mbar == (0, 0) and stats(P2, t).k_div == 0


def test_canonical_encoding():
    t = make_join(b, make_join(a, Mark(1)))
    assert t.code == "J(L:b, J(L:a, M:1))"
    assert make_join(make_join(Mark(1), a), b).code == t.code
    assert parse_tree(t.code) == t
    with pytest.raises(ValueError):
        parse_tree("J(L:a, L:b)")


# random trees built by legal joins


@st.composite
def trees(draw, fan_rays=P2_RAYS, marks=3):
    fan = Fan(fan_rays)
    pool = [Leaf(i) for i in range(len(fan))] + [Mark(i) for i in range(1, marks + 1)]
    steps = draw(st.integers(1, 5))
    t = draw(st.sampled_from(pool))
    for _ in range(steps):
        other = draw(st.sampled_from(pool))
        if draw(st.booleans()):
            other = draw(st.sampled_from(pool))
        try:
            t = make_join(t, other)
        except (ForbiddenJoin, MarkCollision):
            continue
    return fan, t


def _joins(t):
    if isinstance(t, Join):
        yield t
        yield from _joins(t.left)
        yield from _joins(t.right)


@settings(max_examples=200, deadline=None)
@given(trees())
def test_balancing(ft):
    fan, t = ft
    for j in _joins(t):
        s, s1, s2 = stats(fan, j), stats(fan, j.left), stats(fan, j.right)
        assert s.mbar == (s1.mbar[0] + s2.mbar[0], s1.mbar[1] + s2.mbar[1])


@settings(max_examples=200, deadline=None)
@given(trees())
def test_join_order_irrelevant(ft):
    fan, t = ft
    if isinstance(t, Join):
        assert make_join(t.right, t.left).code == t.code
        assert parse_tree(t.code) == t


@settings(max_examples=200, deadline=None)
@given(trees(fan_rays=F1_RAYS))
def test_zero_mult_iff_parallel_join(ft):
    fan, t = ft
    parallel = any(
        not isinstance(j.left, Mark) and not isinstance(j.right, Mark)
        and det2(stats(fan, j.left).mbar, stats(fan, j.right).mbar) == 0
        for j in _joins(t)
    )
    assert (stats(fan, t).mult == 0) == parallel


@pytest.mark.parametrize("rays,n,seed", [(P2_RAYS, 2, 1), (P2_RAYS, 3, 2), (F1_RAYS, 3, 3)])
def test_enumerated_tree_counts(rays, n, seed):
    _, fs = random_config(Fan(rays), n, seed)
    for f in fs.families:
        s = f.stats
        assert s.d <= n
        if s.maslov == 2:
            assert s.k == s.d + 1 <= n + 1
        else:
            assert s.maslov == 0 and s.k == s.d <= n
