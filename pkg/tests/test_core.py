from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ntop.core import (
    TOP,
    DepthExhausted,
    Point,
    begins_with,
    default_fuel,
    point_apart_from_dot,
    point_prefix_valid,
    points_apart_within,
    strictly_refines,
    touch,
)
from ntop.spaces import SIGMA_R, SIGMA_UNIT, Lean, from_rational, hull_at_depth

import oracles

rationals = st.fractions(min_value=-8, max_value=8, max_denominator=200)


def test_touch_examples():
    # [0,1] = D(0,1), [2,3] = D(4,1), [1,2] = D(2,1)
    assert not touch(SIGMA_R, Lean(0, 1), Lean(4, 1))
    assert touch(SIGMA_R, Lean(0, 1), Lean(2, 1))
    for d in (TOP, Lean(0, 0), Lean(-7, 5)):
        assert touch(SIGMA_R, d, d)


def test_strictly_refines():
    assert strictly_refines(SIGMA_UNIT, Lean(1, 2), Lean(0, 1))
    assert not strictly_refines(SIGMA_UNIT, Lean(1, 2), Lean(1, 2))
    assert not strictly_refines(SIGMA_R, TOP, Lean(0, 0))


def test_points_apart_zero_one():
    w = points_apart_within(from_rational(0), from_rational(1), 8)
    assert w is not None
    assert w.index == 2  # first depth where [0, 2^(1-k)] misses 1
    assert SIGMA_R.apart(w.left, w.right)


def test_points_apart_self_and_schedules():
    p = from_rational(Fraction(1, 3))
    assert points_apart_within(p, p, 50) is None
    q = from_rational(Fraction(1, 3), schedule=lambda k: 2 * k + 1)
    assert points_apart_within(p, q, 32) is None


@given(rationals, rationals)
@settings(max_examples=60, deadline=None)
def test_points_apart_symmetric_and_sound(x, y):
    p, q = from_rational(x), from_rational(y)
    a = points_apart_within(p, q, 16)
    b = points_apart_within(q, p, 16)
    assert (a is None) == (b is None)
    if a is not None:
        assert a.index == b.index
        assert x != y


def test_prefix_validity():
    assert point_prefix_valid(from_rational(Fraction(1, 2)), 16)
    assert not point_prefix_valid(Point(SIGMA_R, iter([Lean(0, 0)] * 3)), 2)
    assert point_prefix_valid(Point(SIGMA_R, iter([Lean(0, 0)] * 3)), 1)
    with pytest.raises(ValueError):
        point_prefix_valid(from_rational(0), 0)


@given(rationals)
@settings(max_examples=40, deadline=None)
def test_canonical_points_valid_to_64(q):
    p = from_rational(q)
    assert point_prefix_valid(p, 64)
    for k in (0, 5, 63):
        assert (p[k].n, p[k].m) == oracles.canonical_lean(q, k)
        lo, hi = oracles.lean(p[k].n, p[k].m)
        assert lo <= q <= hi


def test_begins_with():
    assert begins_with(from_rational(Fraction(1, 2)), Lean(0, 1), 8)
    assert begins_with(from_rational(5), TOP, 2)
    assert not begins_with(from_rational(2), Lean(0, 1), 64)


def test_point_apart_from_dot():
    w = point_apart_from_dot(from_rational(3), Lean(0, 1), 8)
    assert w is not None and SIGMA_R.apart(w.left, Lean(0, 1))
    assert point_apart_from_dot(from_rational(Fraction(1, 2)), Lean(0, 1), 16) is None


def test_point_cache_and_exhaustion():
    calls = []

    def source():
        for k in range(3):
            calls.append(k)
            yield hull_at_depth(0, 0, k)

    p = Point(SIGMA_R, source(), label="short")
    assert p[2] == Lean(0, 2)
    assert p[0] == Lean(0, 0)
    assert calls == [0, 1, 2]
    with pytest.raises(DepthExhausted):
        p[3]
    with pytest.raises(IndexError):
        p[-1]


def test_fuel_environment(monkeypatch):
    monkeypatch.delenv("NTOP_FUEL", raising=False)
    assert default_fuel() == 64
    monkeypatch.setenv("NTOP_FUEL", "7")
    assert default_fuel() == 7
    monkeypatch.setenv("NTOP_FUEL", "zero")
    with pytest.raises(ValueError):
        default_fuel()
