import random
from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from minap.qtorus import (
    INFINITE_ORDER,
    SQRT2,
    ZERO,
    Arc,
    NoRootInArc,
    ThresholdNotMet,
    TorusPoint,
    add,
    floor,
    format_point,
    kth_roots,
    order_of,
    parse_point,
    root_in_arc,
    root_threshold,
    scale,
    sign,
)

import oracles
from strategies import fractions01, points

small_q = st.fractions(min_value=-50, max_value=50, max_denominator=1000)


def R(q):
    return TorusPoint(F(q))


def test_group_op_examples():
    assert add(R("1/2"), R("1/2")) == ZERO
    assert order_of(R("3/8")) == 8
    assert order_of(TorusPoint(F(-1), F(1))) == INFINITE_ORDER
    assert order_of(ZERO) == 1


def test_reduction():
    assert TorusPoint(F(7, 3)) == R("1/3")
    assert TorusPoint(F(-1, 4)) == R("3/4")
    p = TorusPoint(F(5), F(1))  # 5 + sqrt2 reduces to sqrt2 - 1
    assert p == TorusPoint(F(-1), F(1))
    assert p.a == -1 and p.b == 1


def test_threshold_examples():
    assert root_threshold(F(1, 2)) == 6
    assert root_threshold(1) == 3
    assert root_threshold(F(1, 4)) == 12
    assert root_threshold(F(2, 7)) == 11
    with pytest.raises(ValueError):
        root_threshold(0)


def test_root_in_arc_examples():
    assert root_in_arc(Arc(R("1/4"), F(1, 2)), ZERO, 6) == R("1/3")
    # below the threshold of a length 1/4 arc, found by search
    assert root_in_arc(Arc(R("7/8"), F(1, 4)), R("1/2"), 8, enforce_threshold=False) == R("15/16")
    with pytest.raises(ThresholdNotMet) as info:
        root_in_arc(Arc(R("7/8"), F(1, 4)), R("1/2"), 8)
    assert (info.value.k, info.value.j) == (8, 12)
    y = root_in_arc(Arc(ZERO, 1), R("2/7"), 3)
    assert not y.is_zero and y * 3 == R("2/7")


def test_no_root_when_arc_too_small():
    with pytest.raises(NoRootInArc):
        root_in_arc(Arc(R("1/10"), F(1, 20)), ZERO, 2, enforce_threshold=False)


def test_anchor_center_breaks_ties_counter_clockwise():
    A = Arc.centered(ZERO, F(1, 2))
    assert root_in_arc(A, ZERO, 6, anchor="center") == R("1/6")
    assert root_in_arc(A, ZERO, 6, anchor="center", primitive=True) == R("1/6")
    assert root_in_arc(A, ZERO, 12, anchor="center", primitive=True) == R("1/12")
    with pytest.raises(ValueError):
        root_in_arc(A, ZERO, 6, anchor="middle")


def test_primitive_preference():
    A = Arc(ZERO, F(1, 2))  # open (0, 1/2): sixth roots of 0 are 1/6 and 1/3
    assert root_in_arc(A, ZERO, 6, anchor="start") == R("1/6")
    assert root_in_arc(Arc(R("1/4"), F(5, 8)), ZERO, 6) == R("1/3")
    assert root_in_arc(Arc(R("1/4"), F(5, 8)), ZERO, 6, primitive=True) == R("5/6")
    # no root of order 6 in (1/4, 3/4): fall back to any root
    assert root_in_arc(Arc(R("1/4"), F(1, 2)), ZERO, 6, primitive=True) == R("1/3")


def test_arc_membership_is_open():
    A = Arc(R("1/4"), F(1, 2))
    assert R("1/4") not in A and R("3/4") not in A and R("1/2") in A
    wrap = Arc(R("7/8"), F(1, 4))
    assert ZERO in wrap and R("1/16") in wrap and R("1/8") not in wrap
    assert Arc(ZERO, 1).center == R("1/2")
    with pytest.raises(ValueError):
        Arc(ZERO, F(3, 2))


@given(small_q, small_q)
def test_sign_matches_sympy(a, b):
    expected = sympy.sign(sympy.Rational(a.numerator, a.denominator) + sympy.Rational(b.numerator, b.denominator) * sympy.sqrt(2))
    assert sign(a, b) == int(expected)


@given(small_q, small_q)
def test_floor_matches_sympy(a, b):
    value = sympy.Rational(a.numerator, a.denominator) + sympy.Rational(b.numerator, b.denominator) * sympy.sqrt(2)
    assert floor(a, b) == int(sympy.floor(value))


def test_sign_near_cancellation():
    # convergents p/q of sqrt2 make p - q*sqrt2 tiny
    p, q = 1, 1
    for _ in range(40):
        p, q = p + 2 * q, p + q
        assert sign(F(p), F(-q)) == (1 if p * p > 2 * q * q else -1)
        assert floor(F(p), F(-q)) == (0 if p * p > 2 * q * q else -1)


@given(points, points, points)
def test_group_laws(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x
    assert x + ZERO == x and x - x == ZERO
    assert -(-x) == x


@given(points, st.integers(-20, 20), st.integers(-20, 20))
def test_scaling_distributes(x, m, n):
    assert scale(m + n, x) == scale(m, x) + scale(n, x)
    assert scale(m * n, x) == scale(m, scale(n, x))


@given(points)
def test_reduced_range(x):
    assert sign(x.a, x.b) >= 0 and sign(x.a - 1, x.b) < 0


@given(fractions01)
def test_rational_order(q):
    x = TorusPoint(q)
    n = x.order()
    assert scale(n, x) == ZERO
    assert all(not scale(d, x).is_zero for d in range(1, n))


@given(points, st.integers(1, 30))
def test_kth_roots(x, k):
    roots = kth_roots(x, k)
    assert len(set(roots)) == k and all(r * k == x for r in roots)


@given(points)
def test_format_parse_round_trip(x):
    assert parse_point(format_point(x)) == x


def test_parse_point_forms():
    assert parse_point("sqrt2") == SQRT2
    assert parse_point("-1+sqrt2") == SQRT2
    assert parse_point("1/2 - 3/4*sqrt2") == TorusPoint(F(1, 2), F(-3, 4))
    assert parse_point("-sqrt2") == -SQRT2
    assert format_point(TorusPoint(F(4, 3), F(-1, 2))).endswith("- 1/2*sqrt2")
    with pytest.raises(ValueError):
        parse_point("sqrt2 + 1")


def test_root_soundness_randomized():
    rng = random.Random(99)
    for _ in range(300):
        length = F(rng.randint(1, 16), 16)
        A = Arc(TorusPoint(F(rng.randint(0, 63), 64), F(rng.randint(-3, 3), rng.randint(1, 5))), length)
        x = TorusPoint(F(rng.randint(0, 23), 24), F(rng.choice([0, 0, 1, -2]), rng.randint(1, 7)))
        k = rng.randint(root_threshold(length), 4 * root_threshold(length))
        anchor = rng.choice(["start", "center"])
        y = root_in_arc(A, x, k, anchor=anchor)
        assert y * k == x and y in A and not y.is_zero


def test_start_anchor_matches_rational_oracle():
    for q in range(1, 17):
        for a in range(q):
            start, length = F(a, q), F(1, 2)
            for k in range(6, 13):
                for xn in range(0, 12):
                    x = F(xn, 12)
                    pre = [y for y in oracles.preimages_in_open_arc(start, length, x, k) if y != 0]
                    best = min(pre, key=lambda y: (y - start) % 1)
                    assert root_in_arc(Arc(R(start), length), R(x), k) == R(best)


def test_sqrt2_multiples_visit_every_arc():
    budget = 10_000
    for q in (2, 3, 8, 17, 64):
        for a in range(q):
            A = Arc(R(F(a, q)), F(1, 64))
            x = ZERO
            for n in range(1, budget + 1):
                x = x + SQRT2
                if x in A:
                    break
            else:
                pytest.fail(f"no multiple of sqrt2 up to {budget} in {A}")
