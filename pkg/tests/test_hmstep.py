import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from minap.qtorus import ZERO, Arc, ThresholdNotMet, TorusPoint
from minap.hmstep import (
    ZERO_FUNCTION,
    BasicNeighborhood,
    StepFunction,
    _canonical,
    divide_in_open_set,
    element_order,
    embed_at,
    evaluate,
    format_step,
    in_neighborhood,
    parse_step,
    step_from_json,
    step_to_json,
    sup_support,
    symmetric_arc,
    torsion_divide,
    violation_measure,
)

from strategies import points, step_functions

R = lambda q: TorusPoint(F(q))  # noqa: E731
steps = step_functions()
quad_steps = step_functions(values=points)
arc_lens = st.sampled_from([F(1, 8), F(1, 4), F(1, 3), F(1, 2), F(3, 4), F(1)])
epsilons = st.fractions(min_value=F(1, 100), max_value=1, max_denominator=100)


def test_add_example():
    f = StepFunction(((F(1, 3), R("1/2")),))
    g = StepFunction(((F(1, 2), R("1/2")),))
    assert format_step(f + g) == "1/3: 0; 1/2: 1/2"
    assert evaluate(f + g, F(1, 4)) == ZERO and evaluate(f + g, F(2, 5)) == R("1/2")


def test_embed_and_order_examples():
    assert embed_at(R("1/2"), 1) == StepFunction.constant(R("1/2"))
    f = parse_step("1/2: 1/4; 1: 1/3")
    assert element_order(f) == 12
    assert (f * 12).is_zero and not any((f * d).is_zero for d in range(1, 12))
    assert element_order(StepFunction.constant(TorusPoint(0, 1))) == 0
    assert element_order(ZERO_FUNCTION) == 1


def test_violation_examples():
    U = symmetric_arc(F(1, 4))
    assert violation_measure(parse_step("1/10: 1/4"), U) == F(1, 10)
    assert violation_measure(ZERO_FUNCTION, U) == 0
    g = StepFunction.constant(R("1/16"))
    assert violation_measure(g, U) == 0
    assert in_neighborhood(g, BasicNeighborhood(ZERO_FUNCTION, F(1, 4), F(1, 10**9)))
    with pytest.raises(ValueError):
        violation_measure(g, Arc(R("1/4"), F(1, 4)))


def test_divide_examples():
    V = BasicNeighborhood(ZERO_FUNCTION, F(1, 2), F(1, 2))
    j, h = divide_in_open_set(V, StepFunction.constant(R("1/2")), 6)
    assert j == 6 and h == StepFunction.constant(R("1/12"))
    assert divide_in_open_set(V, ZERO_FUNCTION, 6)[1] == StepFunction.constant(R("1/6"))
    with pytest.raises(ThresholdNotMet):
        divide_in_open_set(V, ZERO_FUNCTION, 2)


def test_torsion_divide_examples():
    V = BasicNeighborhood(ZERO_FUNCTION, F(1, 2), F(1, 4))
    h, s = torsion_divide(V, 6, F(1, 2))
    assert h == StepFunction(((F(7, 8), R("1/6")),)) and s == F(3, 4)
    h0, s0 = torsion_divide(V, 6, F(0))
    assert sup_support(h0) < 1 and (h0 * 6).is_zero and not evaluate(h0, s0).is_zero
    with pytest.raises(ThresholdNotMet):
        torsion_divide(V, 5, F(1, 2))
    with pytest.raises(ValueError):
        torsion_divide(V, 6, F(1))


def test_canonical_form_rules():
    f = StepFunction(((F(1, 4), R("1/2")), (F(1, 4), R("1/3")), (F(1, 2), R("1/2")), (F(1), ZERO)))
    assert f.pieces == ((F(1, 2), R("1/2")),)
    with pytest.raises(ValueError):
        StepFunction(((F(1, 2), R("1/2")), (F(1, 4), R("1/3"))))
    with pytest.raises(ValueError):
        StepFunction(((F(3, 2), R("1/2")),))
    assert evaluate(StepFunction.constant(R("1/2")), 1) == ZERO


def test_text_and_json_forms():
    f = parse_step("1/3: 1/2; 3/4: 1/5 + 1/3*sqrt2")
    assert parse_step(format_step(f)) == f
    assert step_from_json(step_to_json(f)) == f
    assert parse_step("0") == ZERO_FUNCTION and format_step(ZERO_FUNCTION) == "0"
    V = BasicNeighborhood(f, F(1, 3), F(1, 5))
    assert BasicNeighborhood.from_json(V.to_json()) == V
    with pytest.raises(ValueError):
        parse_step("1/3 1/2")
    with pytest.raises(ValueError):
        BasicNeighborhood(f, F(0), F(1))


@given(quad_steps)
def test_canonical_idempotent(f):
    assert StepFunction(_canonical(f.pieces)) == f
    assert StepFunction(f.pieces) == f


def test_group_laws_randomized():
    rng = random.Random(5)

    def rand_step():
        n = rng.randint(0, 5)
        bps = sorted({F(rng.randint(1, 32), 32) for _ in range(n)})
        return StepFunction(tuple((t, TorusPoint(F(rng.randint(0, 11), 12), F(rng.randint(-1, 1), 3))) for t in bps))

    for _ in range(1000):
        f, g, h = rand_step(), rand_step(), rand_step()
        assert (f + g) + h == f + (g + h)
        assert f + g == g + f
        assert f + (-f) == ZERO_FUNCTION
        assert f - g == f + (-g)


@given(quad_steps, st.sampled_from([F(1, 8), F(1, 4), F(1, 2), F(1)]))
def test_measure_additivity(f, length):
    U = symmetric_arc(length)
    inside = F(0)
    lo = F(0)
    for t in sorted(set(f.breakpoints) | {F(1)}):
        if evaluate(f, lo) in U:
            inside += t - lo
        lo = t
    assert violation_measure(f, U) + inside == 1


@given(quad_steps, arc_lens, epsilons)
def test_neighborhood_symmetry(f, length, eps):
    V = BasicNeighborhood(ZERO_FUNCTION, length, eps)
    assert in_neighborhood(f, V) == in_neighborhood(-f, V)


@given(steps, steps, st.sampled_from([F(1, 8), F(1, 4), F(1, 3)]), epsilons, epsilons)
def test_subadditivity(f, g, length, e1, e2):
    Ve1 = BasicNeighborhood(ZERO_FUNCTION, length, e1)
    Ve2 = BasicNeighborhood(ZERO_FUNCTION, length, e2)
    if f in Ve1 and f in Ve2 and g in Ve1 and g in Ve2:
        assert f + g in BasicNeighborhood(ZERO_FUNCTION, 2 * length, e1 + e2)


@given(quad_steps, steps, arc_lens, epsilons, st.integers(0, 30))
def test_divide_soundness(g, w, length, eps, extra):
    V = BasicNeighborhood(w, length, eps)
    k = V.threshold + extra
    j, h = divide_in_open_set(V, g, k)
    assert j == V.threshold and h * k == g and h in V


@given(steps, arc_lens, epsilons, st.fractions(min_value=0, max_value=F(99, 100), max_denominator=100), st.integers(0, 12))
def test_torsion_divide_soundness(w, length, eps, eta, extra):
    V = BasicNeighborhood(w, length, eps)
    k = V.threshold + extra
    h, s = torsion_divide(V, k, eta)
    assert (h * k).is_zero and s > eta and not evaluate(h, s).is_zero
    assert sup_support(h) < 1 and h in V
