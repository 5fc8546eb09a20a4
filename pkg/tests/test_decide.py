import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minap.cardinal import finite
from minap.decide import (
    Route,
    Verdict,
    WitnessContainment,
    WitnessDecomposition,
    WitnessLeadingUK,
    WitnessM,
    WitnessUnbounded,
    contains_zk_omega,
    finite_index_kernels,
    leading_invariant_criterion,
    minap_admissible,
    pvn_test,
    zariski_connected,
)
from minap.descriptor import (
    SubgroupDesignator,
    cardinality,
    essential_order,
    exponent_of,
    kernel_designator,
    multiply,
    realize_designator,
)
from minap.sampling import random_descriptors
from minap.textio import parse_descriptor as P
from minap.textio import parse_designator

from strategies import descriptors


def test_z2_plus_z3c():
    G = P("Z(2) + Z(3)^c")
    v = zariski_connected(G)
    assert not v.answer and v.witness == WitnessM(3, finite(2))
    m = minap_admissible(G)
    assert not m.answer and m.witness == WitnessLeadingUK(2, 1, finite(1))
    assert Route.MINAP_IFF_CONNECTED in m.route


def test_finite_top_invariant():
    G = P("Z(2)^w + Z(2)^w + Z(4)")
    v = minap_admissible(G)
    assert not v.answer and v.witness == WitnessLeadingUK(2, 2, finite(1))
    H = kernel_designator(G, 2)
    sub = realize_designator(H)
    assert sub == P("Z(2)^w")
    assert minap_admissible(sub).answer
    assert pvn_test(G, H).answer


def test_unbounded_and_trivial():
    for text in ("Z", "Q", "Z(2^inf)", "Tower(3) + Z(3)"):
        v = minap_admissible(P(text))
        assert v.answer and v.witness == WitnessUnbounded()
    assert minap_admissible(P("0")).answer
    assert zariski_connected(P("0")).witness == WitnessDecomposition(())


def test_connected_bounded_carries_nice_decomposition():
    v = zariski_connected(P("Z(2)^w + Z(4)^w + Z(3)^c"))
    assert v.answer
    assert v.witness == WitnessDecomposition(("Z(4)^w", "Z(2)^w", "Z(3)^c"))


def test_negative_verdict_requires_refutation():
    with pytest.raises(ValueError):
        Verdict(False, (), WitnessUnbounded())


def test_verdict_json():
    j = zariski_connected(P("Z(2) + Z(3)^c")).to_json()
    assert j == {
        "answer": False,
        "route": ["closed-subgroup-of-finite-index", "mG-trivial-or-infinite", "mG-equals-gcd(m,exp)G"],
        "witness": {"kind": "m", "m": 3, "card": "2"},
    }


def test_pvn_examples():
    G = P("Z(2) + Z(3)^c")
    assert pvn_test(G, parse_designator(G, "G[3]")).answer
    assert not pvn_test(G, parse_designator(G, "full")).answer
    assert pvn_test(P("Z"), parse_designator(P("Z"), "full")).answer
    assert pvn_test(P("Z + Z(2)"), parse_designator(P("Z + Z(2)"), "0:Z(2)")).witness == WitnessContainment(0, 2)
    with pytest.raises(ValueError):
        pvn_test(P("Z(2)"), SubgroupDesignator.full(P("Z(3)")))


def test_finite_index_kernels():
    assert finite_index_kernels(P("Z(2) + Z(3)^c")) == [(3, finite(2)), (6, finite(1))]
    assert finite_index_kernels(P("Z")) == []


def test_contains_zk_omega():
    G = P("Z(2)^w + Z(9)^c + Z(5)")
    assert contains_zk_omega(G, 18) and contains_zk_omega(G, 2)
    assert not contains_zk_omega(G, 4) and not contains_zk_omega(G, 5)


def test_equivalence_sweep():
    for G in random_descriptors(101, 300):
        z, m = zariski_connected(G), minap_admissible(G)
        assert z.answer == m.answer
        if G.is_bounded and not G.is_trivial:
            assert leading_invariant_criterion(G) == m.answer


@given(descriptors())
def test_full_designator_pvn_iff_minap(G):
    assert pvn_test(G, SubgroupDesignator.full(G)).answer == minap_admissible(G).answer


@given(descriptors(bounded=True))
def test_negative_witness_refutes(G):
    v = zariski_connected(G)
    if not v.answer:
        size = cardinality(multiply(G, v.witness.m))
        assert size == v.witness.card and size.is_finite and size.n > 1


@settings(max_examples=60)
@given(descriptors(bounded=True), st.integers(1, 36))
def test_pvn_of_kernels(G, m):
    H = kernel_designator(G, m)
    exp_h = exponent_of(realize_designator(H))
    assert pvn_test(G, H).answer == (essential_order(G) % exp_h == 0)


def test_eo_kernel_is_always_pvn():
    for G in random_descriptors(5, 150, bounded=True):
        assert pvn_test(G, kernel_designator(G, essential_order(G))).answer
