"""Decision procedures with certificates.

Three questions about a descriptor G:

* is G connected in its Markov-Zariski topology, i.e. is every mG either
  trivial or infinite (:func:`zariski_connected`);
* does G admit a minimally almost periodic group topology
  (:func:`minap_admissible`);
* is a designated subgroup H a potential von Neumann kernel of G
  (:func:`pvn_test`).

Every :class:`Verdict` carries the datum that justifies it and a route of
tags from the closed :class:`Route` enumeration.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

from sympy import divisors, factorint

from .cardinal import Cardinal
from .descriptor import (
    GroupDescriptor,
    SubgroupDesignator,
    cardinality,
    cyclic_exponent,
    essential_order,
    exponent_of,
    multiply,
    realize_designator,
    ulm_kaplansky,
)


class Route(str, enum.Enum):
    """Closed set of result tags; each names the fact a step relies on."""

    UNBOUNDED_MINAP = "unbounded-groups-admit-minap"
    MARKOV_CRITERION = "mG-trivial-or-infinite"
    GCD_REDUCTION = "mG-equals-gcd(m,exp)G"
    LEADING_INVARIANTS = "leading-ulm-kaplansky-infinite"
    MINAP_IFF_CONNECTED = "minap-iff-zariski-connected"
    FINITE_INDEX_OBSTRUCTION = "closed-subgroup-of-finite-index"
    ESSENTIAL_ORDER = "zariski-component-is-G[eo]"
    PVN_IFF_COMPONENT = "pvn-iff-inside-zariski-component"
    PVN_BOUNDED_EXPONENT = "pvn-bounded:exp(H)-divides-eo(G)"
    PVN_CONTAINS_ZK_OMEGA = "pvn-bounded:G-contains-Z(k)^w"
    PVN_UNBOUNDED_PARENT = "pvn-subgroup-of-unbounded-group"
    PVN_OPEN_MINAP_SUBGROUP = "pvn-open-minap-subgroup"
    TRIVIAL_GROUP = "trivial-group"
    # construction-plan nodes
    NICE_DENSE = "NiceDense"
    HMT_DENSE = "HMTDense"
    HMT_POWER = "HMTDense-power"
    NIENHUYS = "Nienhuys"
    WSPLIT = "WSplit"
    PRODUCT = "ProductOfPlans"


@dataclass(frozen=True)
class WitnessM:
    """|mG| is finite and > 1, so G[m] is a proper closed subgroup of finite index."""

    m: int
    card: Cardinal


@dataclass(frozen=True)
class WitnessUnbounded:
    pass


@dataclass(frozen=True)
class WitnessLeadingUK:
    p: int
    i: int
    value: Cardinal


@dataclass(frozen=True)
class WitnessDecomposition:
    summands: tuple[str, ...]


@dataclass(frozen=True)
class WitnessContainment:
    eo: int
    exp_h: int


Witness = Union[WitnessM, WitnessUnbounded, WitnessLeadingUK, WitnessDecomposition, WitnessContainment]


@dataclass(frozen=True)
class Verdict:
    answer: bool
    route: tuple[Route, ...]
    witness: Witness

    def __post_init__(self) -> None:
        if not self.answer and not isinstance(self.witness, (WitnessM, WitnessLeadingUK, WitnessContainment)):
            raise ValueError("a negative verdict needs a refuting witness")

    def to_json(self) -> dict:
        return {"answer": self.answer, "route": [r.value for r in self.route], "witness": witness_to_json(self.witness)}


def witness_to_json(w: Witness) -> dict:
    if isinstance(w, WitnessM):
        return {"kind": "m", "m": w.m, "card": str(w.card)}
    if isinstance(w, WitnessUnbounded):
        return {"kind": "unbounded"}
    if isinstance(w, WitnessLeadingUK):
        return {"kind": "leading-uk", "p": w.p, "i": w.i, "value": str(w.value)}
    if isinstance(w, WitnessDecomposition):
        return {"kind": "decomposition", "summands": list(w.summands)}
    if isinstance(w, WitnessContainment):
        return {"kind": "containment", "eo": w.eo, "exp_h": w.exp_h}
    raise TypeError(w)


def _nice_witness(G: GroupDescriptor) -> WitnessDecomposition:
    from .decompose import nice_decomposition

    return WitnessDecomposition(tuple(str(n) for n in nice_decomposition(G)))


def zariski_connected(G: GroupDescriptor) -> Verdict:
    """Every mG trivial or infinite; only divisors of the cyclic exponent need checking."""
    if not G.is_bounded:
        return Verdict(True, (Route.MARKOV_CRITERION,), WitnessUnbounded())
    for m in divisors(cyclic_exponent(G)):
        size = cardinality(multiply(G, m))
        if size.is_finite and size.n > 1:
            return Verdict(
                False,
                (Route.FINITE_INDEX_OBSTRUCTION, Route.MARKOV_CRITERION, Route.GCD_REDUCTION),
                WitnessM(m, size),
            )
    if G.is_trivial:
        return Verdict(True, (Route.MARKOV_CRITERION, Route.TRIVIAL_GROUP), WitnessDecomposition(()))
    return Verdict(True, (Route.MARKOV_CRITERION, Route.GCD_REDUCTION), _nice_witness(G))


def leading_invariant_criterion(G: GroupDescriptor) -> bool:
    """Bounded G: every nonzero leading Ulm-Kaplansky invariant is infinite."""
    uk = ulm_kaplansky(G)
    return all(k.is_infinite for _, k in uk.leading.values())


def minap_admissible(G: GroupDescriptor) -> Verdict:
    if not G.is_bounded:
        v = Verdict(True, (Route.UNBOUNDED_MINAP, Route.MINAP_IFF_CONNECTED), WitnessUnbounded())
    elif G.is_trivial:
        v = Verdict(True, (Route.TRIVIAL_GROUP,), WitnessDecomposition(()))
    else:
        uk = ulm_kaplansky(G)
        v = None
        for p in uk.primes:
            i, k = uk.leading[p]
            if k.is_finite:
                v = Verdict(
                    False,
                    (Route.LEADING_INVARIANTS, Route.MINAP_IFF_CONNECTED),
                    WitnessLeadingUK(p, i, k),
                )
                break
        if v is None:
            v = Verdict(True, (Route.LEADING_INVARIANTS, Route.MINAP_IFF_CONNECTED), _nice_witness(G))
    if v.answer != zariski_connected(G).answer:
        raise AssertionError(f"criteria disagree on {G}")
    return v


def contains_zk_omega(G: GroupDescriptor, k: int) -> bool:
    """Bounded G contains Z(k)^(w): for every q^j || k, levels >= j carry infinite mass."""
    uk = ulm_kaplansky(G)
    for q, j in factorint(k).items():
        if not any(kk.is_infinite for (p, i), kk in uk.table.items() if p == q and i >= j):
            return False
    return True


def pvn_test(G: GroupDescriptor, H: SubgroupDesignator) -> Verdict:
    """Is H a potential von Neumann kernel of G, i.e. is H inside G[eo(G)]?"""
    if H.parent != G:
        raise ValueError("designator belongs to a different group")
    sub = realize_designator(H)
    exp_h = exponent_of(sub)
    if not G.is_bounded:
        routes = (Route.PVN_IFF_COMPONENT,)
        routes += (Route.PVN_UNBOUNDED_PARENT,) if sub.is_bounded else (Route.PVN_OPEN_MINAP_SUBGROUP, Route.UNBOUNDED_MINAP)
        return Verdict(True, routes, WitnessContainment(0, exp_h))
    m = essential_order(G)
    answer = m % exp_h == 0
    if answer != contains_zk_omega(G, exp_h):
        raise AssertionError(f"exp(H) | eo(G) and Z(k)^w-containment disagree on {G}")
    return Verdict(
        answer,
        (Route.PVN_IFF_COMPONENT, Route.ESSENTIAL_ORDER, Route.PVN_BOUNDED_EXPONENT, Route.PVN_CONTAINS_ZK_OMEGA),
        WitnessContainment(m, exp_h),
    )


def finite_index_kernels(G: GroupDescriptor) -> list[tuple[int, Cardinal]]:
    """Divisors m of the cyclic exponent with G[m] of finite index |mG|, ascending."""
    if not G.is_bounded:
        return []
    out = []
    for m in divisors(cyclic_exponent(G)):
        size = cardinality(multiply(G, m))
        if size.is_finite:
            out.append((m, size))
    return out
