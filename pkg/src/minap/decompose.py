"""Constructive decompositions and MinAP construction plans.

* :func:`nice_decomposition` splits a bounded group whose leading invariants
  are infinite into nice p-groups (top level infinite, lower levels finite).
* :func:`w_split` splits an unbounded G as N + H with N bounded and all its
  nonzero invariants infinite, and H w-divisible.
* :func:`minap_plan` assembles these into a tree whose leaves name the dense
  embedding that realizes a MinAP topology on each summand.

The split rule of :func:`w_split` puts a cyclic atom into H exactly when its
multiplicity is at most w = wWeight(G).  Correctness: the non-cyclic atoms
keep their size under every multiplication map, hence w equals the size of
the non-cyclic part (which is infinite).  Every cyclic atom left in H then
has size <= w, so |H| = w, and mH still contains the whole non-cyclic part,
so |mH| = w = |H|.  The atoms moved to N have multiplicity > w >= aleph_0.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import cardinal as card
from .cardinal import ALEPH0, Cardinal, Ordering, UnknownCardinal
from .decide import Route, Verdict, minap_admissible
from .descriptor import (
    Cyclic,
    DescriptorError,
    GroupDescriptor,
    PrimeSum,
    Pruefer,
    Tower,
    Unbounded,
    cardinality,
    format_atom,
    free_rank,
    ulm_kaplansky,
    w_weight,
)


class NotBounded(Unbounded):
    pass


class LeadingInvariantFinite(DescriptorError):
    def __init__(self, p: int):
        self.p = p
        super().__init__(f"leading Ulm-Kaplansky invariant at p={p} is finite")


class BoundedInput(DescriptorError):
    pass


class NotTorsionUnbounded(DescriptorError):
    pass


@dataclass(frozen=True)
class NiceGroup:
    """Z(p)^(a_1) + ... + Z(p^n)^(a_n) with a_n infinite and a_1..a_{n-1} finite."""

    p: int
    top: int
    top_mult: Cardinal
    lower: tuple[tuple[int, Cardinal], ...] = ()

    def __post_init__(self) -> None:
        if not self.top_mult.is_infinite:
            raise ValueError("a nice group has an infinite top multiplicity")
        for i, k in self.lower:
            if not 1 <= i < self.top or not k.is_finite:
                raise ValueError("lower levels of a nice group are finite and below the top")

    def descriptor(self) -> GroupDescriptor:
        return GroupDescriptor.of(
            [(Cyclic(self.p, i), k) for i, k in self.lower] + [(Cyclic(self.p, self.top), self.top_mult)]
        )

    def __str__(self) -> str:
        return str(self.descriptor())


def is_nice(G: GroupDescriptor) -> bool:
    if G.is_trivial or not G.is_bounded:
        return False
    primes = {a.p for a, _ in G.atoms}
    if len(primes) != 1:
        return False
    top_atom, top_mult = max(G.atoms, key=lambda am: am[0].i)
    return top_mult.is_infinite and all(k.is_finite for a, k in G.atoms if a != top_atom)


def nice_decomposition(G: GroupDescriptor) -> list[NiceGroup]:
    if not G.is_bounded:
        raise NotBounded(f"{G} is unbounded")
    uk = ulm_kaplansky(G)
    out: list[NiceGroup] = []
    for p in uk.primes:
        levels = sorted(((i, k) for (q, i), k in uk.table.items() if q == p), reverse=True)
        if levels[0][1].is_finite:
            raise LeadingInvariantFinite(p)
        top: tuple[int, Cardinal] | None = None
        lower: list[tuple[int, Cardinal]] = []
        for i, k in levels:
            if k.is_infinite:
                if top is not None:
                    out.append(NiceGroup(p, top[0], top[1], tuple(sorted(lower))))
                top, lower = (i, k), []
            else:
                lower.append((i, k))
        out.append(NiceGroup(p, top[0], top[1], tuple(sorted(lower))))
    return out


def w_split(G: GroupDescriptor) -> tuple[GroupDescriptor, GroupDescriptor]:
    """(N, H) with G = N + H, N bounded with infinite nonzero invariants, H w-divisible."""
    if G.is_bounded:
        raise BoundedInput(f"{G} is bounded; the w-divisible split needs an unbounded group")
    w = w_weight(G)
    n_part, h_part = [], []
    for a, k in G.atoms:
        if not isinstance(a, Cyclic):
            h_part.append((a, k))
            continue
        o = card.compare(k, w)
        if o is Ordering.UNKNOWN:
            raise UnknownCardinal(f"cannot place {a} with multiplicity {k} against w-weight {w}")
        (n_part if o is Ordering.GREATER else h_part).append((a, k))
    return GroupDescriptor.of(n_part), GroupDescriptor.of(h_part)


def classify_unbounded_torsion(G: GroupDescriptor) -> tuple[str, object]:
    """Which of the three basic unbounded torsion shapes G contains: (i), (ii) or (iii)."""
    if not G.is_torsion or G.is_bounded:
        raise NotTorsionUnbounded(f"{G} is not an unbounded torsion group")
    for case, kind in (("i", Pruefer), ("ii", Tower), ("iii", PrimeSum)):
        for a, _ in G.atoms:
            if isinstance(a, kind):
                return case, a
    raise AssertionError("unbounded torsion descriptor without an unbounded atom")


# ---------------------------------------------------------------- plans

NIENHUYS_ALGEBRA = "Ni = c_0(T) = Q^(c) + (Q/Z)^(w) (algebraically)"


@dataclass(frozen=True)
class PlanNode:
    route: Route
    descriptor: GroupDescriptor
    children: tuple[PlanNode, ...] = ()
    note: str = ""

    def leaves(self) -> list[PlanNode]:
        if not self.children:
            return [self]
        return [leaf for c in self.children for leaf in c.leaves()]

    def to_json(self) -> dict:
        d = {"route": self.route.value, "descriptor": str(self.descriptor)}
        if self.note:
            d["note"] = self.note
        if self.children:
            d["children"] = [c.to_json() for c in self.children]
        return d

    def render(self, indent: int = 0) -> str:
        pad = "  " * indent
        line = f"{pad}{self.route.value}: {self.descriptor}"
        if self.note:
            line += f"  [{self.note}]"
        return "\n".join([line] + [c.render(indent + 1) for c in self.children])


def _bounded_plan(G: GroupDescriptor) -> PlanNode:
    leaves = tuple(
        PlanNode(Route.NICE_DENSE, n.descriptor(), note="dense copy of Z(p^n)^(a) in HM(Z(p^n)); finite part sent to a complementary H(G,T)")
        for n in nice_decomposition(G)
    )
    if len(leaves) == 1:
        return leaves[0]
    return PlanNode(Route.PRODUCT, G, leaves)


def _wdivisible_plan(H: GroupDescriptor) -> PlanNode:
    size = cardinality(H)
    if size != ALEPH0:
        return PlanNode(Route.HMT_POWER, H, note="dense in HM(T)^|H| (documented route, no step-function realization)")
    torsion = H.torsion_part()
    rank = free_rank(H)
    if not torsion.is_bounded:
        case, atom = classify_unbounded_torsion(torsion)
        builder = "prufer-chain" if case == "i" else "cyclic-sum-chain"
        return PlanNode(Route.HMT_DENSE, H, note=f"torsion case ({case}) via {format_atom(atom)}; builder {builder}; extend over the rest")
    if rank.is_infinite:
        return PlanNode(Route.HMT_DENSE, H, note="infinite rank: H(<sqrt2>, S) generators; extend over the rest")
    return PlanNode(Route.NIENHUYS, H, note=f"finite nonzero rank; monothetic target, {NIENHUYS_ALGEBRA}")


def minap_plan(G: GroupDescriptor) -> PlanNode | Verdict:
    """A construction plan, or the refusing verdict when G admits no MinAP topology."""
    verdict = minap_admissible(G)
    if not verdict.answer:
        return verdict
    if G.is_trivial:
        return PlanNode(Route.PRODUCT, G, note="trivial group")
    if G.is_bounded:
        return _bounded_plan(G)
    N, H = w_split(G)
    h_plan = _wdivisible_plan(H)
    if N.is_trivial:
        return h_plan
    return PlanNode(Route.WSPLIT, G, (_bounded_plan(N), h_plan))


def plan_leaves_sum(plan: PlanNode) -> GroupDescriptor:
    return GroupDescriptor.of(pair for leaf in plan.leaves() for pair in leaf.descriptor.atoms)

