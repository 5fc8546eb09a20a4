"""Countable base of HM(T) and inductive dense-subgroup builders.

Base enumeration
----------------
``enumerate_base(n)`` unpairs ``n - 1 = pi(c, pi(a, b))`` with the Cantor
pairing ``pi(x, y) = (x + y)(x + y + 1)/2 + y`` (a bijection N^2 -> N) and
returns ``centers[c] + O(U_{1/(a+2)}, 1/(b+2))``.  Centres are rational step
functions listed by height h: breakpoints on the grid (1/h)Z, values in
(1/h)Z/Z, new ones only, numerator tuples in lexicographic order.  Every
rational step function has a finite height, so the family is a base.

Chains
------
:func:`prufer_chain` divides ``g_0 = 1/p`` successively into V_1, V_2, ...
by powers of p.  :func:`cyclic_sum_chain` picks torsion elements of growing
support, one per base set, of orders taken from a given list.  Both return a
:class:`ChainTrace` whose records re-verify with the exact predicates of
:mod:`minap.hmstep`.
"""

from __future__ import annotations

import itertools
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import isqrt, prod
from typing import Sequence

from sympy import ZZ, Matrix
from sympy.matrices.normalforms import smith_normal_form

from .hmstep import (
    ZERO_FUNCTION,
    BasicNeighborhood,
    StepFunction,
    divide_in_open_set,
    element_order,
    embed_at,
    evaluate,
    in_neighborhood,
    step_from_json,
    step_to_json,
    sup_support,
    torsion_divide,
)
from .qtorus import INFINITE_ORDER, ZERO, TorusPoint, sign

INDEPENDENCE_ENUMERATION_BOUND = 10_000


class OrdersExhausted(ValueError):
    def __init__(self, step: int, threshold: int):
        self.step, self.threshold = step, threshold
        super().__init__(f"step {step}: no unused order >= threshold {threshold}")


# ------------------------------------------------------------------ base


def cantor_pair(x: int, y: int) -> int:
    return (x + y) * (x + y + 1) // 2 + y


def cantor_unpair(z: int) -> tuple[int, int]:
    w = (isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y, y


def _height_centers(h: int) -> list[StepFunction]:
    grid = [Fraction(i, h) for i in range(1, h + 1)]
    out = []
    for nums in itertools.product(range(h), repeat=h):
        f = StepFunction(tuple((t, TorusPoint(Fraction(v, h))) for t, v in zip(grid, nums)))
        if _height(f) == h:
            out.append(f)
    return out


def _height(f: StepFunction) -> int:
    h = 1
    for t, v in f.pieces:
        h = max(h, t.denominator, v.a.denominator)
    return h


@lru_cache(maxsize=None)
def _centers_upto(count: int) -> tuple[StepFunction, ...]:
    # Functions of height h whose grid is finer than their height are
    # rediscovered at larger h; _height_centers keeps only exact-height ones
    # and the seen-set drops the rest.
    seen: dict[StepFunction, None] = {}
    h = 1
    while len(seen) < count:
        for f in _height_centers(h):
            seen.setdefault(f, None)
        h += 1
    return tuple(seen)[:count]


def center(c: int) -> StepFunction:
    """The c-th rational centre (0-based)."""
    size = 1
    while size <= c:
        size *= 2
    return _centers_upto(size)[c]


def enumerate_base(n: int) -> BasicNeighborhood:
    if n < 1:
        raise ValueError("base sets are numbered from 1")
    c, ab = cantor_unpair(n - 1)
    a, b = cantor_unpair(ab)
    return BasicNeighborhood(center(c), Fraction(1, a + 2), Fraction(1, b + 2))


def base_sequence(N: int, base: Sequence[BasicNeighborhood] | None = None) -> list[BasicNeighborhood]:
    """V_1..V_N: ``base`` overrides a prefix of the standard enumeration."""
    given = list(base or ())
    return [given[n - 1] if n <= len(given) else enumerate_base(n) for n in range(1, N + 1)]


# ------------------------------------------------------------------ traces


@dataclass(frozen=True)
class StepRecord:
    n: int
    V: BasicNeighborhood
    divisor: int  # p^{i_n} or a_{i_n}
    index: int  # i_n: the exponent (Pruefer) or the position in the order list (cyclic sum)
    g: StepFunction
    witness: Fraction | None = None  # s with g(s) != 0, s > eta
    eta: Fraction | None = None

    def to_json(self) -> dict:
        d = {
            "n": self.n,
            "V": self.V.to_json(),
            "divisor": self.divisor,
            "index": self.index,
            "g": step_to_json(self.g),
        }
        if self.witness is not None:
            d["witness"] = str(self.witness)
            d["eta"] = str(self.eta)
        return d

    @classmethod
    def from_json(cls, d: dict) -> StepRecord:
        w = d.get("witness")
        return cls(
            d["n"],
            BasicNeighborhood.from_json(d["V"]),
            d["divisor"],
            d["index"],
            step_from_json(d["g"]),
            None if w is None else Fraction(w),
            None if w is None else Fraction(d["eta"]),
        )


@dataclass(frozen=True)
class ChainTrace:
    kind: str  # "prufer" | "cyclic-sum"
    params: dict
    g0: StepFunction
    steps: tuple[StepRecord, ...]
    checks: dict = field(default_factory=dict, compare=False)

    @property
    def generators(self) -> list[StepFunction]:
        return [r.g for r in self.steps]

    @property
    def neighborhoods(self) -> list[BasicNeighborhood]:
        return [r.V for r in self.steps]

    def verify(self) -> dict[str, bool]:
        """Re-check every recorded condition; returns name -> outcome."""
        if self.kind == "prufer":
            return _verify_prufer(self)
        if self.kind == "cyclic-sum":
            return _verify_cyclic_sum(self)
        raise ValueError(f"unknown chain kind {self.kind!r}")

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "params": self.params,
            "g0": step_to_json(self.g0),
            "steps": [r.to_json() for r in self.steps],
        }

    @classmethod
    def from_json(cls, d: dict) -> ChainTrace:
        return cls(d["kind"], d["params"], step_from_json(d["g0"]), tuple(StepRecord.from_json(r) for r in d["steps"]))


def replay(d: dict) -> ChainTrace:
    """Rebuild a trace from its own parameters and recorded neighborhoods."""
    t = ChainTrace.from_json(d)
    if t.kind == "prufer":
        return prufer_chain(t.params["p"], len(t.steps), base=t.neighborhoods)
    if t.kind == "cyclic-sum":
        return cyclic_sum_chain(t.params["orders"], len(t.steps), base=t.neighborhoods)
    raise ValueError(f"unknown chain kind {t.kind!r}")


# ------------------------------------------------------------------ Pruefer chain


def prufer_chain(p: int, N: int, base: Sequence[BasicNeighborhood] | None = None) -> ChainTrace:
    if N < 1:
        raise ValueError("N must be at least 1")
    g = embed_at(TorusPoint(Fraction(1, p)), 1)
    g0 = g
    steps = []
    for n, V in enumerate(base_sequence(N, base), start=1):
        i, k = 0, 1
        while k < V.threshold:
            i, k = i + 1, k * p
        _, g = divide_in_open_set(V, g, k)
        steps.append(StepRecord(n, V, k, i, g))
    return ChainTrace("prufer", {"p": p}, g0, tuple(steps))


def _verify_prufer(t: ChainTrace) -> dict[str, bool]:
    p = t.params["p"]
    prev = t.g0
    total = 1
    out = {"g0": t.g0 == embed_at(TorusPoint(Fraction(1, p)), 1)}
    for r in t.steps:
        total += r.index
        out[f"i_{r.n}"] = in_neighborhood(r.g, r.V)
        out[f"ii_{r.n}"] = r.divisor == p**r.index and r.g * r.divisor == prev
        out[f"order_{r.n}"] = element_order(r.g) == p**total
        prev = r.g
    return out


# ------------------------------------------------------------------ cyclic-sum chain


def cyclic_sum_chain(
    orders: Sequence[int], N: int, base: Sequence[BasicNeighborhood] | None = None
) -> ChainTrace:
    """N steps; step n uses the first order after the previously used one that
    meets the threshold of V_n.  Indices in the trace are 1-based."""
    if N < 1:
        raise ValueError("N must be at least 1")
    orders = [int(a) for a in orders]
    steps = []
    last = 0
    eta = Fraction(1, 2)
    for n, V in enumerate(base_sequence(N, base), start=1):
        j = V.threshold
        idx = next((i for i in range(last + 1, len(orders) + 1) if orders[i - 1] >= j), None)
        if idx is None:
            raise OrdersExhausted(n, j)
        k = orders[idx - 1]
        g, s = torsion_divide(V, k, eta)
        steps.append(StepRecord(n, V, k, idx, g, s, eta))
        last = idx
        eta = max(eta, sup_support(g))
    return ChainTrace("cyclic-sum", {"orders": orders}, ZERO_FUNCTION, tuple(steps))


def _verify_cyclic_sum(t: ChainTrace) -> dict[str, bool]:
    orders = t.params["orders"]
    out: dict[str, bool] = {}
    eta = Fraction(1, 2)
    last = 0
    gens: list[StepFunction] = []
    for r in t.steps:
        out[f"i_{r.n}"] = in_neighborhood(r.g, r.V) and sup_support(r.g) < 1
        out[f"ii_{r.n}"] = r.index > last and orders[r.index - 1] == r.divisor and (r.g * r.divisor).is_zero
        out[f"support_{r.n}"] = r.eta == eta and r.witness > eta and not evaluate(r.g, r.witness).is_zero
        gens.append(r.g)
        out[f"iii_{r.n}"] = independent(gens)
        last = r.index
        eta = max(eta, sup_support(r.g))
    supports = [sup_support(g) for g in gens]
    out["support_increasing"] = all(a < b for a, b in zip(supports, supports[1:])) and all(s < 1 for s in supports)
    return out


# ------------------------------------------------------------------ independence


def _value_matrix(gens: Sequence[StepFunction]) -> tuple[list[list[int]], int]:
    """Rows: generator values on the common refinement, scaled by the lcm L of
    all value denominators so that the subgroup lives in (Z/L)^P."""
    bps = sorted({t for g in gens for t in g.breakpoints})
    L = 1
    for g in gens:
        o = element_order(g)
        if o == INFINITE_ORDER:
            raise ValueError("independence check needs torsion generators")
        L = L * o // _gcd(L, o)
    rows = []
    for g in gens:
        lo = Fraction(0)
        row = []
        for t in bps:
            v = evaluate(g, lo).a
            row.append(int(v * L) % L)
            lo = t
        rows.append(row)
    return rows, L


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def subgroup_order(gens: Sequence[StepFunction]) -> int:
    """|<gens>| via the Smith form of the value matrix: the row span of an
    integer matrix with diagonal form D has order prod L/gcd(d_i, L) mod L."""
    gens = [g for g in gens if not g.is_zero]
    if not gens:
        return 1
    rows, L = _value_matrix(gens)
    D = smith_normal_form(Matrix(rows), domain=ZZ)
    diag = [int(D[i, i]) for i in range(min(D.shape))]
    return prod(L // _gcd(abs(d), L) for d in diag)


def enumerate_subgroup(gens: Sequence[StepFunction], bound: int = INDEPENDENCE_ENUMERATION_BOUND) -> set[StepFunction]:
    """All elements of <gens> (torsion generators), by closure; raises past ``bound``."""
    elems = {ZERO_FUNCTION}
    for g in gens:
        o = element_order(g)
        multiples = [g * c for c in range(o)]
        new = {e + m for e in elems for m in multiples}
        if len(new) > bound:
            raise OverflowError(f"subgroup exceeds {bound} elements")
        elems = new
    return elems


def independent(gens: Sequence[StepFunction]) -> bool:
    """Is <gens> the internal direct sum of the cyclic groups <g>?

    Enumerates the subgroup when the product of orders is within the bound
    and falls back to the exact Smith-form count otherwise.
    """
    orders = [element_order(g) for g in gens]
    target = prod(orders)
    if target <= INDEPENDENCE_ENUMERATION_BOUND:
        return len(enumerate_subgroup(gens)) == target
    return subgroup_order(gens) == target


def independent_exhaustive_prefix(gens: Sequence[StepFunction], bound: int = INDEPENDENCE_ENUMERATION_BOUND) -> int:
    """Largest n such that g_1..g_n was confirmed independent by enumeration."""
    n = 0
    for m in range(1, len(gens) + 1):
        if prod(element_order(g) for g in gens[:m]) > bound:
            break
        if len(enumerate_subgroup(gens[:m], bound)) != prod(element_order(g) for g in gens[:m]):
            break
        n = m
    return n


# ------------------------------------------------------------------ H(D, S)


def value_sample(D: str | TorusPoint, budget: int) -> list[TorusPoint]:
    """``"QmodZ"``: the first ``budget`` nonzero rationals mod 1 by denominator;
    a TorusPoint x: just x (it generates the cyclic group)."""
    if isinstance(D, TorusPoint):
        if D.is_zero:
            raise ValueError("cyclic value group needs a nonzero generator")
        return [D]
    if D != "QmodZ":
        raise ValueError(f"unknown value group {D!r}")
    out = []
    q = 2
    while len(out) < budget:
        for a in range(1, q):
            if _gcd(a, q) == 1 and len(out) < budget:
                out.append(TorusPoint(Fraction(a, q)))
        q += 1
    return out


def hds_generators(D: str | TorusPoint, S: Sequence[Fraction], budget: int = 64) -> list[StepFunction]:
    """Generators d_t = embed_at(d, t) of H(D, S) for d in a sample of D."""
    S = sorted({Fraction(t) for t in S})
    if not S:
        raise ValueError("S must be non-empty")
    return [embed_at(d, t) for t in S for d in value_sample(D, budget)]


# ------------------------------------------------------------------ audits


@dataclass(frozen=True)
class AuditReport:
    n: int
    hits: tuple[int, ...]
    misses: tuple[int, ...]
    witnesses: dict = field(default_factory=dict, compare=False)
    mode: str = "trace"

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "n": self.n,
            "hits": list(self.hits),
            "misses": list(self.misses),
            "witnesses": {str(k): step_to_json(v) for k, v in sorted(self.witnesses.items())},
        }

    def summary(self) -> str:
        return f"{len(self.hits)}/{self.n} hits"


def _circ_dist(y: TorusPoint, target: TorusPoint) -> tuple[Fraction, Fraction]:
    d = y - target
    if sign(d.a - Fraction(1, 2), d.b) <= 0:
        return d.a, d.b
    return 1 - d.a, -d.b


def _nearest(candidates: Sequence[TorusPoint], target: TorusPoint) -> TorusPoint:
    """Closest candidate on the circle; ties go to the earlier candidate."""
    if target.is_rational and all(y.is_rational for y in candidates):
        # sorted rational candidates: only the neighbours of target can win
        keys = [y.a for y in candidates]
        i = bisect_left(keys, target.a)
        candidates = [candidates[j % len(candidates)] for j in (i - 1, i)]
    best = candidates[0]
    for y in candidates[1:]:
        a, b = _circ_dist(y, target), _circ_dist(best, target)
        if sign(a[0] - b[0], a[1] - b[1]) < 0:
            best = y
    return best


def _value_table(gens: Sequence[StepFunction], budget: int) -> tuple[list[Fraction], list[TorusPoint]]:
    """Breakpoints of the single-step generators x_t = embed_at(x, t), and the
    values available at all of them (integer multiples up to ``budget`` for
    values of infinite order)."""
    avail: dict[Fraction, set[TorusPoint]] = {}
    for g in gens:
        if len(g.pieces) == 1:
            t, v = g.pieces[0]
            vals = avail.setdefault(t, {ZERO})
            if v.order() == INFINITE_ORDER:
                vals.update(v * c for c in range(-budget, budget + 1))
            else:
                vals.add(v)
    if not avail:
        return [], [ZERO]
    common = sorted(set.intersection(*avail.values()), key=lambda y: (y.b, y.a))
    return sorted(avail), common


def _approximate(S: Sequence[Fraction], common: Sequence[TorusPoint], V: BasicNeighborhood) -> StepFunction:
    """An element of the generated group built to sit near V's centre.

    With breakpoints S_1 < ... < S_m and a value y_i chosen for each gap
    [S_{i-1}, S_i), the combination sum_i (y_i)_{S_i} - (y_{i+1})_{S_i}
    equals y_i on gap i.  Each y_i is the common value nearest to the centre
    at the gap midpoint.
    """
    ys = []
    lo = Fraction(0)
    for t in S:
        ys.append(_nearest(common, evaluate(V.center, (lo + t) / 2)))
        lo = t
    ys.append(ZERO)
    f = ZERO_FUNCTION
    for i, t in enumerate(S):
        f = f + embed_at(ys[i], t) - embed_at(ys[i + 1], t)
    return f


def density_audit(subject: ChainTrace | Sequence[StepFunction], n: int, budget: int = 1000) -> AuditReport:
    """Which of V_1..V_n contain a recorded generator (traces) or a constructed
    combination of the given generators (generator lists)."""
    hits, misses, wit = [], [], {}
    if isinstance(subject, ChainTrace):
        Vs = subject.neighborhoods
        for k in range(1, n + 1):
            if k <= len(Vs) and in_neighborhood(subject.steps[k - 1].g, Vs[k - 1]):
                hits.append(k)
                wit[k] = subject.steps[k - 1].g
            else:
                misses.append(k)
        return AuditReport(n, tuple(hits), tuple(misses), wit, "trace")
    S, common = _value_table(list(subject), budget)
    for k in range(1, n + 1):
        V = enumerate_base(k)
        f = _approximate(S, common, V)
        if in_neighborhood(f, V):
            hits.append(k)
            wit[k] = f
        else:
            misses.append(k)
    return AuditReport(n, tuple(hits), tuple(misses), wit, "generators")
