"""Step functions [0,1] -> T and basic neighborhoods of HM(T).

A :class:`StepFunction` is a tuple of pieces ``(t_l, v_l)``: value ``v_l`` on
``[t_{l-1}, t_l)`` with ``t_0 = 0``, zero from the last breakpoint on, and
zero at the point 1.  The canonical form merges equal neighbours and drops a
trailing zero piece, so equality of functions is equality of tuples.

A :class:`BasicNeighborhood` ``w + O(U, eps)`` has ``U`` the open arc of
length ``arc_len`` centred at 0.  A function g lies in it when the set where
``g - w`` leaves U has measure below ``eps``.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable

from .qtorus import (
    INFINITE_ORDER,
    ZERO,
    Arc,
    ThresholdNotMet,
    TorusPoint,
    format_point,
    parse_point,
    root_in_arc,
    root_threshold,
)

ONE = Fraction(1)


def _canonical(pieces: Iterable[tuple[Fraction, TorusPoint]]) -> tuple[tuple[Fraction, TorusPoint], ...]:
    out: list[tuple[Fraction, TorusPoint]] = []
    prev = Fraction(0)
    for t, v in pieces:
        t = Fraction(t)
        if not 0 < t <= 1:
            raise ValueError(f"breakpoint {t} outside (0, 1]")
        if t < prev:
            raise ValueError("breakpoints must increase")
        if t == prev:
            continue  # empty piece
        prev = t
        if out and out[-1][1] == v:
            out[-1] = (t, v)
        else:
            out.append((t, v))
    while out and out[-1][1].is_zero:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class StepFunction:
    pieces: tuple[tuple[Fraction, TorusPoint], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "pieces", _canonical(self.pieces))

    @classmethod
    def constant(cls, x: TorusPoint) -> StepFunction:
        return cls(((ONE, x),))

    @property
    def breakpoints(self) -> tuple[Fraction, ...]:
        return tuple(t for t, _ in self.pieces)

    @property
    def is_zero(self) -> bool:
        return not self.pieces

    def __call__(self, t: Fraction) -> TorusPoint:
        return evaluate(self, t)

    def __add__(self, other: StepFunction) -> StepFunction:
        return _pointwise(lambda x, y: x + y, self, other)

    def __sub__(self, other: StepFunction) -> StepFunction:
        return _pointwise(lambda x, y: x - y, self, other)

    def __neg__(self) -> StepFunction:
        return StepFunction(tuple((t, -v) for t, v in self.pieces))

    def __mul__(self, k: int) -> StepFunction:
        return StepFunction(tuple((t, v * k) for t, v in self.pieces))

    __rmul__ = __mul__

    def __str__(self) -> str:
        return format_step(self)


ZERO_FUNCTION = StepFunction()


def _refinement(*fs: StepFunction) -> list[Fraction]:
    return sorted({t for f in fs for t in f.breakpoints} | {ONE})


def _pointwise(op, f: StepFunction, g: StepFunction) -> StepFunction:
    pieces = []
    lo = Fraction(0)
    for t in _refinement(f, g):
        pieces.append((t, op(evaluate(f, lo), evaluate(g, lo))))
        lo = t
    return StepFunction(tuple(pieces))


def add(f: StepFunction, g: StepFunction) -> StepFunction:
    return f + g


def neg(f: StepFunction) -> StepFunction:
    return -f


def scale(k: int, f: StepFunction) -> StepFunction:
    return f * k


def evaluate(f: StepFunction, t: Fraction) -> TorusPoint:
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ValueError(f"t={t} outside [0, 1]")
    i = bisect_right(f.breakpoints, t)
    return f.pieces[i][1] if i < len(f.pieces) else ZERO


def element_order(f: StepFunction) -> int:
    """lcm of the piece orders; :data:`INFINITE_ORDER` if some value has infinite order."""
    n = 1
    for _, v in f.pieces:
        o = v.order()
        if o == INFINITE_ORDER:
            return INFINITE_ORDER
        n = lcm(n, o)
    return n


def embed_at(x: TorusPoint, t: Fraction) -> StepFunction:
    """x on [0, t), zero afterwards."""
    t = Fraction(t)
    if not 0 < t <= 1:
        raise ValueError("embed_at needs t in (0, 1]")
    return StepFunction(((t, x),))


def sup_support(f: StepFunction) -> Fraction:
    return f.pieces[-1][0] if f.pieces else Fraction(0)


# ------------------------------------------------------------ neighborhoods


def symmetric_arc(length: Fraction) -> Arc:
    return Arc.centered(ZERO, Fraction(length))


def violation_measure(f: StepFunction, U: Arc) -> Fraction:
    """Lebesgue measure of {t : f(t) not in U}."""
    if ZERO not in U:
        raise ValueError("U must contain 0")
    total = Fraction(0)
    lo = Fraction(0)
    for t, v in f.pieces:
        if v not in U:
            total += t - lo
        lo = t
    return total


@dataclass(frozen=True)
class BasicNeighborhood:
    center: StepFunction
    arc_len: Fraction
    eps: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "arc_len", Fraction(self.arc_len))
        object.__setattr__(self, "eps", Fraction(self.eps))
        if not 0 < self.arc_len <= 1:
            raise ValueError("arc length must lie in (0, 1]")
        if self.eps <= 0:
            raise ValueError("eps must be positive")

    @property
    def U(self) -> Arc:
        return symmetric_arc(self.arc_len)

    @property
    def threshold(self) -> int:
        return root_threshold(self.arc_len)

    def __contains__(self, g: StepFunction) -> bool:
        return in_neighborhood(g, self)

    def to_json(self) -> dict:
        return {"center": step_to_json(self.center), "arcLen": str(self.arc_len), "eps": str(self.eps)}

    @classmethod
    def from_json(cls, d: dict) -> BasicNeighborhood:
        return cls(step_from_json(d["center"]), Fraction(d["arcLen"]), Fraction(d["eps"]))


def in_neighborhood(g: StepFunction, V: BasicNeighborhood) -> bool:
    return violation_measure(g - V.center, V.U) < V.eps


# ------------------------------------------------------------ division


def divide_in_open_set(V: BasicNeighborhood, g: StepFunction, k: int) -> tuple[int, StepFunction]:
    """(j, h) with k*h = g and h in V; requires k >= j = root threshold of V's arc.

    On each piece of the joint refinement of g and the centre w, h takes the
    k-th root of g's value closest to w's value inside ``w(t) + U``.
    """
    j = V.threshold
    if k < j:
        raise ThresholdNotMet(k, j)
    U, w = V.U, V.center
    pieces = []
    lo = Fraction(0)
    for t in _refinement(g, w):
        z = evaluate(w, lo)
        pieces.append((t, root_in_arc(U.shifted(z), evaluate(g, lo), k, anchor="center")))
        lo = t
    h = StepFunction(tuple(pieces))
    assert h * k == g and h in V
    return j, h


def torsion_breakpoints(V: BasicNeighborhood, eta: Fraction) -> list[Fraction]:
    """Breakpoints for :func:`torsion_divide`: the centre's breakpoints below
    ``t_last = max(1 - eps/2, (1 + eta)/2)``, then ``t_last``, with one point
    inserted in ``(eta, t_last)`` if the previous breakpoint is not above eta."""
    t_last = max(1 - V.eps / 2, (1 + eta) / 2)
    bps = [t for t in V.center.breakpoints if t < t_last]
    if not bps or bps[-1] <= eta:
        bps.append((2 * eta + t_last) / 3)
    bps.append(t_last)
    return bps


def torsion_divide(V: BasicNeighborhood, k: int, eta: Fraction) -> tuple[StepFunction, Fraction]:
    """(h, s): k*h = 0, h(s) != 0 with s > eta, sup_support(h) < 1 and h in V."""
    eta = Fraction(eta)
    if not 0 <= eta < 1:
        raise ValueError("eta must lie in [0, 1)")
    j = V.threshold
    if k < j:
        raise ThresholdNotMet(k, j)
    U, w = V.U, V.center
    bps = torsion_breakpoints(V, eta)
    pieces = []
    lo = Fraction(0)
    for t in bps:
        z = evaluate(w, lo)
        pieces.append((t, root_in_arc(U.shifted(z), ZERO, k, anchor="center", primitive=True)))
        lo = t
    h = StepFunction(tuple(pieces))
    s = (bps[-2] + bps[-1]) / 2
    assert (h * k).is_zero and not evaluate(h, s).is_zero and s > eta
    assert sup_support(h) < 1 and h in V
    return h, s


# ------------------------------------------------------------ text / json


def step_to_json(f: StepFunction) -> list[list[str]]:
    return [[str(t), format_point(v)] for t, v in f.pieces]


def step_from_json(data: list) -> StepFunction:
    return StepFunction(tuple((Fraction(t), parse_point(v)) for t, v in data))


def format_step(f: StepFunction) -> str:
    if f.is_zero:
        return "0"
    return "; ".join(f"{t}: {format_point(v)}" for t, v in f.pieces)


def parse_step(text: str) -> StepFunction:
    """``t1: v1; t2: v2; ...`` (value v_l on [t_{l-1}, t_l)), or ``0``."""
    text = text.strip()
    if text in ("", "0"):
        return ZERO_FUNCTION
    pieces = []
    for chunk in text.split(";"):
        t, sep, v = chunk.partition(":")
        if not sep:
            raise ValueError(f"step piece {chunk!r} should look like 't: value'")
        pieces.append((Fraction(t.strip()), parse_point(v)))
    return StepFunction(tuple(pieces))
