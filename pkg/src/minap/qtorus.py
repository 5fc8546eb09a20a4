"""Exact arithmetic on the circle T = R/Z with coordinates in Q(sqrt 2).

A :class:`TorusPoint` ``(a, b)`` stands for ``a + b*sqrt(2) mod 1`` and is
kept reduced to ``[0, 1)``.  Signs in Q(sqrt 2) are decided by comparing
``a**2`` with ``2*b**2``, so no floating point is ever involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, isqrt


class NoRootInArc(ValueError):
    pass


class ThresholdNotMet(ValueError):
    def __init__(self, k: int, j: int):
        self.k, self.j = k, j
        super().__init__(f"k={k} is below the root threshold j={j}")


INFINITE_ORDER = 0  # order() convention, as for exponents of unbounded groups


def sign(a: Fraction, b: Fraction) -> int:
    """Sign of ``a + b*sqrt(2)``."""
    if a >= 0 and b >= 0:
        return 0 if a == 0 and b == 0 else 1
    if a <= 0 and b <= 0:
        return -1
    # opposite signs: compare a^2 with 2 b^2
    d = a * a - 2 * b * b
    if a > 0:
        return 1 if d > 0 else -1
    return 1 if d < 0 else -1


def floor(a: Fraction, b: Fraction) -> int:
    """Exact floor of ``a + b*sqrt(2)``."""
    # rational approximation from an integer square root, then exact correction
    scale = 1 << 64
    num, den = b.numerator, b.denominator
    root = isqrt(2 * num * num * scale * scale)
    approx = a + Fraction(root if num >= 0 else -root, den * scale)
    n = approx.numerator // approx.denominator
    while sign(a - n, b) < 0:
        n -= 1
    while sign(a - (n + 1), b) >= 0:
        n += 1
    return n


@dataclass(frozen=True)
class TorusPoint:
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        a, b = Fraction(self.a), Fraction(self.b)
        n = a.numerator // a.denominator if b == 0 else floor(a, b)
        object.__setattr__(self, "a", a - n)
        object.__setattr__(self, "b", b)

    @classmethod
    def rational(cls, q: Fraction | int | str) -> TorusPoint:
        return cls(Fraction(q))

    def __add__(self, other: TorusPoint) -> TorusPoint:
        return TorusPoint(self.a + other.a, self.b + other.b)

    def __sub__(self, other: TorusPoint) -> TorusPoint:
        return TorusPoint(self.a - other.a, self.b - other.b)

    def __neg__(self) -> TorusPoint:
        return TorusPoint(-self.a, -self.b)

    def __mul__(self, k: int) -> TorusPoint:
        return TorusPoint(k * self.a, k * self.b)

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def order(self) -> int:
        """Order in T; :data:`INFINITE_ORDER` (0) for points of infinite order."""
        if self.b != 0:
            return INFINITE_ORDER
        return self.a.denominator

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        op = "-" if self.b < 0 else "+"
        return f"{self.a} {op} {abs(self.b)}*sqrt2"

    def __repr__(self) -> str:
        return f"TorusPoint({self})"


ZERO = TorusPoint()
SQRT2 = TorusPoint(Fraction(0), Fraction(1))


def add(x: TorusPoint, y: TorusPoint) -> TorusPoint:
    return x + y


def neg(x: TorusPoint) -> TorusPoint:
    return -x


def scale(k: int, x: TorusPoint) -> TorusPoint:
    return x * k


def order_of(x: TorusPoint) -> int:
    return x.order()


def offset(x: TorusPoint, start: TorusPoint) -> tuple[Fraction, Fraction]:
    """Counter-clockwise displacement from ``start`` to ``x``, in [0, 1)."""
    d = x - start
    return d.a, d.b


def _lt(u: tuple[Fraction, Fraction], v: tuple[Fraction, Fraction]) -> bool:
    return sign(u[0] - v[0], u[1] - v[1]) < 0


@dataclass(frozen=True)
class Arc:
    """Open arc ``(start, start + length)`` with rational ``0 < length <= 1``."""

    start: TorusPoint
    length: Fraction

    def __post_init__(self) -> None:
        length = Fraction(self.length)
        if not 0 < length <= 1:
            raise ValueError(f"arc length must lie in (0, 1], got {length}")
        object.__setattr__(self, "length", length)

    @classmethod
    def centered(cls, center: TorusPoint, length: Fraction) -> Arc:
        length = Fraction(length)
        return cls(center - TorusPoint(length / 2), length)

    @property
    def center(self) -> TorusPoint:
        return self.start + TorusPoint(self.length / 2)

    def __contains__(self, x: TorusPoint) -> bool:
        da, db = offset(x, self.start)
        return sign(da, db) > 0 and sign(da - self.length, db) < 0

    def shifted(self, z: TorusPoint) -> Arc:
        return Arc(self.start + z, self.length)


def root_threshold(delta: Fraction) -> int:
    """Least j with the guarantee: for k >= j every open arc of length delta holds
    at least two k-th roots of any point (so at least one nonzero)."""
    delta = Fraction(delta)
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    return ceil(3 / delta)


def kth_roots(x: TorusPoint, k: int) -> list[TorusPoint]:
    """All k solutions y of k*y = x, in increasing order of position in [0, 1)."""
    if k < 1:
        raise ValueError("k must be positive")
    return [TorusPoint((x.a + t) / k, x.b / k) for t in range(k)]


def _ccw_dist(y: TorusPoint, z: TorusPoint) -> tuple[Fraction, Fraction]:
    return offset(y, z)


def _abs_dist(y: TorusPoint, z: TorusPoint) -> tuple[tuple[Fraction, Fraction], int]:
    """Angular distance from z to y plus a tie-break preferring the counter-clockwise side."""
    da, db = offset(y, z)
    # distance is min(d, 1 - d)
    if sign(da - Fraction(1, 2), db) <= 0:
        return (da, db), 0
    return (1 - da, -db), 1


def root_in_arc(
    A: Arc,
    x: TorusPoint,
    k: int,
    *,
    anchor: str = "start",
    primitive: bool = False,
    enforce_threshold: bool = True,
) -> TorusPoint:
    """A nonzero y in A with k*y = x.

    ``anchor="start"`` picks the candidate closest to the arc start going
    counter-clockwise; ``anchor="center"`` the one closest to the midpoint,
    ties going counter-clockwise.  With ``primitive`` a root of exact order
    ``k * order(x)`` is preferred when one lies in the arc.

    Below the threshold a root may still exist; ``enforce_threshold=False``
    searches anyway and fails with :class:`NoRootInArc` if there is none.
    """
    if enforce_threshold and k < root_threshold(A.length):
        raise ThresholdNotMet(k, root_threshold(A.length))
    cands = [y for y in kth_roots(x, k) if not y.is_zero and y in A]
    if not cands:
        if enforce_threshold:
            raise AssertionError("threshold guarantee violated: no nonzero root in arc")
        raise NoRootInArc(f"no nonzero {k}-th root of {x} in the arc")
    if primitive and x.is_rational:
        target = k * x.order()
        prim = [y for y in cands if y.order() == target]
        cands = prim or cands
    if anchor == "start":
        key = lambda y: _ccw_dist(y, A.start)  # noqa: E731
    elif anchor == "center":
        c = A.center
        key = lambda y: _abs_dist(y, c)  # noqa: E731
    else:
        raise ValueError(f"unknown anchor {anchor!r}")
    best = cands[0]
    for y in cands[1:]:
        ky, kb = key(y), key(best)
        if anchor == "start":
            if _lt(ky, kb):
                best = y
        elif _lt(ky[0], kb[0]) or (ky[0] == kb[0] and ky[1] < kb[1]):
            best = y
    return best


def parse_point(text: str) -> TorusPoint:
    """``p/q`` or ``p/q + r/s*sqrt2`` (also ``sqrt2``, ``-sqrt2``, ``r/s*sqrt2``)."""
    t = text.replace(" ", "")
    if "sqrt2" not in t:
        return TorusPoint(Fraction(t))
    head, _, tail = t.partition("sqrt2")
    if tail:
        raise ValueError(f"sqrt2 must come last in {text!r}")
    head = head.rstrip("*")
    # split the rational part from the coefficient at the last top-level sign
    cut = max(head.rfind("+"), head.rfind("-"))
    if cut > 0:
        a_text, b_text = head[:cut], head[cut:]
    else:
        a_text, b_text = "0", head
    if b_text in ("", "+"):
        b = Fraction(1)
    elif b_text == "-":
        b = Fraction(-1)
    else:
        b = Fraction(b_text)
    return TorusPoint(Fraction(a_text), b)


def format_point(x: TorusPoint) -> str:
    return str(x)
