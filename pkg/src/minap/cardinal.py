"""Symbolic cardinals: finite n, aleph_0, aleph_1 and the continuum.

Comparison is tri-state.  ZFC proves ``aleph_1 <= c`` but not equality, so
``compare(ALEPH1, CONTINUUM)`` is ``UNKNOWN`` unless the continuum hypothesis
is switched on with :func:`assume_ch` (or ``MINAP_ASSUME_CH=1``).
"""

from __future__ import annotations

import contextlib
import contextvars
import enum
import os
from dataclasses import dataclass
from typing import Iterable, Iterator


class UnknownCardinal(Exception):
    """A decision needed ``aleph_1`` vs ``c`` and CH is not assumed."""


class Ordering(enum.Enum):
    LESS = "<"
    EQUAL = "="
    GREATER = ">"
    UNKNOWN = "?"


def _env_flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() in {"1", "true", "yes", "on"}


_ASSUME_CH: contextvars.ContextVar[bool] = contextvars.ContextVar(
    "assume_ch", default=_env_flag("MINAP_ASSUME_CH")
)


def ch_assumed() -> bool:
    return _ASSUME_CH.get()


@contextlib.contextmanager
def assume_ch(flag: bool = True) -> Iterator[None]:
    token = _ASSUME_CH.set(flag)
    try:
        yield
    finally:
        _ASSUME_CH.reset(token)


# rank inside the infinite part of the order
_INFINITE_RANK = {"w": 1, "w1": 2, "c": 3}


@dataclass(frozen=True, order=False)
class Cardinal:
    """A cardinal from {0, 1, 2, ..., aleph_0, aleph_1, c}.

    ``kind`` is ``"fin"``, ``"w"``, ``"w1"`` or ``"c"``; ``n`` is only
    meaningful for finite cardinals.  Structural ``==`` is used for normal
    forms; use :func:`compare` for the mathematical order.
    """

    kind: str
    n: int = 0

    def __post_init__(self) -> None:
        if self.kind == "fin":
            if not isinstance(self.n, int) or self.n < 0:
                raise ValueError(f"finite cardinal needs a non-negative int, got {self.n!r}")
        elif self.kind in _INFINITE_RANK:
            if self.n != 0:
                raise ValueError("infinite cardinals carry no integer payload")
        else:
            raise ValueError(f"unknown cardinal kind {self.kind!r}")

    @property
    def is_finite(self) -> bool:
        return self.kind == "fin"

    @property
    def is_infinite(self) -> bool:
        return self.kind != "fin"

    def __str__(self) -> str:
        return str(self.n) if self.kind == "fin" else self.kind

    def __repr__(self) -> str:
        return f"Cardinal({self})"

    def __add__(self, other: Cardinal) -> Cardinal:
        return add(self, other)

    def __lt__(self, other: Cardinal) -> bool:
        return _strict(compare(self, other)) is Ordering.LESS

    def __le__(self, other: Cardinal) -> bool:
        return _strict(compare(self, other)) in (Ordering.LESS, Ordering.EQUAL)

    def __gt__(self, other: Cardinal) -> bool:
        return _strict(compare(self, other)) is Ordering.GREATER

    def __ge__(self, other: Cardinal) -> bool:
        return _strict(compare(self, other)) in (Ordering.GREATER, Ordering.EQUAL)


def finite(n: int) -> Cardinal:
    return Cardinal("fin", n)


ZERO = finite(0)
ONE = finite(1)
ALEPH0 = Cardinal("w")
ALEPH1 = Cardinal("w1")
CONTINUUM = Cardinal("c")


def _strict(o: Ordering) -> Ordering:
    if o is Ordering.UNKNOWN:
        raise UnknownCardinal("aleph_1 vs continuum is undecided without CH")
    return o


def compare(a: Cardinal, b: Cardinal) -> Ordering:
    if a.is_finite and b.is_finite:
        if a.n == b.n:
            return Ordering.EQUAL
        return Ordering.LESS if a.n < b.n else Ordering.GREATER
    if a.is_finite:
        return Ordering.LESS
    if b.is_finite:
        return Ordering.GREATER
    ra, rb = _INFINITE_RANK[a.kind], _INFINITE_RANK[b.kind]
    if ra == rb:
        return Ordering.EQUAL
    if {a.kind, b.kind} == {"w1", "c"}:
        if ch_assumed():
            return Ordering.EQUAL
        return Ordering.UNKNOWN
    return Ordering.LESS if ra < rb else Ordering.GREATER


def equal(a: Cardinal, b: Cardinal) -> bool:
    """Mathematical equality; raises :class:`UnknownCardinal` when undecided."""
    return _strict(compare(a, b)) is Ordering.EQUAL


def is_infinite(a: Cardinal) -> bool:
    return a.is_infinite


def _zfc_max(a: Cardinal, b: Cardinal) -> Cardinal:
    # aleph_1 <= c is a ZFC theorem, so the max is known even when '=' is not
    if a.is_finite and b.is_finite:
        return a if a.n >= b.n else b
    if a.is_finite:
        return b
    if b.is_finite:
        return a
    return a if _INFINITE_RANK[a.kind] >= _INFINITE_RANK[b.kind] else b


def _zfc_min(a: Cardinal, b: Cardinal) -> Cardinal:
    return b if _zfc_max(a, b) is a else a


def add(a: Cardinal, b: Cardinal) -> Cardinal:
    if a.is_finite and b.is_finite:
        return finite(a.n + b.n)
    return _zfc_max(a, b)


def cmax(items: Iterable[Cardinal], default: Cardinal = ZERO) -> Cardinal:
    out = default
    for c in items:
        out = _zfc_max(out, c)
    return out


def cmin(items: Iterable[Cardinal]) -> Cardinal:
    it = iter(items)
    try:
        out = next(it)
    except StopIteration:
        raise ValueError("cmin of an empty collection") from None
    for c in it:
        out = _zfc_min(out, c)
    return out


def csum(items: Iterable[Cardinal]) -> Cardinal:
    out = ZERO
    for c in items:
        out = add(out, c)
    return out


def mul(a: Cardinal, b: Cardinal) -> Cardinal:
    """Cardinal product (only ever needed for multiplicity bookkeeping)."""
    if a == ZERO or b == ZERO:
        return ZERO
    if a.is_finite and b.is_finite:
        return finite(a.n * b.n)
    return _zfc_max(a, b)


def power(base: int, exp: Cardinal) -> Cardinal:
    """``base ** exp`` for finite ``exp`` only; ``2**kappa`` is outside this universe."""
    if exp.is_infinite:
        raise ValueError("exponentiation to an infinite cardinal is not supported")
    return finite(base**exp.n)


_TOKENS = {"w": ALEPH0, "w1": ALEPH1, "c": CONTINUUM}


def parse_cardinal(text: str) -> Cardinal:
    t = text.strip()
    if t in _TOKENS:
        return _TOKENS[t]
    if t.isdigit():
        return finite(int(t))
    raise ValueError(f"not a cardinal: {text!r}")
