"""Structural descriptors of abelian groups and their invariants.

A :class:`GroupDescriptor` is a finite direct sum of atoms with cardinal
multiplicities.  Atoms:

=================  =====================================================
``Cyclic(p, i)``   Z(p^i)
``Pruefer(p)``     Z(p^inf)
``Tower(p)``       the direct sum of Z(p^n) over n >= 1, each once
``PrimeSum``       the direct sum of Z(p) over an infinite prime set
``Free``           Z
``Rational``       Q
``PAdic(p)``       the p-adic integers
=================  =====================================================

All multiplication-by-m maps act atom-wise, which is what makes every
invariant below computable from the atom list alone.  In particular the
non-cyclic atoms are m-invariant in cardinality (``|mA| = |A|`` for every
m >= 1), so ``|mG|`` for large m is the size of the non-cyclic part.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from math import lcm
from typing import Iterable, Union

from sympy import divisors, factorint, isprime, nextprime

from . import cardinal as card
from .cardinal import ALEPH0, CONTINUUM, ONE, ZERO, Cardinal, Ordering


class DescriptorError(ValueError):
    pass


class Unbounded(DescriptorError):
    """The operation needs a group of finite exponent."""


class InvalidDesignator(DescriptorError):
    pass


def _check_prime(p: int) -> None:
    if not isinstance(p, int) or not isprime(p):
        raise DescriptorError(f"{p!r} is not a prime")


def vp(m: int, p: int) -> int:
    """p-adic valuation of a positive integer."""
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


# ---------------------------------------------------------------- atoms


@dataclass(frozen=True)
class Cyclic:
    p: int
    i: int

    def __post_init__(self) -> None:
        _check_prime(self.p)
        if not isinstance(self.i, int) or self.i < 1:
            raise DescriptorError(f"cyclic exponent must be >= 1, got {self.i!r}")

    @property
    def order(self) -> int:
        return self.p**self.i


@dataclass(frozen=True)
class Pruefer:
    p: int

    def __post_init__(self) -> None:
        _check_prime(self.p)


@dataclass(frozen=True)
class Tower:
    p: int

    def __post_init__(self) -> None:
        _check_prime(self.p)


@dataclass(frozen=True)
class PrimeSum:
    """Sum of Z(q) over primes ``q >= start`` with ``q`` not in ``excluded``.

    Stored canonically: ``start`` is itself a member of the set and every
    excluded prime is larger than ``start``.  ``start == 2`` is the
    ``all-primes`` rule.
    """

    start: int = 2
    excluded: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if not isinstance(self.start, int) or self.start < 2:
            raise DescriptorError(f"prime rule start must be >= 2, got {self.start!r}")
        ex = {q for q in self.excluded if isprime(q)}
        if len(ex) != len(set(self.excluded)):
            raise DescriptorError("excluded set must contain primes only")
        low = self.start if isprime(self.start) else nextprime(self.start)
        while low in ex:
            ex.discard(low)
            low = nextprime(low)
        object.__setattr__(self, "start", low)
        object.__setattr__(self, "excluded", frozenset(q for q in ex if q > low))

    def contains(self, q: int) -> bool:
        return isprime(q) and q >= self.start and q not in self.excluded

    def issubset(self, other: PrimeSum) -> bool:
        if self.start < other.start:
            return False
        return all(q in self.excluded for q in other.excluded if q >= self.start)

    def without(self, primes: Iterable[int]) -> PrimeSum:
        return PrimeSum(self.start, self.excluded | {q for q in primes if isprime(q)})


@dataclass(frozen=True)
class Free:
    pass


@dataclass(frozen=True)
class Rational:
    pass


@dataclass(frozen=True)
class PAdic:
    p: int

    def __post_init__(self) -> None:
        _check_prime(self.p)


Atom = Union[Cyclic, Pruefer, Tower, PrimeSum, Free, Rational, PAdic]

_KIND_ORDER = {Cyclic: 0, Pruefer: 1, Tower: 2, PrimeSum: 3, Free: 4, Rational: 5, PAdic: 6}
TORSION_ATOMS = (Cyclic, Pruefer, Tower, PrimeSum)
UNBOUNDED_TORSION_ATOMS = (Pruefer, Tower, PrimeSum)


def atom_key(a: Atom) -> tuple:
    if isinstance(a, Cyclic):
        return (0, a.p, a.i)
    if isinstance(a, PrimeSum):
        return (3, a.start, 0, tuple(sorted(a.excluded)))
    return (_KIND_ORDER[type(a)], getattr(a, "p", 0), 0)


def format_atom(a: Atom) -> str:
    if isinstance(a, Cyclic):
        return f"Z({a.order})"
    if isinstance(a, Pruefer):
        return f"Z({a.p}^inf)"
    if isinstance(a, Tower):
        return f"Tower({a.p})"
    if isinstance(a, PrimeSum):
        rule = "all" if a.start == 2 else f"ge {a.start}"
        if a.excluded:
            rule += " - " + ",".join(str(q) for q in sorted(a.excluded))
        return f"Primes({rule})"
    if isinstance(a, Free):
        return "Z"
    if isinstance(a, Rational):
        return "Q"
    if isinstance(a, PAdic):
        return f"Jp({a.p})"
    raise TypeError(a)


def atom_cardinality(a: Atom) -> Cardinal:
    if isinstance(a, Cyclic):
        return card.finite(a.order)
    if isinstance(a, PAdic):
        return CONTINUUM
    return ALEPH0


# ----------------------------------------------------------- descriptor


@dataclass(frozen=True)
class GroupDescriptor:
    """Normal form: atoms sorted by :func:`atom_key`, no duplicates, multiplicities >= 1.

    Build instances with :meth:`of`, which merges and sorts.
    """

    atoms: tuple[tuple[Atom, Cardinal], ...] = ()

    @classmethod
    def of(cls, pairs: Iterable[tuple[Atom, Cardinal] | Atom]) -> GroupDescriptor:
        merged: dict[Atom, Cardinal] = {}
        for item in pairs:
            atom, mult = item if isinstance(item, tuple) else (item, ONE)
            if not isinstance(mult, Cardinal):
                mult = card.finite(mult)
            if mult == ZERO:
                continue
            merged[atom] = card.add(merged.get(atom, ZERO), mult)
        return cls(tuple(sorted(merged.items(), key=lambda am: atom_key(am[0]))))

    def __str__(self) -> str:
        if not self.atoms:
            return "0"
        parts = []
        for atom, mult in self.atoms:
            s = format_atom(atom)
            parts.append(s if mult == ONE else f"{s}^{mult}")
        return " + ".join(parts)

    def __add__(self, other: GroupDescriptor) -> GroupDescriptor:
        return direct_sum(self, other)

    @property
    def is_trivial(self) -> bool:
        return not self.atoms

    @property
    def is_bounded(self) -> bool:
        return all(isinstance(a, Cyclic) for a, _ in self.atoms)

    @property
    def is_torsion(self) -> bool:
        return all(isinstance(a, TORSION_ATOMS) for a, _ in self.atoms)

    def cyclic_part(self) -> GroupDescriptor:
        return GroupDescriptor.of((a, m) for a, m in self.atoms if isinstance(a, Cyclic))

    def noncyclic_part(self) -> GroupDescriptor:
        return GroupDescriptor.of((a, m) for a, m in self.atoms if not isinstance(a, Cyclic))

    def torsion_part(self) -> GroupDescriptor:
        return GroupDescriptor.of((a, m) for a, m in self.atoms if isinstance(a, TORSION_ATOMS))

    def multiplicity(self, atom: Atom) -> Cardinal:
        for a, m in self.atoms:
            if a == atom:
                return m
        return ZERO


TRIVIAL = GroupDescriptor()


def direct_sum(*groups: GroupDescriptor) -> GroupDescriptor:
    return GroupDescriptor.of(pair for g in groups for pair in g.atoms)


def cyclic_group(n: int, mult: Cardinal = ONE) -> GroupDescriptor:
    """Z(n) with composite n split into prime-power atoms."""
    if n < 1:
        raise DescriptorError("Z(n) needs n >= 1")
    return GroupDescriptor.of((Cyclic(p, e), mult) for p, e in factorint(n).items())


# ----------------------------------------------------------- operations


def multiply(G: GroupDescriptor, m: int) -> GroupDescriptor:
    """Descriptor of mG."""
    if not isinstance(m, int) or m < 1:
        raise DescriptorError(f"multiply needs m >= 1, got {m!r}")
    out: list[tuple[Atom, Cardinal]] = []
    primes_m = list(factorint(m))
    for a, k in G.atoms:
        if isinstance(a, Cyclic):
            left = a.i - min(a.i, vp(m, a.p))
            if left:
                out.append((Cyclic(a.p, left), k))
        elif isinstance(a, PrimeSum):
            out.append((a.without(primes_m), k))
        else:
            out.append((a, k))
    return GroupDescriptor.of(out)


def kernel(G: GroupDescriptor, m: int) -> GroupDescriptor:
    """Descriptor of G[m] = {g : mg = 0}; ``kernel(G, 0) == G``."""
    if not isinstance(m, int) or m < 0:
        raise DescriptorError(f"kernel needs m >= 0, got {m!r}")
    if m == 0:
        return G
    out: list[tuple[Atom, Cardinal]] = []
    for a, k in G.atoms:
        if isinstance(a, Cyclic):
            v = min(a.i, vp(m, a.p))
            if v:
                out.append((Cyclic(a.p, v), k))
        elif isinstance(a, Pruefer):
            v = vp(m, a.p)
            if v:
                out.append((Cyclic(a.p, v), k))
        elif isinstance(a, Tower):
            v = vp(m, a.p)
            for n in range(1, v):
                out.append((Cyclic(a.p, n), k))
            if v:
                out.append((Cyclic(a.p, v), card.mul(ALEPH0, k)))
        elif isinstance(a, PrimeSum):
            out.extend((Cyclic(q, 1), k) for q in factorint(m) if a.contains(q))
        # torsion-free atoms contribute nothing
    return GroupDescriptor.of(out)


def cardinality(G: GroupDescriptor) -> Cardinal:
    if G.is_bounded:
        infinite = [k for _, k in G.atoms if k.is_infinite]
        if infinite:
            return card.cmax(infinite)
        size = 1
        for a, k in G.atoms:
            size *= a.order**k.n
        return card.finite(size)
    parts = []
    for a, k in G.atoms:
        ac = atom_cardinality(a)
        parts.append(card.cmax([ac, k]) if (ac.is_infinite or k.is_infinite) else ac)
    return card.cmax(parts)


def cyclic_exponent(G: GroupDescriptor) -> int:
    """Exponent of the cyclic part (1 if there is none)."""
    return lcm(1, *(a.order for a, _ in G.atoms if isinstance(a, Cyclic)))


def exponent_of(G: GroupDescriptor) -> int:
    """Least m >= 1 with mG = 0, or 0 for unbounded G."""
    if not G.is_bounded:
        return 0
    return cyclic_exponent(G)


@dataclass(frozen=True)
class UlmKaplansky:
    table: dict[tuple[int, int], Cardinal]
    leading: dict[int, tuple[int, Cardinal]]

    @property
    def primes(self) -> list[int]:
        return sorted(self.leading)


def ulm_kaplansky(G: GroupDescriptor) -> UlmKaplansky:
    if not G.is_bounded:
        raise Unbounded(f"{G} has infinite exponent; Ulm-Kaplansky data needs a bounded group")
    table = {(a.p, a.i): k for a, k in G.atoms}
    leading: dict[int, tuple[int, Cardinal]] = {}
    for (p, i), k in table.items():
        if p not in leading or i > leading[p][0]:
            leading[p] = (i, k)
    return UlmKaplansky(table, leading)


def essential_order(G: GroupDescriptor) -> int:
    """Least n >= 1 with nG finite; 0 when G is unbounded."""
    if not G.is_bounded:
        return 0
    for d in divisors(exponent_of(G)):
        if cardinality(multiply(G, d)).is_finite:
            return d
    raise AssertionError("exponent always kills a bounded group")


def zariski_component(G: GroupDescriptor) -> GroupDescriptor:
    return kernel(G, essential_order(G))


def w_weight(G: GroupDescriptor) -> Cardinal:
    """min over m >= 1 of |mG|.

    ``mG = gcd(m, e)G`` on the cyclic part (e its exponent) and the other
    atoms are m-invariant in size, so divisors of e suffice.
    """
    return card.cmin(cardinality(multiply(G, d)) for d in divisors(cyclic_exponent(G)))


def is_w_divisible(G: GroupDescriptor) -> bool:
    """``|mG| = |G|`` for all m >= 1; raises UnknownCardinal if undecidable."""
    return card.equal(w_weight(G), cardinality(G))


def free_rank(G: GroupDescriptor) -> Cardinal:
    """Torsion-free rank: Z and Q count once, a p-adic atom counts c."""
    parts = []
    for a, k in G.atoms:
        if isinstance(a, (Free, Rational)):
            parts.append(k)
        elif isinstance(a, PAdic):
            parts.append(CONTINUUM)
    return card.csum(parts)


# ----------------------------------------------------------- subgroups


def embeds(sub: Atom, parent: Atom) -> bool:
    """Atom-wise embeddability rules used by designators (sufficient only)."""
    if isinstance(sub, Cyclic):
        if isinstance(parent, Cyclic):
            return parent.p == sub.p and sub.i <= parent.i
        if isinstance(parent, (Pruefer, Tower)):
            return parent.p == sub.p
        if isinstance(parent, PrimeSum):
            return sub.i == 1 and parent.contains(sub.p)
        return False
    if isinstance(sub, Free):
        return isinstance(parent, (Free, Rational, PAdic))
    if isinstance(sub, PrimeSum):
        return isinstance(parent, PrimeSum) and sub.issubset(parent)
    return sub == parent


@dataclass(frozen=True)
class Choice:
    index: int
    atom: Atom
    mult: Cardinal


@dataclass(frozen=True)
class SubgroupDesignator:
    """A subgroup of ``parent`` picked atom by atom.

    Each choice takes ``mult`` copies of ``atom`` inside the parent atom at
    ``index``.  Copies are accounted per parent atom so that the chosen
    pieces sit in independent summands; see :meth:`validate`.
    """

    parent: GroupDescriptor
    choices: tuple[Choice, ...]

    @classmethod
    def full(cls, G: GroupDescriptor) -> SubgroupDesignator:
        return cls(G, tuple(Choice(i, a, k) for i, (a, k) in enumerate(G.atoms)))

    def validate(self) -> None:
        by_index: dict[int, list[Choice]] = defaultdict(list)
        for c in self.choices:
            if not 0 <= c.index < len(self.parent.atoms):
                raise InvalidDesignator(f"atom index {c.index} out of range")
            if c.mult == ZERO:
                raise InvalidDesignator("chosen multiplicity must be >= 1")
            parent_atom = self.parent.atoms[c.index][0]
            if not embeds(c.atom, parent_atom):
                raise InvalidDesignator(
                    f"{format_atom(c.atom)} does not embed into {format_atom(parent_atom)}"
                )
            by_index[c.index].append(c)
        for idx, cs in by_index.items():
            parent_atom, pm = self.parent.atoms[idx]
            if isinstance(parent_atom, Tower):
                _within(card.csum(c.mult for c in cs if isinstance(c.atom, Tower)), pm, parent_atom)
                _within(
                    card.csum(c.mult for c in cs if isinstance(c.atom, Cyclic)),
                    card.mul(ALEPH0, pm),
                    parent_atom,
                )
            elif isinstance(parent_atom, PrimeSum):
                per_prime: dict[int, Cardinal] = defaultdict(lambda: ZERO)
                for c in cs:
                    if isinstance(c.atom, Cyclic):
                        per_prime[c.atom.p] = card.add(per_prime[c.atom.p], c.mult)
                used = card.csum(c.mult for c in cs if isinstance(c.atom, PrimeSum))
                _within(card.add(used, card.cmax(per_prime.values())), pm, parent_atom)
            else:
                _within(card.csum(c.mult for c in cs), pm, parent_atom)


def _within(used: Cardinal, cap: Cardinal, parent_atom: Atom) -> None:
    o = card.compare(used, cap)
    if o is Ordering.UNKNOWN:
        raise InvalidDesignator(
            f"cannot decide {used} <= {cap} inside {format_atom(parent_atom)} without CH"
        )
    if o is Ordering.GREATER:
        raise InvalidDesignator(
            f"chosen multiplicity {used} exceeds {cap} available in {format_atom(parent_atom)}"
        )


def realize_designator(H: SubgroupDesignator) -> GroupDescriptor:
    H.validate()
    return GroupDescriptor.of((c.atom, c.mult) for c in H.choices)


def kernel_designator(G: GroupDescriptor, m: int) -> SubgroupDesignator:
    """Designator of G[m], laid out atom by atom as in :func:`kernel`."""
    if m == 0:
        return SubgroupDesignator.full(G)
    choices = []
    for idx, (a, k) in enumerate(G.atoms):
        piece = kernel(GroupDescriptor(((a, k),)), m)
        choices.extend(Choice(idx, sa, sk) for sa, sk in piece.atoms)
    return SubgroupDesignator(G, tuple(choices))


def multiple_designator(G: GroupDescriptor, m: int) -> SubgroupDesignator:
    """Designator of mG (each atom's multiple sits inside that atom)."""
    choices = []
    for idx, (a, k) in enumerate(G.atoms):
        piece = multiply(GroupDescriptor(((a, k),)), m)
        choices.extend(Choice(idx, sa, sk) for sa, sk in piece.atoms)
    return SubgroupDesignator(G, tuple(choices))


def finite_analog(G: GroupDescriptor, replace: int = 2) -> GroupDescriptor:
    """Bounded G with every infinite multiplicity replaced by ``replace``."""
    if not G.is_bounded:
        raise Unbounded("finite analogs exist only for bounded descriptors")
    return GroupDescriptor.of((a, card.finite(replace) if k.is_infinite else k) for a, k in G.atoms)

