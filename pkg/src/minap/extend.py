"""Extending monomorphisms from a subgroup of a finite abelian group.

Given H <= G and an injective j: H -> (Q/Z)^n, :func:`extend_mono` returns
an injective j': G -> (Q/Z)^(n+s) with j'|H = (j, 0).  The first n
coordinates are any homomorphic extension j_0 of j (Q/Z is divisible, so one
exists; :func:`extend_hom` builds it one cyclic step at a time).  The last s
coordinates embed G/H.  If j'(g) = 0 then g lies in H because the G/H part
vanishes, and then j(g) = j_0(g) = 0 forces g = 0.

Everything is verified by enumeration, so groups are capped at
:data:`ORDER_BOUND` elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Iterable, Sequence

from sympy import ZZ, Matrix
from sympy.matrices.normalforms import smith_normal_decomp

from .qtorus import ZERO, TorusPoint

ORDER_BOUND = 10_000

Elem = tuple[int, ...]
Value = tuple[TorusPoint, ...]


class GroupTooLarge(ValueError):
    pass


class NotInjective(ValueError):
    pass


class NotAHomomorphism(ValueError):
    pass


@dataclass(frozen=True)
class FinAbGroup:
    """Z(d_1) x ... x Z(d_r) with d_1 | d_2 | ... | d_r, all d_i >= 2."""

    factors: tuple[int, ...]
    bound: int = field(default=ORDER_BOUND, compare=False)

    def __post_init__(self) -> None:
        f = tuple(int(d) for d in self.factors)
        object.__setattr__(self, "factors", f)
        if any(d < 2 for d in f):
            raise ValueError("invariant factors must be at least 2")
        if any(b % a for a, b in zip(f, f[1:])):
            raise ValueError(f"invariant factors {f} do not form a divisibility chain")
        if self.order > self.bound:
            raise GroupTooLarge(f"order {self.order} exceeds the bound {self.bound}")

    @classmethod
    def from_orders(cls, orders: Iterable[int], bound: int = ORDER_BOUND) -> FinAbGroup:
        """Invariant factors of a product of cyclic groups of the given orders."""
        orders = [int(n) for n in orders if int(n) != 1]
        if not orders:
            return cls((), bound)
        S, _, _ = smith_normal_decomp(Matrix.diag(*orders), domain=ZZ)
        return cls(tuple(abs(int(S[i, i])) for i in range(len(orders)) if abs(int(S[i, i])) != 1), bound)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def zero(self) -> Elem:
        return (0,) * self.rank

    @property
    def generators(self) -> tuple[Elem, ...]:
        return tuple(tuple(int(i == k) for i in range(self.rank)) for k in range(self.rank))

    def reduce(self, x: Sequence[int]) -> Elem:
        if len(x) != self.rank:
            raise ValueError(f"element {tuple(x)} has the wrong length for {self}")
        return tuple(int(a) % d for a, d in zip(x, self.factors))

    def add(self, x: Elem, y: Elem) -> Elem:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.factors))

    def neg(self, x: Elem) -> Elem:
        return tuple(-a % d for a, d in zip(x, self.factors))

    def scale(self, k: int, x: Elem) -> Elem:
        return tuple(k * a % d for a, d in zip(x, self.factors))

    def element_order(self, x: Elem) -> int:
        n = 1
        for a, d in zip(x, self.factors):
            n = n * (d // _gcd(a, d)) // _gcd(n, d // _gcd(a, d))
        return n

    def elements(self) -> list[Elem]:
        out = [()]
        for d in self.factors:
            out = [e + (a,) for e in out for a in range(d)]
        return out

    def closure(self, gens: Sequence[Elem]) -> list[Elem]:
        """Elements of <gens>, in a deterministic order."""
        elems = [self.zero]
        seen = {self.zero}
        for g in gens:
            g = self.reduce(g)
            frontier = list(elems)
            step = g
            while step not in seen:
                new = [self.add(e, step) for e in frontier]
                for e in new:
                    if e not in seen:
                        seen.add(e)
                        elems.append(e)
                step = self.add(step, g)
        return elems

    def __str__(self) -> str:
        return " x ".join(f"Z({d})" for d in self.factors) or "0"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


@dataclass(frozen=True)
class Subgroup:
    """H = <gens> in G, with a canonical basis and the quotient map.

    From the Smith form ``S = U M V`` of ``M = [gens; diag(d)]``, the lattice
    spanned by M is the row span of ``S V^{-1}``; hence x -> x V (coordinate i
    read mod s_i) is a surjection G -> G/H with kernel H.
    """

    parent: FinAbGroup
    gens: tuple[Elem, ...]
    basis: tuple[Elem, ...]
    factors: tuple[int, ...]
    quotient_factors: tuple[int, ...]
    _V: tuple[tuple[int, ...], ...] = field(repr=False)
    _s: tuple[int, ...] = field(repr=False)

    @property
    def order(self) -> int:
        return prod(self.factors)

    def quotient_coords(self, x: Elem) -> tuple[int, ...]:
        r = self.parent.rank
        out = []
        for i, s in enumerate(self._s):
            if s != 1:
                out.append(sum(x[k] * self._V[k][i] for k in range(r)) % s)
        return tuple(out)

    def __contains__(self, x: Elem) -> bool:
        return all(c == 0 for c in self.quotient_coords(self.parent.reduce(x)))

    def elements(self) -> list[Elem]:
        return self.parent.closure(self.basis)


def subgroup_of(G: FinAbGroup, gens: Iterable[Sequence[int]]) -> Subgroup:
    gens = tuple(G.reduce(g) for g in gens)
    r = G.rank
    if r == 0:
        return Subgroup(G, gens, (), (), (), (), ())
    rows = [list(g) for g in gens] + [[d if i == k else 0 for i in range(r)] for k, d in enumerate(G.factors)]
    M = Matrix(rows)
    S, _, V = smith_normal_decomp(M, domain=ZZ)
    s = [abs(int(S[i, i])) for i in range(r)]
    Vinv = V.inv()
    B = Matrix.diag(*s) * Vinv  # basis of the lattice spanned by M
    # coordinates of the relation lattice diag(d) in the basis B
    C = Matrix.diag(*G.factors) * B.inv()
    if any(c.q != 1 for c in C):
        raise AssertionError("relation lattice not contained in the subgroup lattice")
    S2, _, V2 = smith_normal_decomp(C, domain=ZZ)
    V2inv = V2.inv()
    basis, factors = [], []
    for i in range(r):
        si = abs(int(S2[i, i]))
        if si != 1:
            row = V2inv[i, :] * B
            basis.append(G.reduce([int(v) for v in row]))
            factors.append(si)
    order_pairs = sorted(zip(factors, basis))
    H = Subgroup(
        G,
        gens,
        tuple(b for _, b in order_pairs),
        tuple(f for f, _ in order_pairs),
        tuple(sorted(x for x in s if x != 1)),
        tuple(tuple(int(V[k, i]) for i in range(r)) for k in range(r)),
        tuple(s),
    )
    if H.order * prod(H.quotient_factors) != G.order:
        raise AssertionError("|H| * |G/H| != |G|")
    return H


@dataclass(frozen=True)
class TorusTupleHom:
    """A homomorphism <gens> -> (Q/Z)^dim, given by the images of ``gens``."""

    group: FinAbGroup
    gens: tuple[Elem, ...]
    images: tuple[Value, ...]
    dim: int

    def __post_init__(self) -> None:
        if len(self.gens) != len(self.images):
            raise ValueError("one image per generator")
        for v in self.images:
            if len(v) != self.dim or any(not x.is_rational for x in v):
                raise ValueError(f"image {v} is not a rational {self.dim}-tuple")
        self.table()  # well-definedness

    @classmethod
    def on_group(cls, G: FinAbGroup, images: Sequence[Sequence], dim: int | None = None) -> TorusTupleHom:
        imgs = tuple(tuple(_point(x) for x in v) for v in images)
        return cls(G, G.generators, imgs, dim if dim is not None else (len(imgs[0]) if imgs else 0))

    @classmethod
    def on(cls, H: Subgroup, images: Sequence[Sequence], dim: int | None = None, gens=None) -> TorusTupleHom:
        gens = H.gens if gens is None else tuple(H.parent.reduce(g) for g in gens)
        imgs = tuple(tuple(_point(x) for x in v) for v in images)
        return cls(H.parent, gens, imgs, dim if dim is not None else (len(imgs[0]) if imgs else 0))

    def table(self) -> dict[Elem, Value]:
        cached = self.__dict__.get("_table")
        if cached is not None:
            return cached
        G = self.group
        zero_v = (ZERO,) * self.dim
        table = {G.zero: zero_v}
        for g, v in zip(self.gens, self.images):
            g = G.reduce(g)
            current = list(table.items())
            step, val = g, v
            while True:
                for e, ve in current:
                    x = G.add(e, step)
                    y = _vadd(ve, val)
                    old = table.get(x)
                    if old is None:
                        table[x] = y
                    elif old != y:
                        raise NotAHomomorphism(f"images are inconsistent at {x}")
                if step == G.zero:
                    break
                step, val = G.add(step, g), _vadd(val, v)
        object.__setattr__(self, "_table", table)
        return table

    def __call__(self, x: Sequence[int]) -> Value:
        x = self.group.reduce(x)
        try:
            return self.table()[x]
        except KeyError:
            raise ValueError(f"{x} is outside the domain") from None

    @property
    def domain(self) -> list[Elem]:
        return list(self.table())

    def is_injective(self) -> bool:
        t = self.table()
        return len(set(t.values())) == len(t)

    def to_json(self) -> dict:
        return {
            "factors": list(self.group.factors),
            "gens": [list(g) for g in self.gens],
            "images": [[str(x) for x in v] for v in self.images],
        }


def _point(x) -> TorusPoint:
    return x if isinstance(x, TorusPoint) else TorusPoint(Fraction(x))


def _vadd(u: Value, v: Value) -> Value:
    return tuple(a + b for a, b in zip(u, v))


def extend_hom(H: Subgroup, j: TorusTupleHom) -> TorusTupleHom:
    """j_0: G -> (Q/Z)^n with j_0|H = j.

    Adjoins the canonical generators e_k one at a time; if d is the least
    positive integer with d*e_k in the current domain, e_k goes to the root
    y of d*y = j_0(d*e_k) with the least non-negative numerators, y = x/d.
    """
    G = H.parent
    if j.group != G:
        raise ValueError("hom is defined on a different group")
    table = dict(j.table())
    if set(table) != set(H.elements()):
        raise ValueError("hom domain differs from the subgroup")
    for g in G.generators:
        d, x = 1, g
        while x not in table:
            d, x = d + 1, G.add(x, g)
        if d == 1:
            continue
        y = tuple(TorusPoint(v.a / d) for v in table[x])
        current = list(table.items())
        for c in range(1, d):
            cg = G.scale(c, g)
            cy = tuple(v * c for v in y)
            for e, ve in current:
                table[G.add(e, cg)] = _vadd(ve, cy)
    images = tuple(table[g] for g in G.generators)
    j0 = TorusTupleHom(G, G.generators, images, j.dim)
    return j0


def quotient_embedding(H: Subgroup) -> TorusTupleHom:
    """G -> G/H -> (Q/Z)^s sending the i-th quotient coordinate q to q / s_i."""
    G = H.parent
    qf = [s for s in H._s if s != 1]
    images = tuple(
        tuple(TorusPoint(Fraction(c, s)) for c, s in zip(H.quotient_coords(g), qf)) for g in G.generators
    )
    return TorusTupleHom(G, G.generators, images, len(qf))


def extend_mono(H: Subgroup, j: TorusTupleHom) -> TorusTupleHom:
    """Injective j' = (j_0, j_1): G -> (Q/Z)^(n+s) with j'|H = (j, 0)."""
    if not j.is_injective():
        raise NotInjective("the given hom has a nontrivial kernel")
    j0 = extend_hom(H, j)
    j1 = quotient_embedding(H)
    G = H.parent
    images = tuple(a + b for a, b in zip(j0.images, j1.images))
    jp = TorusTupleHom(G, G.generators, images, j0.dim + j1.dim)
    return jp


def check_extension(H: Subgroup, j: TorusTupleHom, jp: TorusTupleHom) -> dict[str, bool]:
    """Full-enumeration checks: extension, homomorphism, injectivity.

    Values are compared as integer vectors mod L, L the common denominator.
    """
    G = H.parent
    pad = (ZERO,) * (jp.dim - j.dim)
    els = G.elements()
    vals = {g: jp(g) for g in els}
    L = 1
    for v in vals.values():
        for x in v:
            L = L * x.a.denominator // _gcd(L, x.a.denominator)
    enc = {g: tuple(int(x.a * L) for x in v) for g, v in vals.items()}
    hom = all(
        enc[G.add(a, b)] == tuple((u + w) % L for u, w in zip(enc[a], enc[b])) for a in els for b in els
    )
    return {
        "extends": all(vals[h] == j(h) + pad for h in H.elements()),
        "homomorphism": hom,
        "injective": len(set(enc.values())) == len(els),
    }


def all_homs(G: FinAbGroup, dim: int) -> Iterable[TorusTupleHom]:
    """Every homomorphism G -> (Q/Z)^dim (generator images of order dividing d_k)."""
    import itertools

    choices = []
    for d in G.factors:
        coord = [TorusPoint(Fraction(a, d)) for a in range(d)]
        choices.append(list(itertools.product(coord, repeat=dim)))
    for imgs in itertools.product(*choices):
        yield TorusTupleHom(G, G.generators, tuple(imgs), dim)
