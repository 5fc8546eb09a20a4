"""Independent brute-force oracles for finite groups and torus points."""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from math import gcd

from minap.descriptor import Cyclic, GroupDescriptor


def cyclic_orders(G: GroupDescriptor) -> list[int]:
    """Orders of the cyclic factors of a finite descriptor (one entry per copy)."""
    out = []
    for a, k in G.atoms:
        assert isinstance(a, Cyclic) and k.is_finite
        out.extend([a.p**a.i] * k.n)
    return out


def elements(orders: list[int]):
    return itertools.product(*(range(n) for n in orders))


def multiples(orders: list[int], m: int) -> set[tuple[int, ...]]:
    return {tuple(m * x % n for x, n in zip(e, orders)) for e in elements(orders)}


def torsion(orders: list[int], m: int) -> list[tuple[int, ...]]:
    return [e for e in elements(orders) if all(m * x % n == 0 for x, n in zip(e, orders))]


def element_order(e: tuple[int, ...], orders: list[int]) -> int:
    o = 1
    for x, n in zip(e, orders):
        k = n // gcd(x, n)
        o = o * k // gcd(o, k)
    return o


def order_profile(elems, orders: list[int]) -> Counter:
    """Number of elements of each order; determines a finite abelian group up to isomorphism."""
    return Counter(element_order(e, orders) for e in elems)


def group_order(orders: list[int]) -> int:
    out = 1
    for n in orders:
        out *= n
    return out


def preimages_in_open_arc(start: Fraction, length: Fraction, x: Fraction, k: int) -> list[Fraction]:
    """Nonzero y = (x + t)/k mod 1 with (y - start) mod 1 in (0, length); plain rationals."""
    out = []
    for t in range(k):
        y = ((x + t) / k) % 1
        d = (y - start) % 1
        if y != 0 and 0 < d < length:
            out.append(y)
    return out


# ------------------------------------------------------------ homomorphisms into (Q/Z)^n


def linear_values(factors, images):
    """{x: sum_k x_k * images_k mod 1} over all x in Z(d_1) x ... x Z(d_r).

    ``images`` are tuples of Fractions; the map is well defined iff d_k * images_k = 0.
    """
    for d, v in zip(factors, images):
        assert all((d * q) % 1 == 0 for q in v), "generator image order does not divide the factor"
    dim = len(images[0]) if images else 0
    out = {}
    for x in elements(list(factors)):
        out[x] = tuple(sum((c * v[i] for c, v in zip(x, images)), Fraction(0)) % 1 for i in range(dim))
    return out


def span_values(factors, gens, images):
    """Values of the hom on <gens> determined by ``gens -> images``; None if ill defined."""
    orders = [element_order(tuple(g), list(factors)) for g in gens]
    dim = len(images[0]) if images else 0
    out = {}
    for coeffs in itertools.product(*(range(o) for o in orders)):
        x = tuple(sum(c * g[k] for c, g in zip(coeffs, gens)) % d for k, d in enumerate(factors))
        v = tuple(sum((c * im[i] for c, im in zip(coeffs, images)), Fraction(0)) % 1 for i in range(dim))
        if out.setdefault(x, v) != v:
            return None
    return out
