"""Seeded random descriptors for sweeps and property tests."""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import cardinal as card
from .cardinal import ALEPH0, ALEPH1, CONTINUUM, Cardinal
from .descriptor import Cyclic, Free, GroupDescriptor, PAdic, PrimeSum, Pruefer, Rational, Tower

PRIMES = (2, 3, 5, 7)


@dataclass(frozen=True)
class SamplerConfig:
    primes: tuple[int, ...] = PRIMES
    max_level: int = 3
    max_atoms: int = 5
    finite_mults: tuple[int, ...] = (1, 2, 3)
    infinite_mults: tuple[Cardinal, ...] = (ALEPH0, ALEPH1, CONTINUUM)
    p_infinite: float = 0.5  # chance a multiplicity is infinite
    p_unbounded_atom: float = 0.25  # chance each atom is a non-cyclic one


def _mult(rng: random.Random, cfg: SamplerConfig, infinite_only: bool = False) -> Cardinal:
    if infinite_only or rng.random() < cfg.p_infinite:
        return rng.choice(cfg.infinite_mults)
    return card.finite(rng.choice(cfg.finite_mults))


def _noncyclic_atom(rng: random.Random, cfg: SamplerConfig):
    kind = rng.randrange(6)
    p = rng.choice(cfg.primes)
    if kind == 0:
        return Pruefer(p)
    if kind == 1:
        return Tower(p)
    if kind == 2:
        start = rng.choice((2, 3, 5, 11))
        excluded = frozenset(q for q in (13, 17, 19) if rng.random() < 0.3)
        return PrimeSum(start, excluded)
    if kind == 3:
        return Free()
    if kind == 4:
        return Rational()
    return PAdic(p)


def random_descriptor(
    rng: random.Random, cfg: SamplerConfig = SamplerConfig(), *, bounded: bool | None = None
) -> GroupDescriptor:
    """Random normal-form descriptor.  ``bounded=True`` uses only cyclic atoms,
    ``bounded=False`` forces at least one non-cyclic atom."""
    n = rng.randint(1, cfg.max_atoms)
    pairs = []
    for _ in range(n):
        if bounded is not True and rng.random() < cfg.p_unbounded_atom:
            pairs.append((_noncyclic_atom(rng, cfg), _mult(rng, cfg)))
        else:
            a = Cyclic(rng.choice(cfg.primes), rng.randint(1, cfg.max_level))
            pairs.append((a, _mult(rng, cfg)))
    if bounded is False and all(isinstance(a, Cyclic) for a, _ in pairs):
        pairs.append((_noncyclic_atom(rng, cfg), _mult(rng, cfg)))
    return GroupDescriptor.of(pairs)


def random_descriptors(seed: int, count: int, cfg: SamplerConfig = SamplerConfig(), **kw) -> list[GroupDescriptor]:
    rng = random.Random(seed)
    return [random_descriptor(rng, cfg, **kw) for _ in range(count)]
