"""Surface syntax for descriptors, designators, torus points and step functions.

Descriptor grammar (whitespace is insignificant)::

    group := '0' | term ('+' term)*
    term  := atom ('^' mult)?
    atom  := 'Z' | 'Q' | 'Z(' n ')' | 'Z(' p '^' i ')' | 'Z(' p '^inf' ')'
           | 'Tower(' p ')' | 'Primes(' rule ')' | 'Jp(' p ')'
    rule  := ('all' | 'ge' k) ('-' p (',' p)*)?
    mult  := nat | 'w' | 'w1' | 'c'

``Z(n)`` with composite n is split into its primary components.  The
``'-' primes`` suffix of a prime rule lists excluded primes; the formatter
emits it when multiplication has removed primes from a prime sum.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from sympy import isprime

from . import cardinal as card
from .cardinal import Cardinal
from .descriptor import (
    Choice,
    Cyclic,
    Free,
    GroupDescriptor,
    PAdic,
    PrimeSum,
    Pruefer,
    Rational,
    SubgroupDesignator,
    Tower,
    cyclic_group,
    kernel_designator,
    multiple_designator,
)


class ParseError(ValueError):
    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        super().__init__(message if pos is None else f"{message} (at position {pos})")


class NotPrime(ParseError):
    pass


class CardinalOutOfRange(ParseError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z]+\d*)|(\S))")


@dataclass(frozen=True)
class _Tok:
    kind: str  # 'num' | 'id' | 'sym' | 'end'
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            toks.append(_Tok("num", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(_Tok("id", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            toks.append(_Tok("sym", m.group(3), m.start(3)))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.k = 0

    @property
    def cur(self) -> _Tok:
        return self.toks[self.k]

    def take(self) -> _Tok:
        t = self.toks[self.k]
        self.k += 1
        return t

    def expect(self, kind: str, text: str | None = None) -> _Tok:
        t = self.cur
        if t.kind != kind or (text is not None and t.text != text):
            want = text if text is not None else kind
            got = t.text or "end of input"
            raise ParseError(f"expected {want!r}, got {got!r}", t.pos)
        return self.take()

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.cur
        return t.kind == kind and (text is None or t.text == text)

    def number(self) -> int:
        return int(self.expect("num").text)

    def prime(self) -> int:
        t = self.cur
        p = self.number()
        if not isprime(p):
            raise NotPrime(f"{p} is not a prime", t.pos)
        return p

    # group := '0' | term ('+' term)*
    def group(self) -> GroupDescriptor:
        if self.at("num", "0"):
            self.take()
            self.expect("end")
            return GroupDescriptor()
        parts = [self.term()]
        while self.at("sym", "+"):
            self.take()
            parts.append(self.term())
        self.expect("end")
        return GroupDescriptor.of(pair for g in parts for pair in g.atoms)

    def term(self) -> GroupDescriptor:
        start = self.cur.pos
        atoms = self.atom()
        mult = card.ONE
        if self.at("sym", "^"):
            self.take()
            mult = self.mult()
        if isinstance(atoms, GroupDescriptor):
            # a composite Z(n): every primary component gets the multiplicity
            return GroupDescriptor.of((a, mult) for a, _ in atoms.atoms)
        if atoms is None:
            raise ParseError("empty atom", start)
        return GroupDescriptor.of([(atoms, mult)])

    def mult(self) -> Cardinal:
        t = self.cur
        if t.kind == "num":
            return card.finite(self.number())
        if t.kind == "id":
            self.take()
            if t.text in ("w", "w1", "c"):
                return card.parse_cardinal(t.text)
            raise CardinalOutOfRange(f"multiplicity {t.text!r} is outside {{n, w, w1, c}}", t.pos)
        raise ParseError("expected a multiplicity (n, w, w1 or c)", t.pos)

    def atom(self):
        t = self.expect("id")
        name = t.text
        if name == "Q":
            return Rational()
        if name == "Z":
            if not self.at("sym", "("):
                return Free()
            self.take()
            n_tok = self.cur
            n = self.number()
            if self.at("sym", "^"):
                self.take()
                if not isprime(n):
                    raise NotPrime(f"{n} is not a prime", n_tok.pos)
                if self.at("id", "inf"):
                    self.take()
                    self.expect("sym", ")")
                    return Pruefer(n)
                i = self.number()
                self.expect("sym", ")")
                if i == 0:
                    return GroupDescriptor()
                return Cyclic(n, i)
            self.expect("sym", ")")
            if n == 0:
                raise ParseError("Z(0) is not a finite cyclic group; write Z", n_tok.pos)
            return cyclic_group(n)
        if name in ("Tower", "Jp"):
            self.expect("sym", "(")
            p = self.prime()
            self.expect("sym", ")")
            return Tower(p) if name == "Tower" else PAdic(p)
        if name == "Primes":
            self.expect("sym", "(")
            rule = self.expect("id")
            if rule.text == "all":
                start = 2
            elif rule.text == "ge":
                start = self.number()
            elif rule.text.startswith("ge") and rule.text[2:].isdigit():
                start = int(rule.text[2:])
            else:
                raise ParseError(f"unknown prime rule {rule.text!r}", rule.pos)
            if start < 2:
                raise ParseError("prime rule needs ge k with k >= 2", rule.pos)
            excluded = []
            if self.at("sym", "-"):
                self.take()
                excluded.append(self.prime())
                while self.at("sym", ","):
                    self.take()
                    excluded.append(self.prime())
            self.expect("sym", ")")
            return PrimeSum(start, frozenset(excluded))
        raise ParseError(f"unknown atom {name!r}", t.pos)


def parse_descriptor(text: str) -> GroupDescriptor:
    if not text.strip():
        raise ParseError("empty descriptor", 0)
    return _Parser(text).group()


def format_descriptor(G: GroupDescriptor) -> str:
    return str(G)


# ----------------------------------------------------------- designators


def parse_designator(G: GroupDescriptor, text: str) -> SubgroupDesignator:
    """Designator syntax.

    ``full``, ``G[m]`` (the m-torsion), ``mG`` (the multiple, e.g. ``3G``), or
    an explicit list ``idx:term; idx:term`` where ``idx`` is the 0-based atom
    position in G's normal form and ``term`` is a single-atom descriptor term
    such as ``Z(2)^w``.
    """
    t = text.strip()
    if t == "full":
        return SubgroupDesignator.full(G)
    m = re.fullmatch(r"G\[(\d+)\]", t)
    if m:
        return kernel_designator(G, int(m.group(1)))
    m = re.fullmatch(r"(\d+)\s*\*?\s*G", t)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise ParseError("mG needs m >= 1", 0)
        return multiple_designator(G, n)
    choices = []
    for chunk in t.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        idx_text, sep, term_text = chunk.partition(":")
        if not sep or not idx_text.strip().isdigit():
            raise ParseError(f"designator item {chunk!r} should look like 'idx:atom^mult'", 0)
        sub = parse_descriptor(term_text)
        if len(sub.atoms) != 1:
            raise ParseError(f"designator item {chunk!r} must name exactly one atom", 0)
        atom, mult = sub.atoms[0]
        choices.append(Choice(int(idx_text), atom, mult))
    if not choices:
        raise ParseError("empty designator", 0)
    return SubgroupDesignator(G, tuple(choices))


def format_designator(H: SubgroupDesignator) -> str:
    return "; ".join(
        f"{c.index}:{GroupDescriptor(((c.atom, c.mult),))}" for c in H.choices
    )


# ----------------------------------------------------------- rationals


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational number: {text!r}") from exc


def format_fraction(q: Fraction) -> str:
    return str(q)
