"""Sparse polynomials with integer coefficients in generators ``h[i]``.

A :class:`Monomial` is a tuple of ``(generator, exponent)`` pairs sorted by
generator with positive exponents; the empty tuple is the monomial 1.
A :class:`Polynomial` maps monomials to nonzero Python ints.
"""
from __future__ import annotations

import re
from collections import Counter
from typing import Callable, Iterable, Iterator, Mapping

from .errors import NotHomogeneous, ParseError


class Monomial(tuple):
    __slots__ = ()

    def __new__(cls, pairs: Iterable[tuple[int, int]] = ()):
        return super().__new__(cls, pairs)

    @classmethod
    def from_exponents(cls, exps: Mapping[int, int]) -> "Monomial":
        return cls(sorted((f, a) for f, a in exps.items() if a))

    @classmethod
    def from_factors(cls, factors: Iterable[int]) -> "Monomial":
        """Monomial from a list of generators, repeated for powers."""
        return cls.from_exponents(Counter(factors))

    @property
    def degree(self) -> int:
        return sum(a for _, a in self)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(f for f, _ in self)

    def exponents(self) -> dict[int, int]:
        return dict(self)

    def factors(self) -> list[int]:
        """Generators with multiplicity, as a flat list."""
        return [f for f, a in self for _ in range(a)]

    def __mul__(self, other: "Monomial") -> "Monomial":
        if not other:
            return self
        if not self:
            return other
        exps = dict(self)
        for f, a in other:
            exps[f] = exps.get(f, 0) + a
        return Monomial(sorted(exps.items()))

    def __str__(self):
        if not self:
            return "1"
        return "*".join(f"h[{f}]" if a == 1 else f"h[{f}]^{a}" for f, a in self)

    def __repr__(self):
        return f"Monomial({tuple(self)!r})"


ONE = Monomial()


class Polynomial:
    """Finitely supported map Monomial -> int with no zero coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        self.terms: dict[Monomial, int] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    self.terms[Monomial(m)] = c

    @classmethod
    def monomial(cls, m: Monomial | Iterable[tuple[int, int]], coeff: int = 1) -> "Polynomial":
        return cls({Monomial(m): coeff})

    @classmethod
    def gen(cls, f: int, power: int = 1) -> "Polynomial":
        return cls({Monomial(((f, power),)) if power else ONE: 1})

    @classmethod
    def constant(cls, c: int) -> "Polynomial":
        return cls({ONE: c})

    @classmethod
    def _raw(cls, terms: dict) -> "Polynomial":
        p = cls.__new__(cls)
        p.terms = terms
        return p

    def __iter__(self) -> Iterator[tuple[Monomial, int]]:
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def coeff(self, m: Monomial) -> int:
        return self.terms.get(Monomial(m), 0)

    def copy(self) -> "Polynomial":
        return Polynomial._raw(dict(self.terms))

    def _combine(self, other, sign):
        if isinstance(other, int):
            other = Polynomial.constant(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + sign * c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        return (-self)._combine(other, 1)

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return Polynomial()
            return Polynomial._raw({m: c * other for m, c in self.terms.items()})
        out: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Polynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def degrees(self) -> set[int]:
        return {m.degree for m in self.terms}

    def homogeneous_degree(self) -> int | None:
        """The common degree of all terms, None for the zero polynomial."""
        degs = self.degrees()
        if len(degs) > 1:
            raise NotHomogeneous(f"polynomial has terms in degrees {sorted(degs)}")
        return degs.pop() if degs else None

    def homogeneous_parts(self) -> dict[int, "Polynomial"]:
        parts: dict[int, dict] = {}
        for m, c in self.terms.items():
            parts.setdefault(m.degree, {})[m] = c
        return {d: Polynomial._raw(t) for d, t in sorted(parts.items())}

    def map_generators(self, fn: Callable[[int], int | None]) -> "Polynomial":
        """Substitute ``h[f] -> h[fn(f)]``; ``None`` sends the generator to 0."""
        out: dict[Monomial, int] = {}
        for m, c in self.terms.items():
            factors = []
            for f, a in m:
                g = fn(f)
                if g is None:
                    break
                factors.extend([g] * a)
            else:
                mm = Monomial.from_factors(factors)
                v = out.get(mm, 0) + c
                if v:
                    out[mm] = v
                else:
                    out.pop(mm, None)
        return Polynomial._raw(out)

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda t: (t[0].degree, t[0]))

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def format_polynomial(p: Polynomial) -> str:
    """Canonical text: terms by (degree, monomial), e.g. ``3*h[2]^2*h[5] - h[7]``."""
    if not p.terms:
        return "0"
    parts = []
    for i, (m, c) in enumerate(p.sorted_terms()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not m:
            body = str(a)
        elif a == 1:
            body = str(m)
        else:
            body = f"{a}*{m}"
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|(h\s*\[\s*([A-Za-z0-9_]+)\s*\])|(\^)|(\*)|(\+)|(-)|(\()|(\)))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[start]!r}", start)
        start = mt.start() + (len(mt.group(0)) - len(mt.group(0).lstrip()))
        if mt.group(1):
            tokens.append(("int", int(mt.group(1)), start))
        elif mt.group(2):
            tokens.append(("gen", mt.group(3), start))
        else:
            sym = next(g for g in mt.groups()[3:] if g)
            tokens.append((sym, sym, start))
        pos = mt.end()
    tokens.append(("end", None, len(text)))
    return tokens


def parse_polynomial(text: str, resolve: Callable[[str, int], int] | None = None) -> Polynomial:
    """Parse the CLI grammar.

    ``resolve(name, position)`` maps the text inside ``h[...]`` to a
    generator id; by default only decimal indices are accepted.
    """
    if resolve is None:
        def resolve(name, position):
            if not name.isdigit():
                raise ParseError(f"generator index {name!r} is not an integer", position)
            return int(name)

    tokens = _tokenize(text)
    i = 0

    def peek():
        return tokens[i]

    def take(kind):
        nonlocal i
        tok = tokens[i]
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1] if tok[1] is not None else 'end of input'!r}", tok[2])
        i += 1
        return tok

    def expr():
        nonlocal i
        sign = 1
        if peek()[0] in ("+", "-"):
            sign = -1 if take(peek()[0])[0] == "-" else 1
        total = term() * sign
        while peek()[0] in ("+", "-"):
            op = take(peek()[0])[0]
            t = term()
            total = total + t if op == "+" else total - t
        return total

    def term():
        value = factor()
        while peek()[0] == "*":
            take("*")
            value = value * factor()
        return value

    def factor():
        nonlocal i
        tok = peek()
        if tok[0] == "int":
            take("int")
            base = Polynomial.constant(tok[1])
        elif tok[0] == "gen":
            take("gen")
            base = Polynomial.gen(resolve(tok[1], tok[2]))
        elif tok[0] == "(":
            take("(")
            base = expr()
            take(")")
        elif tok[0] == "-":
            take("-")
            return -factor()
        else:
            raise ParseError(f"unexpected {tok[1] if tok[1] is not None else 'end of input'!r}", tok[2])
        if peek()[0] == "^":
            take("^")
            exp = take("int")[1]
            base = base ** exp
        return base

    result = expr()
    if peek()[0] != "end":
        tok = peek()
        raise ParseError(f"unexpected {tok[1]!r}", tok[2])
    return result
