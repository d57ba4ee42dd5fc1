"""Parse and print ring descriptions such as ``Z4 x GF(3^2) x F2[x]/(x^3)``.

Grammar (whitespace is ignored between tokens)::

    spec  ::= term ("x" term)*
    term  ::= "Z" n
            | "GF(" p ["^" k] ")"
            | "F" p "[" var "]/(" poly ")"
            | "F" p "[" var ("," var)+ "]/(" monomial ("," monomial)* ")"

``poly`` is caret notation (``x^3 + 2x + 1``); monomials are products of
powers (``x^2``, ``xy``, ``x*y^3``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import InvalidParameter, SpecSyntaxError
from .rings import (
    DEFAULT_ORDER_CAP,
    FiniteRing,
    _is_prime,
    _monomial_str,
    make_galois_field,
    make_monomial_quotient,
    make_univariate_quotient,
    make_zmod,
    poly_to_str,
    product,
)


@dataclass(frozen=True)
class ZMod:
    n: int


@dataclass(frozen=True)
class GaloisField:
    p: int
    k: int = 1


@dataclass(frozen=True)
class UnivariateQuotient:
    p: int
    coefficients: tuple  # low to high
    var: str = "x"


@dataclass(frozen=True)
class MonomialQuotient:
    p: int
    variables: tuple
    generators: tuple  # exponent vectors

    @property
    def m(self) -> int:
        return len(self.variables)


@dataclass(frozen=True)
class Product:
    terms: tuple


RingSpec = Union[ZMod, GaloisField, UnivariateQuotient, MonomialQuotient, Product]


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg, pos=None):
        pos = self.pos if pos is None else pos
        raise SpecSyntaxError(msg, len(self.text[:pos].encode("utf-8")))

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, s):
        self.skip()
        return self.text.startswith(s, self.pos)

    def expect(self, s):
        if not self.peek(s):
            self.error(f"expected {s!r}")
        self.pos += len(s)

    def number(self):
        self.skip()
        m = re.compile(r"\d+").match(self.text, self.pos)
        if not m:
            self.error("expected a number")
        self.pos = m.end()
        return int(m.group())

    def ident(self):
        self.skip()
        m = re.compile(r"[A-Za-z][A-Za-z0-9_]*").match(self.text, self.pos)
        if not m:
            self.error("expected a variable name")
        self.pos = m.end()
        return m.group()

    def parse(self) -> RingSpec:
        terms = [self.term()]
        while True:
            self.skip()
            if self.pos == len(self.text):
                break
            if self.text[self.pos] in "x×*":
                self.pos += 1
                terms.append(self.term())
            else:
                self.error("expected ' x ' between factors or end of input")
        return terms[0] if len(terms) == 1 else Product(tuple(terms))

    def term(self):
        self.skip()
        start = self.pos
        if self.peek("GF("):
            self.expect("GF(")
            p = self.number()
            k = 1
            if self.peek("^"):
                self.expect("^")
                k = self.number()
            self.expect(")")
            if not _is_prime(p):
                self.error(f"GF characteristic {p} is not prime", start)
            if k < 1:
                self.error("extension degree must be >= 1", start)
            return GaloisField(p, k)
        if self.peek("Z"):
            self.expect("Z")
            n = self.number()
            if n < 2:
                self.error("Z_n needs n >= 2", start)
            return ZMod(n)
        if self.peek("F"):
            self.expect("F")
            p = self.number()
            if not _is_prime(p):
                self.error(f"characteristic {p} is not prime", start)
            self.expect("[")
            names = [self.ident()]
            while self.peek(","):
                self.expect(",")
                names.append(self.ident())
            self.expect("]")
            self.expect("/")
            self.expect("(")
            if len(set(names)) != len(names):
                self.error("repeated variable name", start)
            if len(names) == 1:
                coeffs = self.poly(p, names[0])
                self.expect(")")
                return UnivariateQuotient(p, coeffs, names[0])
            gens = [self.monomial(names)]
            while self.peek(","):
                self.expect(",")
                gens.append(self.monomial(names))
            self.expect(")")
            return MonomialQuotient(p, tuple(names), tuple(gens))
        self.error("unsupported constructor (expected Z, GF or F)")

    def _power(self, var):
        self.expect(var)
        if self.peek("^"):
            self.expect("^")
            return self.number()
        return 1

    def poly(self, p, var):
        coeffs = {}
        sign = 1
        if self.peek("-"):
            self.expect("-")
            sign = -1
        while True:
            self.skip()
            c = 1
            has_coeff = False
            if self.pos < len(self.text) and self.text[self.pos].isdigit():
                c = self.number()
                has_coeff = True
                if self.peek("*"):
                    self.expect("*")
            if self.peek(var):
                e = self._power(var)
            elif has_coeff:
                e = 0
            else:
                self.error("expected a term")
            coeffs[e] = coeffs.get(e, 0) + sign * c
            if self.peek("+"):
                self.expect("+")
                sign = 1
            elif self.peek("-"):
                self.expect("-")
                sign = -1
            else:
                break
        deg = max(coeffs)
        return tuple(coeffs.get(i, 0) % p for i in range(deg + 1))

    def monomial(self, names):
        exps = [0] * len(names)
        order = sorted(range(len(names)), key=lambda i: -len(names[i]))
        got = False
        while True:
            self.skip()
            for i in order:
                if self.text.startswith(names[i], self.pos):
                    exps[i] += self._power(names[i])
                    got = True
                    break
            else:
                break
            if self.peek("*"):
                self.expect("*")
        if not got:
            self.error("expected a monomial")
        return tuple(exps)


def parse_spec(text: str) -> RingSpec:
    return _Parser(text).parse()


def normalize(spec: RingSpec) -> str:
    if isinstance(spec, Product):
        return " x ".join(normalize(t) for t in spec.terms)
    if isinstance(spec, ZMod):
        return f"Z{spec.n}"
    if isinstance(spec, GaloisField):
        return f"GF({spec.p}^{spec.k})"
    if isinstance(spec, UnivariateQuotient):
        return f"F{spec.p}[{spec.var}]/({poly_to_str(list(spec.coefficients), spec.var)})"
    if isinstance(spec, MonomialQuotient):
        gens = ", ".join("*".join(_monomial_str(tuple(e if j == i else 0 for j in range(spec.m)), spec.variables)
                                  for i, e in enumerate(g) if e) for g in spec.generators)
        return f"F{spec.p}[{','.join(spec.variables)}]/({gens})"
    raise TypeError(f"not a ring spec: {spec!r}")


def build(spec: Union[RingSpec, str], cap: int = DEFAULT_ORDER_CAP) -> FiniteRing:
    """Construct the ring described by ``spec`` (text or parse tree)."""
    if isinstance(spec, str):
        spec = parse_spec(spec)
    if isinstance(spec, Product):
        return product([build(t, cap) for t in spec.terms], cap)
    if isinstance(spec, ZMod):
        return make_zmod(spec.n, cap)
    if isinstance(spec, GaloisField):
        return make_galois_field(spec.p, spec.k, cap)
    if isinstance(spec, UnivariateQuotient):
        return make_univariate_quotient(spec.p, list(spec.coefficients), cap, name=normalize(spec))
    if isinstance(spec, MonomialQuotient):
        return make_monomial_quotient(spec.p, spec.m, [list(g) for g in spec.generators], cap, name=normalize(spec))
    raise InvalidParameter(f"not a ring spec: {spec!r}")
