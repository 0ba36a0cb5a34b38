"""Coefficient rings F[u,v], F[v], F over the two-element field.

A polynomial is a frozen set of monomials (a, b) standing for u^a v^b.
Coefficients are implicit: a monomial in the set has coefficient 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Tuple

Monomial = Tuple[int, int]

# exponents beyond this are treated as a bug rather than a window
MAX_EXPONENT = 1 << 20


class Flavor(str, Enum):
    MINUS = "minus"
    CIRC = "circ"
    HAT = "hat"

    @classmethod
    def parse(cls, s: "str | Flavor") -> "Flavor":
        if isinstance(s, Flavor):
            return s
        try:
            return cls(s.lower())
        except ValueError:
            raise ValueError(f"unknown flavor {s!r} (expected minus, circ or hat)") from None


@dataclass(frozen=True, order=True)
class Bigrading:
    gr_w: int
    gr_z: int

    def __add__(self, other: "Bigrading") -> "Bigrading":
        return Bigrading(self.gr_w + other.gr_w, self.gr_z + other.gr_z)

    def __sub__(self, other: "Bigrading") -> "Bigrading":
        return Bigrading(self.gr_w - other.gr_w, self.gr_z - other.gr_z)

    def __neg__(self) -> "Bigrading":
        return Bigrading(-self.gr_w, -self.gr_z)

    def __iter__(self) -> Iterator[int]:
        yield self.gr_w
        yield self.gr_z

    def __repr__(self) -> str:
        return f"({self.gr_w},{self.gr_z})"

    @classmethod
    def of(cls, g: "Bigrading | Tuple[int, int]") -> "Bigrading":
        if isinstance(g, Bigrading):
            return g
        w, z = g
        return cls(int(w), int(z))


ZERO_GRADING = Bigrading(0, 0)
D_DEGREE = Bigrading(-1, -1)
PHI_DEGREE = Bigrading(1, -1)
PSI_DEGREE = Bigrading(-1, 1)


def monomial_bidegree(m: Monomial) -> Bigrading:
    a, b = m
    return Bigrading(-2 * a, -2 * b)


def monomial_for_shift(delta: Bigrading) -> "Monomial | None":
    """The monomial m with bidegree(m) == delta, if there is one."""
    w, z = delta
    if w > 0 or z > 0 or w % 2 or z % 2:
        return None
    return (-w // 2, -z // 2)


def _check(m: Monomial) -> Monomial:
    a, b = m
    if a < 0 or b < 0:
        raise ValueError(f"negative exponent in monomial {m}")
    if a > MAX_EXPONENT or b > MAX_EXPONENT:
        raise OverflowError(f"exponent overflow in monomial {m}")
    return (a, b)


class Poly:
    """Element of F[u,v]; immutable and hashable."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Monomial] = ()):
        acc: set = set()
        for m in terms:
            m = _check(m)
            if m in acc:
                acc.remove(m)
            else:
                acc.add(m)
        object.__setattr__(self, "terms", frozenset(acc))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def _raw(cls, terms: frozenset) -> "Poly":
        p = object.__new__(cls)
        object.__setattr__(p, "terms", terms)
        return p

    @classmethod
    def monomial(cls, a: int = 0, b: int = 0) -> "Poly":
        return cls._raw(frozenset([_check((a, b))]))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.terms)

    def __add__(self, other: "Poly") -> "Poly":
        return Poly._raw(self.terms ^ other.terms)

    __sub__ = __add__

    def __mul__(self, other: "Poly") -> "Poly":
        acc: set = set()
        for a1, b1 in self.terms:
            for a2, b2 in other.terms:
                m = _check((a1 + a2, b1 + b2))
                if m in acc:
                    acc.remove(m)
                else:
                    acc.add(m)
        return Poly._raw(frozenset(acc))

    def times_monomial(self, m: Monomial) -> "Poly":
        a, b = m
        return Poly._raw(frozenset(_check((x + a, y + b)) for x, y in self.terms))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def has_constant(self) -> bool:
        return (0, 0) in self.terms

    def sorted_terms(self) -> list:
        # highest total degree first, then by u exponent
        return sorted(self.terms, key=lambda m: (-(m[0] + m[1]), -m[0], -m[1]))

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


ZERO = Poly()
ONE = Poly.monomial(0, 0)
U = Poly.monomial(1, 0)
V = Poly.monomial(0, 1)


def poly_add(p: Poly, q: Poly) -> Poly:
    return p + q


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


def specialize(p: Poly, flavor: "Flavor | str") -> Poly:
    """Image of p in F[v] (circ, u = 0) or F (hat, u = v = 0)."""
    f = Flavor.parse(flavor)
    if f is Flavor.MINUS:
        return p
    if f is Flavor.CIRC:
        return Poly._raw(frozenset(m for m in p.terms if m[0] == 0))
    return Poly._raw(frozenset(m for m in p.terms if m == (0, 0)))


def u_derivative(p: Poly) -> Poly:
    """Formal d/du in characteristic two."""
    return Poly._raw(frozenset((a - 1, b) for a, b in p.terms if a % 2))


def v_derivative(p: Poly) -> Poly:
    return Poly._raw(frozenset((a, b - 1) for a, b in p.terms if b % 2))


def v_bits(p: Poly) -> int:
    """Pack the u-free part of p into an int, bit k for v^k."""
    out = 0
    for a, b in p.terms:
        if a == 0:
            out |= 1 << b
    return out


def _format_monomial(m: Monomial) -> str:
    a, b = m
    parts = []
    if a:
        parts.append("u" if a == 1 else f"u^{a}")
    if b:
        parts.append("v" if b == 1 else f"v^{b}")
    return " ".join(parts) if parts else "1"


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    return " + ".join(_format_monomial(m) for m in p.sorted_terms())


_TOKEN = re.compile(r"\s*(?:([uv])\s*(?:\^\s*(\d+))?|(\d+))")


def parse_poly(text: str) -> Poly:
    """Parse a literal like "u^2 + u v^3 + 1"; "0" is the zero polynomial."""
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial literal")
    if s == "0":
        return ZERO
    terms = []
    for chunk in s.split("+"):
        chunk = chunk.strip()
        if not chunk:
            raise ValueError(f"dangling '+' in polynomial literal {text!r}")
        a = b = 0
        pos = 0
        seen = False
        while pos < len(chunk):
            mt = _TOKEN.match(chunk, pos)
            if not mt or mt.end() == pos:
                raise ValueError(f"bad monomial {chunk!r} in {text!r}")
            var, exp, num = mt.groups()
            if num is not None:
                if num != "1":
                    raise ValueError(f"coefficient {num} not allowed over F2 in {text!r}")
            else:
                e = int(exp) if exp is not None else 1
                if var == "u":
                    a += e
                else:
                    b += e
            seen = True
            pos = mt.end()
            while pos < len(chunk) and chunk[pos] in " *":
                pos += 1
        if not seen:
            raise ValueError(f"bad monomial {chunk!r}")
        terms.append((a, b))
    return Poly(terms)


__all__ = [
    "Monomial", "Flavor", "Bigrading", "Poly", "ZERO", "ONE", "U", "V",
    "ZERO_GRADING", "D_DEGREE", "PHI_DEGREE", "PSI_DEGREE",
    "poly_add", "poly_mul", "specialize", "monomial_bidegree", "monomial_for_shift",
    "u_derivative", "v_derivative", "v_bits", "format_poly", "parse_poly",
]
