"""Polynomials in t with rational exponents and integer coefficients.

All arithmetic rescales exponents to a common denominator D and works in
Z[s, 1/s] with s = t^(1/D), using sympy's exact polynomial routines.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction

import sympy as sp

from src.core.rational import format_rational
from src.errors import InexactDivisionError

_S = sp.Symbol("s")


def _common_denominator(*polys: FractionalPolynomial) -> int:
    return math.lcm(1, *(e.denominator for p in polys for e in p.terms))


@dataclass(frozen=True)
class FractionalPolynomial:
    """Sum of c * t^e with e rational and c a nonzero integer."""

    terms: Mapping[Fraction, int]

    def __post_init__(self) -> None:
        clean = {Fraction(e): int(c) for e, c in dict(self.terms).items() if int(c) != 0}
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def monomial(cls, exponent: Fraction | int, coefficient: int = 1) -> FractionalPolynomial:
        return cls({Fraction(exponent): coefficient})

    @classmethod
    def from_terms(cls, pairs: Iterable[tuple[Fraction, int]]) -> FractionalPolynomial:
        acc: dict[Fraction, int] = {}
        for e, c in pairs:
            acc[Fraction(e)] = acc.get(Fraction(e), 0) + int(c)
        return cls(acc)

    def __iter__(self) -> Iterator[tuple[Fraction, int]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FractionalPolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def __repr__(self) -> str:
        return f"FractionalPolynomial({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*t^{format_rational(e)}" for e, c in self.terms.items())

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def exponents(self) -> list[Fraction]:
        return list(self.terms)

    def coefficient(self, exponent: Fraction) -> int:
        return self.terms.get(Fraction(exponent), 0)

    def total_mass(self) -> int:
        """Sum of the coefficients, i.e. the value at t = 1."""
        return sum(self.terms.values())

    def mirrored(self, center: Fraction) -> FractionalPolynomial:
        """Apply e -> 2 * center - e to every exponent."""
        return FractionalPolynomial({2 * Fraction(center) - e: c for e, c in self.terms.items()})

    def __add__(self, other: FractionalPolynomial) -> FractionalPolynomial:
        return FractionalPolynomial.from_terms([*self.terms.items(), *other.terms.items()])

    def __neg__(self) -> FractionalPolynomial:
        return FractionalPolynomial({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: FractionalPolynomial) -> FractionalPolynomial:
        return self + (-other)

    def _to_poly(self, denom: int) -> tuple[sp.Poly, int]:
        """Return (P, shift) with self = s^shift * P(s) and P(0) != 0."""
        scaled = {int(e * denom): c for e, c in self.terms.items()}
        shift = min(scaled) if scaled else 0
        coeffs = {(k - shift,): c for k, c in scaled.items()}
        return sp.Poly.from_dict(coeffs or {(0,): 0}, _S, domain=sp.ZZ), shift

    @classmethod
    def _from_poly(cls, poly: sp.Poly, shift: int, denom: int) -> FractionalPolynomial:
        return cls(
            {Fraction(k[0] + shift, denom): int(c) for k, c in poly.as_dict().items()}
        )

    def __mul__(self, other: FractionalPolynomial) -> FractionalPolynomial:
        if self.is_zero() or other.is_zero():
            return FractionalPolynomial({})
        denom = _common_denominator(self, other)
        p, ps = self._to_poly(denom)
        q, qs = other._to_poly(denom)
        return self._from_poly(p * q, ps + qs, denom)

    def exact_div(self, other: FractionalPolynomial) -> FractionalPolynomial:
        """Quotient self / other, raising when the division leaves a remainder."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return FractionalPolynomial({})
        denom = _common_denominator(self, other)
        p, ps = self._to_poly(denom)
        q, qs = other._to_poly(denom)
        quotient, remainder = sp.div(p, q, domain=sp.QQ)
        if not remainder.is_zero or any(c.q != 1 for c in quotient.coeffs()):
            raise InexactDivisionError(f"inexact division: ({self}) / ({other})")
        quotient = sp.Poly(quotient.as_expr(), _S, domain=sp.ZZ)
        return self._from_poly(quotient, ps - qs, denom)

    def __truediv__(self, other: FractionalPolynomial) -> FractionalPolynomial:
        return self.exact_div(other)

    def to_json(self) -> list[list]:
        return [[format_rational(e), c] for e, c in self.terms.items()]


def frac_poly_mul_div(
    p: FractionalPolynomial, q: FractionalPolynomial, op: str
) -> FractionalPolynomial:
    """Product (op="mul") or exact quotient (op="exact_div") of two polynomials."""
    if op == "mul":
        return p * q
    if op == "exact_div":
        return p.exact_div(q)
    raise ValueError(f"Unknown polynomial operation: {op}")
