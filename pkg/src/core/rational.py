"""Exact rationals, root sets and root multisets.

Roots are always stored as roots of b(-s), so every stored value is a
strictly positive rational.
"""

from __future__ import annotations

import math
import operator
import re
from collections import Counter
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from src.errors import ValidationError

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")

_OPS = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse "p/q" (or an integer) into a reduced Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ValidationError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    match = _RATIONAL_RE.match(str(text))
    if match is None:
        raise ValidationError(f"not a rational: {text!r}")
    num, den = match.groups()
    den = int(den) if den is not None else 1
    if den == 0:
        raise ValidationError(f"zero denominator in {text!r}")
    return Fraction(int(num), den)


def format_rational(value: Fraction | int) -> str:
    """Serialize as "p/q", dropping the denominator when it is 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def rational_arith(a: Fraction, b: Fraction, op: str) -> Fraction | int:
    """Exact arithmetic on two rationals.

    `op` is one of add, sub, mul, div or cmp; cmp returns -1, 0 or 1.
    Division by zero raises ZeroDivisionError.
    """
    a, b = Fraction(a), Fraction(b)
    if op == "cmp":
        return (a > b) - (a < b)
    if op not in _OPS:
        raise ValueError(f"Unknown rational operation: {op}")
    return _OPS[op](a, b)


def binomial(m: int, r: int) -> int:
    """Binomial coefficient, zero when r > m."""
    if m < 0 or r < 0:
        return 0
    return math.comb(m, r)


def fractional_part(value: Fraction) -> Fraction:
    return value - math.floor(value)


def _check_positive(root: Fraction) -> Fraction:
    root = Fraction(root)
    if root <= 0:
        raise ValidationError(f"roots of b(-s) must be positive, got {format_rational(root)}")
    return root


@dataclass(frozen=True)
class RootSet:
    """A finite set of positive rational roots.

    `truncated` marks sets that are only exact below some degree bound.
    """

    roots: frozenset[Fraction] = field(default_factory=frozenset)
    truncated: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "roots", frozenset(_check_positive(r) for r in self.roots))

    @classmethod
    def of(cls, values: Iterable, truncated: bool = False) -> RootSet:
        return cls(frozenset(Fraction(v) for v in values), truncated)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.sorted())

    def __len__(self) -> int:
        return len(self.roots)

    def __contains__(self, value: object) -> bool:
        return value in self.roots

    def __or__(self, other: RootSet) -> RootSet:
        return RootSet(self.roots | other.roots, self.truncated or other.truncated)

    def sorted(self) -> list[Fraction]:
        return sorted(self.roots)

    def below(self, bound: Fraction, inclusive: bool = True) -> RootSet:
        keep = operator.le if inclusive else operator.lt
        return RootSet(frozenset(r for r in self.roots if keep(r, bound)), self.truncated)

    @property
    def min_root(self) -> Fraction:
        if not self.roots:
            raise ValidationError("empty root set has no minimum")
        return min(self.roots)

    def to_json(self) -> list[str]:
        return [format_rational(r) for r in self.sorted()]


@dataclass(frozen=True)
class RootMultiset:
    """Roots of b(-s) with multiplicities, kept sorted by root."""

    entries: tuple[tuple[Fraction, int], ...] = ()

    def __post_init__(self) -> None:
        merged: Counter = Counter()
        for root, mult in self.entries:
            if int(mult) < 1:
                raise ValidationError(f"multiplicity must be positive, got {mult}")
            merged[_check_positive(root)] += int(mult)
        object.__setattr__(self, "entries", tuple(sorted(merged.items())))

    @classmethod
    def from_mapping(cls, mapping: Mapping) -> RootMultiset:
        return cls(tuple((Fraction(k), v) for k, v in mapping.items()))

    @classmethod
    def from_factors(cls, roots: Iterable) -> RootMultiset:
        """Count repeated roots, e.g. from the linear factors of a product."""
        return cls.from_mapping(Counter(Fraction(r) for r in roots))

    def as_dict(self) -> dict[Fraction, int]:
        return dict(self.entries)

    def multiplicity(self, root: Fraction) -> int:
        return self.as_dict().get(Fraction(root), 0)

    @property
    def roots(self) -> list[Fraction]:
        return [r for r, _ in self.entries]

    @property
    def min_root(self) -> Fraction:
        if not self.entries:
            raise ValidationError("empty root multiset has no minimum")
        return self.entries[0][0]

    @property
    def max_root(self) -> Fraction:
        if not self.entries:
            raise ValidationError("empty root multiset has no maximum")
        return self.entries[-1][0]

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, value: object) -> bool:
        return value in self.as_dict()

    def to_root_set(self) -> RootSet:
        return RootSet(frozenset(self.roots))

    def to_json(self) -> list[list]:
        return [[format_rational(r), m] for r, m in self.entries]
