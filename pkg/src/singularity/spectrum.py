"""Spectra and exponents of weighted-homogeneous isolated singularities."""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from src.core.fracpoly import FractionalPolynomial
from src.core.rational import RootMultiset, RootSet, format_rational, parse_rational
from src.errors import InexactDivisionError, PreconditionError, ValidationError

log = logging.getLogger(__name__)

_ONE = FractionalPolynomial.monomial(0)
_T = FractionalPolynomial.monomial(1)


@dataclass(frozen=True)
class WeightVector:
    """Weights (w_1, ..., w_n) of a weighted-homogeneous polynomial, each in (0, 1)."""

    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        weights = tuple(parse_rational(w) for w in self.weights)
        if not weights:
            raise ValidationError("a weight vector needs at least one weight")
        for w in weights:
            if not 0 < w < 1:
                raise ValidationError(f"weights must lie in (0, 1), got {format_rational(w)}")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def parse(cls, values: str | Iterable) -> WeightVector:
        """Accept "1/5,1/4" or an iterable of rationals."""
        if isinstance(values, str):
            values = [v for v in values.split(",") if v.strip()]
        return cls(tuple(values))

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def alpha_tilde(self) -> Fraction:
        return sum(self.weights, Fraction(0))


def spectrum_wh(w: WeightVector) -> FractionalPolynomial:
    """Sp(f) = prod_i (t - t^w_i) / (t^w_i - 1) as an exact polynomial."""
    numerator = _ONE
    denominator = _ONE
    for wi in w.weights:
        numerator = numerator * (_T - FractionalPolynomial.monomial(wi))
        denominator = denominator * (FractionalPolynomial.monomial(wi) - _ONE)
    try:
        sp = numerator.exact_div(denominator)
    except InexactDivisionError as exc:
        weights = ", ".join(format_rational(x) for x in w.weights)
        raise InexactDivisionError(f"invalid weights ({weights}): {exc}") from exc
    log.debug(f"Spectrum for weights {w.weights}: {sp}")
    return sp


def exponents(sp: FractionalPolynomial) -> RootSet:
    """The exponents {alpha : n_alpha != 0}."""
    return RootSet.of(e for e, c in sp if c != 0)


def milnor_number(w: WeightVector) -> int:
    """prod_i (1/w_i - 1), the total mass of the spectrum."""
    mu = Fraction(1)
    for wi in w.weights:
        mu *= 1 / wi - 1
    if mu.denominator != 1:
        raise InexactDivisionError(
            f"invalid weights: Milnor number {format_rational(mu)} is not an integer"
        )
    return int(mu)


def wh_root_multiset(w: WeightVector) -> RootMultiset:
    """Microlocal roots of a weighted-homogeneous singularity: the exponents, each simple."""
    return RootMultiset.from_mapping({alpha: 1 for alpha in exponents(spectrum_wh(w))})


def brieskorn_exponents(*exps: int) -> RootSet:
    """Exponents of x_1^a_1 + ... + x_n^a_n: {sum p_i / a_i : 1 <= p_i <= a_i - 1}."""
    if not exps or any(int(a) < 2 for a in exps):
        raise ValidationError(f"Brieskorn exponents need all a_i >= 2, got {exps}")
    ranges = [[Fraction(p, a) for p in range(1, a)] for a in exps]
    return RootSet.of(sum(combo, Fraction(0)) for combo in itertools.product(*ranges))


def window_check(
    roots: RootMultiset, alpha_tilde: Fraction, n: int
) -> tuple[bool, list[str]]:
    """Check roots against [alpha~, n - alpha~] and m_alpha <= n - alpha~ - alpha + 1.

    Both inequalities are weak. Returns the verdict and a description of
    every violation.
    """
    alpha_tilde = Fraction(alpha_tilde)
    if roots.entries and roots.min_root != alpha_tilde:
        raise PreconditionError(
            f"alpha_tilde {format_rational(alpha_tilde)} is not the minimal root "
            f"{format_rational(roots.min_root)}"
        )
    upper = n - alpha_tilde
    violations = []
    for alpha, mult in roots.entries:
        if not alpha_tilde <= alpha <= upper:
            violations.append(
                f"root {format_rational(alpha)} outside "
                f"[{format_rational(alpha_tilde)}, {format_rational(upper)}]"
            )
        bound = n - alpha_tilde - alpha + 1
        if mult > bound:
            violations.append(
                f"multiplicity {mult} of {format_rational(alpha)} exceeds {format_rational(bound)}"
            )
    return not violations, violations


def spectrum_summary(w: WeightVector | Sequence) -> dict:
    """Spectrum, exponents and alpha~ in their JSON form."""
    if not isinstance(w, WeightVector):
        w = WeightVector(tuple(w))
    sp = spectrum_wh(w)
    return {
        "spectrum": sp.to_json(),
        "exponents": exponents(sp).to_json(),
        "alpha_tilde": format_rational(w.alpha_tilde),
    }
