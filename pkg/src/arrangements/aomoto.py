"""Aomoto complexes of rank-3 arrangements and root certification.

The arrangement is deconed at its infinity hyperplane. The remaining lines
g_i(s, t) = 0 give logarithmic forms w_i = dg_i / g_i; a 2-form w_i ^ w_j is
stored as the polynomial det(grad g_i, grad g_j) * prod_{l != i, j} g_l,
which identifies A^2 with a space of polynomials.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import sympy as sp

from src.arrangements.lattice import (
    Arrangement,
    Edge,
    alpha_prime,
    euler_characteristic,
    local_roots_union,
)
from src.core.linalg import QMatrix, dot
from src.core.rational import binomial, format_rational, fractional_part
from src.errors import PreconditionError, ValidationError

log = logging.getLogger(__name__)

_S, _T = sp.symbols("s t")


class Verdict(str, Enum):
    IN = "IN"
    NOT_IN = "NOT_IN"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class ResidueAssignment:
    """Residues 1 - alpha on I and the infinity line, -alpha elsewhere (alpha = k/d)."""

    k: int
    d: int
    I: frozenset[int]
    infinity: int
    residues: tuple[Fraction, ...]

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.k, self.d)

    def to_json(self) -> dict:
        return {
            "alpha": format_rational(self.alpha),
            "I": sorted(i + 1 for i in self.I),
            "residues": [format_rational(r) for r in self.residues],
        }


def _require_decone(A: Arrangement) -> int:
    if A.n != 3:
        raise PreconditionError(f"Aomoto complexes are built for n = 3 only, got n = {A.n}")
    if A.infinity_index is None:
        raise PreconditionError("an infinity index is required to decone the arrangement")
    return A.infinity_index


def residue_assignment(A: Arrangement, k: int, I: Iterable[int]) -> ResidueAssignment:
    """Residues for alpha = k/d and a 0-based index set I avoiding the infinity line."""
    infinity = _require_decone(A)
    d = A.d
    if not 1 <= k <= d:
        raise ValidationError(f"k must lie in 1..{d}, got {k}")
    I = frozenset(int(i) for i in I)
    if infinity in I:
        raise ValidationError("I may not contain the infinity index")
    if any(not 0 <= i < d for i in I):
        raise ValidationError(f"I has indices outside 1..{d}")
    if len(I) != k - 1:
        raise ValidationError(f"|I| must be k - 1 = {k - 1}, got {len(I)}")
    alpha = Fraction(k, d)
    residues = tuple(1 - alpha if (i in I or i == infinity) else -alpha for i in range(d))
    if sum(residues) != 0:
        raise AssertionError("residues must sum to zero")
    return ResidueAssignment(k, d, I, infinity, residues)


def nonresonance_check(A: Arrangement, R: ResidueAssignment) -> tuple[bool, list[Edge]]:
    """Residue sums over dense projective edges must avoid the positive integers."""
    violating = []
    for edge in A.dense_edges():
        if edge.codim == A.n:
            continue
        total = sum((R.residues[i] for i in edge.indices), Fraction(0))
        if total > 0 and total.denominator == 1:
            violating.append(edge)
    return not violating, violating


@dataclass(frozen=True)
class AomotoComplex:
    arrangement: Arrangement
    assignment: ResidueAssignment
    lines: tuple[int, ...]
    dims: tuple[int, int, int]
    d0: QMatrix
    d1: QMatrix
    basis_index: dict[tuple[int, int], int]
    coordinates: dict[tuple[int, int], tuple[Fraction, ...]] = field(repr=False)

    def wedge(self, i: int, j: int) -> tuple[Fraction, ...]:
        """Coordinates of w_i ^ w_j (positions into `lines`) in the A^2 basis."""
        if i == j:
            return (Fraction(0),) * self.dims[2]
        if i < j:
            return self.coordinates[(i, j)]
        return tuple(-x for x in self.coordinates[(j, i)])


def _affine_equations(
    A: Arrangement, lines: list[int]
) -> list[tuple[Fraction, Fraction, Fraction]]:
    infinity_form = QMatrix([A.forms[A.infinity_index]])
    point = infinity_form.solve([1])
    u1, u2 = infinity_form.nullspace()
    equations = []
    for i in lines:
        form = A.forms[i]
        g = (dot(form, point), dot(form, u1), dot(form, u2))
        if g[1] == 0 and g[2] == 0:
            raise PreconditionError(f"degenerate decone: line {i + 1} is constant on the chart")
        equations.append(g)
    return equations


def _as_fraction(value) -> Fraction:
    value = sp.Rational(value)
    return Fraction(int(value.p), int(value.q))


def build_aomoto(A: Arrangement, R: ResidueAssignment) -> AomotoComplex:
    """The complex 0 -> A^0 -> A^1 -> A^2 -> 0 with differential w ^ .

    Parameters
    ----------
    A : Arrangement
        A rank 3 arrangement with an infinity index.
    R : ResidueAssignment
        The residues defining w = sum_i R_i w_i over the affine lines.

    Returns
    -------
    AomotoComplex
        Dimensions, both differentials as exact matrices and the coordinates
        of every wedge w_i ^ w_j in a basis of A^2.
    """
    infinity = _require_decone(A)
    lines = [i for i in range(A.d) if i != infinity]
    equations = _affine_equations(A, lines)
    polys = [
        sp.Rational(g[0].numerator, g[0].denominator)
        + sp.Rational(g[1].numerator, g[1].denominator) * _S
        + sp.Rational(g[2].numerator, g[2].denominator) * _T
        for g in equations
    ]

    # Clear denominators: w_i ^ w_j times prod_l g_l is a polynomial 2-form
    pairs = list(itertools.combinations(range(len(lines)), 2))
    columns: list[dict] = []
    for a, b in pairs:
        det = equations[a][1] * equations[b][2] - equations[a][2] * equations[b][1]
        expr = sp.Rational(det.numerator, det.denominator)
        for l, g in enumerate(polys):
            if l not in (a, b):
                expr *= g
        columns.append(sp.Poly(sp.expand(expr), _S, _T, domain=sp.QQ).as_dict() if det else {})

    # The pivot columns of the coefficient matrix are a basis of A^2
    monomials = sorted({m for col in columns for m in col})
    matrix = QMatrix(
        [[_as_fraction(col.get(m, 0)) for col in columns] for m in monomials], cols=len(pairs)
    )
    reduced, pivots = matrix.rref()
    rank = len(pivots)
    coordinates = {
        pair: tuple(reduced[r, c] for r in range(rank)) for c, pair in enumerate(pairs)
    }
    basis_index = {pairs[c]: r for r, c in enumerate(pivots)}

    # Build both differentials from the residues of the affine lines
    alphas = [R.residues[i] for i in lines]
    m = len(lines)
    d0 = QMatrix([[a] for a in alphas], cols=1)

    def wedge(i: int, j: int) -> tuple[Fraction, ...]:
        if i == j:
            return (Fraction(0),) * rank
        if i < j:
            return coordinates[(i, j)]
        return tuple(-x for x in coordinates[(j, i)])

    d1_columns = []
    for i in range(m):
        col = [Fraction(0)] * rank
        for j in range(m):
            if j != i and alphas[j] != 0:
                col = [c + alphas[j] * x for c, x in zip(col, wedge(j, i), strict=True)]
        d1_columns.append(col)
    d1 = QMatrix.from_columns(d1_columns, rows=rank) if rank else QMatrix.zeros(0, m)

    if rank and not (d1 @ d0).is_zero():
        raise AssertionError("d1 o d0 != 0")
    log.debug(f"Aomoto complex: dims (1, {m}, {rank}) for residues {R.to_json()['residues']}")
    return AomotoComplex(A, R, tuple(lines), (1, m, rank), d0, d1, basis_index, coordinates)


def aomoto_cohomology(C: AomotoComplex) -> tuple[int, int, int]:
    """(h^0, h^1, h^2) of the Aomoto complex."""
    r0 = C.d0.rank()
    r1 = C.d1.rank()
    return 1 - r0, C.dims[1] - r1 - r0, C.dims[2] - r1


@dataclass(frozen=True)
class VSubspace:
    dim: int
    nonzero: bool
    full: bool


def v_subspace(C: AomotoComplex, I: Iterable[int]) -> VSubspace:
    """Image in H^2 of the wedges w_i ^ w_j with i, j in I (0-based arrangement indices)."""
    positions = sorted(C.lines.index(i) for i in I)
    h2 = C.dims[2] - C.d1.rank()
    pairs = list(itertools.combinations(positions, 2))
    if not pairs or C.dims[2] == 0:
        return VSubspace(0, False, h2 == 0)
    span = QMatrix.from_columns([C.wedge(a, b) for a, b in pairs])
    dim = C.d1.hstack(span).rank() - C.d1.rank()
    return VSubspace(dim, dim > 0, dim == h2)


def hodge_prediction(k: int, n: int) -> int:
    """dim F^{n-1} H^{n-1}(F_0)_lambda = C(k - 1, n - 1) below alpha'."""
    return binomial(k - 1, n - 1)


@dataclass(frozen=True)
class Certification:
    alpha: Fraction
    k: int
    d: int
    verdict_alpha: Verdict
    verdict_alpha_plus_1: Verdict
    rules_fired: tuple[str, ...]
    diagnostics: dict

    def to_json(self) -> dict:
        return {
            "alpha": format_rational(self.alpha),
            "alpha_plus_1": format_rational(self.alpha + 1),
            "k": self.k,
            "d": self.d,
            "verdict_alpha": self.verdict_alpha.value,
            "verdict_alpha_plus_1": self.verdict_alpha_plus_1.value,
            "rules_fired": list(self.rules_fired),
            "diagnostics": self.diagnostics,
        }


def _combine(claims: list[tuple[str, Verdict]], diagnostics: dict, name: str) -> Verdict:
    verdicts = {v for _, v in claims}
    if not verdicts:
        return Verdict.UNKNOWN
    if len(verdicts) > 1:
        rules = ", ".join(f"{r}:{v.value}" for r, v in claims)
        diagnostics.setdefault("conflicts", []).append(f"{name}: {rules}")
        return Verdict.UNKNOWN
    return verdicts.pop()


def _candidate_sets(
    A: Arrangement,
    k: int,
    I: Iterable[int] | None,
    search: bool,
    search_cap: int,
    diagnostics: dict,
) -> list[frozenset[int]]:
    if I is not None:
        return [frozenset(I)]
    lines = [i for i in range(A.d) if i != A.infinity_index]
    total = binomial(len(lines), k - 1)
    if total == 1 or (search and total <= search_cap):
        return [frozenset(c) for c in itertools.combinations(lines, k - 1)]
    if search:
        diagnostics["search"] = f"C({len(lines)}, {k - 1}) = {total} exceeds the cap {search_cap}"
    return []


def certify_root(
    A: Arrangement,
    k: int,
    I: Iterable[int] | None = None,
    search: bool = False,
    search_cap: int = 5000,
) -> Certification:
    """Decide alpha = k/d and alpha + 1 as roots of b_f(-s) where the criteria allow.

    Parameters
    ----------
    A : Arrangement
        A rank 3 arrangement. Without an infinity index the last form is used.
    k : int
        Numerator of alpha = k/d, in 1..d.
    I : Iterable[int] | None
        A 0-based index set of size k - 1 avoiding the infinity line.
    search : bool
        Without `I`, try every residue set of size k - 1.
    search_cap : int
        The largest number of residue sets a search may try.

    Returns
    -------
    Certification
        The verdicts on alpha and alpha + 1, the rules that fired and the
        diagnostics. Values no criterion decides are reported as UNKNOWN.
    """
    if A.n != 3:
        raise PreconditionError(f"certification needs n = 3, got n = {A.n}")
    if A.infinity_index is None:
        A = A.with_infinity(A.d - 1)
    d, n = A.d, A.n
    if not 1 <= k <= d:
        raise ValidationError(f"k must lie in 1..{d}, got {k}")
    alpha = Fraction(k, d)
    ap = alpha_prime(A)
    chi = euler_characteristic(A)
    hodge = hodge_prediction(k, n)
    diagnostics: dict = {
        "alpha_prime": format_rational(ap),
        "chi": chi,
        "hodge_prediction": hodge,
        "infinity_index": A.infinity_index + 1,
    }
    # Each rule adds a claim on alpha or on alpha + 1
    on_alpha: list[tuple[str, Verdict]] = []
    on_next: list[tuple[str, Verdict]] = []

    if k in (d - 1, d):
        on_alpha.append(("a", Verdict.IN))
        on_next.append(("a", Verdict.NOT_IN))

    if alpha < ap:
        # the criterion is applied with the threshold k >= n
        if k >= n:
            on_alpha.append(("b", Verdict.IN))
        else:
            diagnostics["below_alpha_min"] = f"k = {k} < n = {n}; rule (b) not used for NOT_IN"

    # Aomoto cohomology for every nonresonant residue set tried
    h_numbers = None
    v_results = []
    for subset in _candidate_sets(A, k, I, search, search_cap, diagnostics):
        R = residue_assignment(A, k, subset)
        ok, violating = nonresonance_check(A, R)
        if not ok:
            if I is not None:
                diagnostics["resonant_edges"] = [e.label() for e in violating]
            continue
        C = build_aomoto(A, R)
        h = aomoto_cohomology(C)
        if h_numbers is None:
            h_numbers = h
        elif h != h_numbers:
            diagnostics.setdefault("h_mismatch", []).append(list(h))
        V = v_subspace(C, subset)
        v_results.append((subset, V))
        if I is not None or V.full:
            diagnostics["I"] = sorted(i + 1 for i in subset)
            diagnostics["dim_V"] = V.dim

    # Rules (c) and (d) compare against the Hodge prediction
    if h_numbers is not None:
        diagnostics["h"] = list(h_numbers)
        if k < d and h_numbers[2] - h_numbers[1] != chi:
            difference = h_numbers[2] - h_numbers[1]
            diagnostics["euler_mismatch"] = f"h2 - h1 = {difference} != chi = {chi}"
        if hodge < h_numbers[2]:
            on_next.append(("c", Verdict.IN))
    elif I is None and not search:
        diagnostics.setdefault("aomoto", "no residue set I given; rules (c), (e), (f) skipped")

    if alpha < ap:
        try:
            local = {fractional_part(r) for r in local_roots_union(A)}
            if fractional_part(alpha) not in local and hodge == chi:
                on_next.append(("d", Verdict.NOT_IN))
        except PreconditionError as exc:
            diagnostics["local_roots"] = str(exc)
    else:
        if any(V.nonzero for _, V in v_results):
            on_alpha.append(("e", Verdict.IN))
        if any(V.full for _, V in v_results):
            on_next.append(("f", Verdict.NOT_IN))

    verdict_alpha = _combine(on_alpha, diagnostics, format_rational(alpha))
    verdict_next = _combine(on_next, diagnostics, format_rational(alpha + 1))
    rules = tuple(sorted({r for r, _ in on_alpha + on_next}))
    log.info(
        f"Certified k={k}: {format_rational(alpha)} {verdict_alpha.value}, "
        f"{format_rational(alpha + 1)} {verdict_next.value} by {rules}"
    )
    return Certification(alpha, k, d, verdict_alpha, verdict_next, rules, diagnostics)
