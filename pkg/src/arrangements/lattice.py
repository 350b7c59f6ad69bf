"""Combinatorics of central hyperplane arrangements.

Hyperplanes are given by rational covectors. Edges are stored through their
closed index sets: the set of all hyperplanes containing the edge.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from tokenize import TokenError

import networkx as nx
import sympy as sp
from sympy.parsing.sympy_parser import (
    implicit_multiplication,
    parse_expr,
    standard_transformations,
)

from src.core.linalg import QMatrix, matrix_rank
from src.core.rational import RootMultiset, RootSet, binomial, format_rational, parse_rational
from src.errors import IndeterminateError, PreconditionError, ValidationError

log = logging.getLogger(__name__)

Covector = tuple[Fraction, ...]

_FORM_TRANSFORMS = (*standard_transformations, implicit_multiplication)


def _form_variables(n: int) -> list[sp.Symbol]:
    if n <= 3:
        return [sp.Symbol(c) for c in "xyz"[:n]]
    return [sp.Symbol(f"x{i}") for i in range(1, n + 1)]


def parse_form(form: str | Sequence, n: int) -> Covector:
    """Covector of a coefficient list or of a linear form such as "x+3y-7z".

    Forms in at most three variables are written in x, y, z and larger ones
    in x1, ..., xn.
    """
    if not isinstance(form, str):
        return tuple(parse_rational(x) for x in form)
    variables = _form_variables(n)
    names = {str(v): v for v in variables}
    try:
        expr = parse_expr(form, local_dict=names, transformations=_FORM_TRANSFORMS)
        poly = sp.Poly(expr, *variables)
    except (SyntaxError, TokenError, TypeError, ValueError, sp.PolynomialError) as exc:
        raise ValidationError(f"not a linear form in {', '.join(names)}: {form!r}") from exc
    if not (poly.domain.is_ZZ or poly.domain.is_QQ):
        raise ValidationError(f"not a rational linear form in {', '.join(names)}: {form!r}")
    if any(sum(m) != 1 for m in poly.monoms()):
        raise ValidationError(f"{form!r} is not a homogeneous linear form")
    coeffs = (sp.Rational(poly.coeff_monomial(v)) for v in variables)
    return tuple(Fraction(int(c.p), int(c.q)) for c in coeffs)


@dataclass(frozen=True)
class Edge:
    """An intersection of hyperplanes together with every hyperplane containing it."""

    indices: frozenset[int]
    basis: tuple[tuple[Fraction, ...], ...]
    codim: int
    dense: bool

    @property
    def m_L(self) -> int:
        return len(self.indices)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, other: Edge) -> bool:
        """Whether `other` is a subspace of this edge."""
        return self.indices <= other.indices

    def label(self) -> str:
        return "{" + ",".join(str(i + 1) for i in sorted(self.indices)) + "}"

    def to_json(self) -> dict:
        return {
            "indices": sorted(i + 1 for i in self.indices),
            "m": self.m_L,
            "codim": self.codim,
            "dense": self.dense,
        }


@dataclass(frozen=True)
class Arrangement:
    """A central essential arrangement of d hyperplanes in n-space.

    `infinity_index` is 0-based; JSON inputs use 1-based indices.
    """

    n: int
    forms: tuple[Covector, ...]
    infinity_index: int | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError(f"ambient dimension must be >= 1, got {self.n}")
        forms = tuple(parse_form(f, self.n) for f in self.forms)
        object.__setattr__(self, "forms", forms)
        if not forms:
            raise ValidationError("an arrangement needs at least one hyperplane")
        for f in forms:
            if len(f) != self.n:
                raise ValidationError(f"form {f} does not have length {self.n}")
            if not any(f):
                raise ValidationError("zero covector does not define a hyperplane")
        for i, j in itertools.combinations(range(len(forms)), 2):
            if matrix_rank([forms[i], forms[j]]) < 2:
                raise ValidationError(f"forms {i + 1} and {j + 1} are proportional (not reduced)")
        if matrix_rank(forms) != self.n:
            raise ValidationError("the forms do not span the dual space (not essential)")
        if self.infinity_index is not None and not 0 <= self.infinity_index < len(forms):
            raise ValidationError(f"infinity index {self.infinity_index + 1} out of range")

    @classmethod
    def from_json(cls, data: dict) -> Arrangement:
        try:
            infinity = data.get("infinity_index")
            return cls(
                n=int(data["n"]),
                forms=tuple(data["forms"]),
                infinity_index=None if infinity is None else int(infinity) - 1,
            )
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed arrangement: {exc}") from exc

    def to_json(self) -> dict:
        out = {"n": self.n, "forms": [[format_rational(x) for x in f] for f in self.forms]}
        if self.infinity_index is not None:
            out["infinity_index"] = self.infinity_index + 1
        return out

    @property
    def d(self) -> int:
        return len(self.forms)

    def with_infinity(self, index: int) -> Arrangement:
        return Arrangement(self.n, self.forms, index)

    def rank_of(self, indices: Iterable[int]) -> int:
        rows = [self.forms[i] for i in indices]
        return matrix_rank(rows) if rows else 0

    def closure(self, indices: Iterable[int]) -> frozenset[int]:
        """All hyperplanes containing the intersection of the given ones."""
        indices = frozenset(indices)
        rank = self.rank_of(indices)
        return frozenset(
            j
            for j in range(self.d)
            if j in indices or self.rank_of([*indices, j]) == rank
        )

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(intersection_lattice(self))

    @cached_property
    def edge_map(self) -> dict[frozenset[int], Edge]:
        return {e.indices: e for e in self.edges}

    @property
    def center(self) -> Edge:
        return self.edge_map[frozenset(range(self.d))]

    def edges_of_codim(self, codim: int) -> list[Edge]:
        return [e for e in self.edges if e.codim == codim]

    def dense_edges(self) -> list[Edge]:
        return [e for e in self.edges if e.dense]

    def meet(self, a: Edge, b: Edge) -> Edge:
        """The edge a ∩ b."""
        return self.edge_map[self.closure(a.indices | b.indices)]


def _indecomposable(vectors: Sequence[Sequence[Fraction]]) -> bool:
    """Connectivity of the vector matroid, from the fundamental circuits of one basis."""
    if len(vectors) <= 1:
        return True
    basis: list[int] = []
    for i, v in enumerate(vectors):
        if matrix_rank([vectors[b] for b in basis] + [v]) > len(basis):
            basis.append(i)

    graph = nx.Graph()
    graph.add_nodes_from(range(len(vectors)))
    columns = QMatrix.from_columns([vectors[b] for b in basis])
    for j in range(len(vectors)):
        if j in basis:
            continue
        coords = columns.solve(vectors[j])
        for b, c in zip(basis, coords, strict=True):
            if c != 0:
                graph.add_edge(j, b)
    return nx.is_connected(graph)


def intersection_lattice(A: Arrangement) -> list[Edge]:
    """All edges of the arrangement including the hyperplanes and the center."""
    found: set[frozenset[int]] = set()
    frontier = {A.closure([i]) for i in range(A.d)}
    while frontier:
        found |= frontier
        nxt = set()
        for indices in frontier:
            for j in range(A.d):
                if j not in indices:
                    joined = A.closure(indices | {j})
                    if joined not in found:
                        nxt.add(joined)
        frontier = nxt

    edges = []
    for indices in found:
        rows = QMatrix([A.forms[i] for i in sorted(indices)])
        basis = tuple(rows.nullspace())
        codim = A.n - len(basis)
        dense = _indecomposable([A.forms[i] for i in sorted(indices)])
        edges.append(Edge(indices, basis, codim, dense))
    edges.sort(key=lambda e: (e.codim, sorted(e.indices)))
    log.debug(f"Intersection lattice: {len(edges)} edges for d={A.d}, n={A.n}")
    return edges


def is_dense(A: Arrangement, L: Edge) -> bool:
    """Whether the hyperplanes through L form an indecomposable arrangement modulo L."""
    return _indecomposable([A.forms[i] for i in sorted(L.indices)])


def _require_proper(A: Arrangement) -> None:
    if A.d <= A.n:
        raise PreconditionError(f"need d > n, got d={A.d}, n={A.n}")


def strongly_adjacent(A: Arrangement, a: Edge, b: Edge) -> bool:
    return a.contains(b) or b.contains(a) or not A.meet(a, b).dense


def m_lambda(A: Arrangement, lambda_order: int) -> tuple[int, list[Edge]]:
    """Largest pairwise strongly adjacent set of dense edges with lambda^{m_L} = 1.

    Returns the size together with a witness set.
    """
    if lambda_order < 1:
        raise ValidationError(f"the order of lambda must be positive, got {lambda_order}")
    candidates = [e for e in A.dense_edges() if e.m_L % lambda_order == 0]
    if not candidates:
        return 0, []
    graph = nx.Graph()
    graph.add_nodes_from(range(len(candidates)))
    for i, j in itertools.combinations(range(len(candidates)), 2):
        if strongly_adjacent(A, candidates[i], candidates[j]):
            graph.add_edge(i, j)
    clique, _ = nx.max_weight_clique(graph, weight=None)
    witness = [candidates[i] for i in sorted(clique)]
    return len(witness), witness


def root_candidates(A: Arrangement) -> RootSet:
    """Union of Z/m_L over dense edges, cut to (0, 2 - 1/d)."""
    _require_proper(A)
    top = 2 - Fraction(1, A.d)
    roots = set()
    for m in {e.m_L for e in A.dense_edges()}:
        j = 1
        while Fraction(j, m) < top:
            roots.add(Fraction(j, m))
            j += 1
    return RootSet.of(roots)


@dataclass(frozen=True)
class MultiplicityBound:
    alpha: Fraction
    bound: int
    exact: bool
    reason: str

    def to_json(self) -> dict:
        return {
            "alpha": format_rational(self.alpha),
            "bound": self.bound,
            "exact": self.exact,
            "reason": self.reason,
        }


def coprime_adjacent_multiplicities(A: Arrangement) -> bool:
    """Whether gcd(m_L, m_L') = 1 for all strongly adjacent dense edges L != L'."""
    dense = A.dense_edges()
    return all(
        math.gcd(a.m_L, b.m_L) == 1
        for a, b in itertools.combinations(dense, 2)
        if strongly_adjacent(A, a, b)
    )


def multiplicity_bounds(A: Arrangement, alpha: Fraction | str) -> MultiplicityBound:
    """Upper bound for the multiplicity of alpha as a root of b_f(-s)."""
    alpha = parse_rational(alpha)
    if alpha not in root_candidates(A):
        raise PreconditionError(f"{format_rational(alpha)} is not a candidate root")
    if alpha == 1:
        return MultiplicityBound(alpha, A.n, True, "m_1 = n")
    if alpha.denominator != 1 and coprime_adjacent_multiplicities(A):
        return MultiplicityBound(alpha, 1, True, "coprime multiplicities of adjacent dense edges")
    bound, witness = m_lambda(A, alpha.denominator)
    labels = ", ".join(e.label() for e in witness)
    return MultiplicityBound(alpha, bound, False, f"m(lambda) with witness {labels}")


@dataclass(frozen=True)
class BettiNumbers:
    b0: int
    b1: int
    b2: int
    chi: int
    nu3: int
    nu2_prime: int
    nu3_prime: int

    def to_json(self) -> dict:
        return {
            "betti": [self.b0, self.b1, self.b2],
            "chi": self.chi,
            "nu3": self.nu3,
            "nu2_prime": self.nu2_prime,
            "nu3_prime": self.nu3_prime,
        }


def _require_rank3_low_multiplicity(A: Arrangement) -> None:
    if A.n != 3:
        raise PreconditionError(f"need n = 3, got n = {A.n}")
    worst = max((e.m_L for e in A.edges_of_codim(2)), default=0)
    if worst > 3:
        raise PreconditionError(
            f"multiplicity > 3 unsupported (found a point of multiplicity {worst})"
        )


def triple_points(A: Arrangement) -> int:
    """nu_3, the number of projective triple points."""
    return sum(1 for e in A.edges_of_codim(2) if e.m_L == 3)


def euler_characteristic(A: Arrangement) -> int:
    """chi(U) = 3 - 2d + sum over projective points of (m_p - 1)."""
    if A.n != 3:
        raise PreconditionError(f"need n = 3, got n = {A.n}")
    return 3 - 2 * A.d + sum(e.m_L - 1 for e in A.edges_of_codim(2))


def euler_betti(A: Arrangement) -> BettiNumbers:
    """Betti numbers of the complement U of the deconed affine line arrangement."""
    _require_rank3_low_multiplicity(A)
    if A.infinity_index is None:
        raise PreconditionError("an infinity index is required for the affine point counts")
    points = A.edges_of_codim(2)
    affine = [e for e in points if A.infinity_index not in e.indices]
    nu3 = triple_points(A)
    nu2_prime = sum(1 for e in affine if e.m_L == 2)
    nu3_prime = sum(1 for e in affine if e.m_L == 3)
    b1 = A.d - 1
    b2 = nu2_prime + 2 * nu3_prime
    chi = 1 - b1 + b2
    if chi != (A.d - 2) * (A.d - 3) // 2 - nu3 or chi != euler_characteristic(A):
        raise AssertionError(f"Euler characteristic mismatch: chi={chi}, nu3={nu3}, d={A.d}")
    return BettiNumbers(1, b1, b2, chi, nu3, nu2_prime, nu3_prime)


def alpha_prime(A: Arrangement) -> Fraction:
    """min over nonzero edges of codim(L) / m_L."""
    _require_proper(A)
    center = frozenset(range(A.d))
    return min(Fraction(e.codim, e.m_L) for e in A.edges if e.indices != center)


def alpha_min(A: Arrangement) -> Fraction:
    """The log canonical threshold min(alpha', n/d)."""
    value = min(alpha_prime(A), Fraction(A.n, A.d))
    if value >= 1:
        raise AssertionError(f"alpha_f = {value} must be < 1")
    return value


def is_generic(A: Arrangement) -> bool:
    """Every n of the forms are linearly independent."""
    return all(
        A.rank_of(subset) == A.n for subset in itertools.combinations(range(A.d), A.n)
    )


def generic_bfunction(A: Arrangement) -> RootMultiset:
    """(s+1)^{n-1} prod_{j=n}^{2d-2} (s + j/d) for a generic arrangement."""
    _require_proper(A)
    if not is_generic(A):
        raise PreconditionError("not generic")
    d, n = A.d, A.n
    roots = [Fraction(j, d) for j in range(n, 2 * d - 1)] + [Fraction(1)] * (n - 1)
    return RootMultiset.from_factors(roots)


def _low_degree_roots(d: int, r: int) -> RootMultiset:
    roots = [Fraction(1)] + [Fraction(i, 3) for i in range(2, 5)]
    roots += [Fraction(j, d) for j in range(3, r + 1)]
    return RootMultiset.from_factors(roots)


def low_degree_exponent(A: Arrangement) -> int:
    """The upper index r, raising IndeterminateError when both values are possible."""
    _require_rank3_low_multiplicity(A)
    d, nu3 = A.d, triple_points(A)
    if d > 7:
        raise PreconditionError(f"need d <= 7, got d = {d}")
    if nu3 == 0:
        raise PreconditionError("need at least one triple point (nu3 = 0)")
    if nu3 < d - 3:
        return 2 * d - 2
    if d < 7:
        return 2 * d - 3
    if nu3 > 4:
        return 2 * d - 3
    candidates = {
        f"r={r}": _low_degree_roots(d, r).to_json() for r in (2 * d - 2, 2 * d - 3)
    }
    raise IndeterminateError(
        f"d = 7 and nu3 = {nu3}: r can be {2 * d - 2} or {2 * d - 3}", candidates
    )


def bfunction_n3_low_degree(A: Arrangement) -> RootMultiset:
    """b-function of a rank-3 arrangement with only double and triple points, d <= 7."""
    r = low_degree_exponent(A)
    log.info(f"Low degree formula with d={A.d}, nu3={triple_points(A)}: r={r}")
    return _low_degree_roots(A.d, r)


_LOCAL_ROOTS = {
    1: RootSet.of([1]),
    2: RootSet.of([1]),
    3: RootSet.of([Fraction(2, 3), 1, Fraction(4, 3)]),
}


def local_root_data(A: Arrangement) -> dict[Edge, RootSet]:
    """R_{f,x} at generic points of every nonzero edge of a rank-3 arrangement."""
    _require_rank3_low_multiplicity(A)
    return {e: _LOCAL_ROOTS[e.m_L] for e in A.edges if e.codim < A.n}


def local_roots_union(A: Arrangement) -> RootSet:
    """R'_f, the union of the local root sets away from the origin."""
    out = RootSet()
    for roots in local_root_data(A).values():
        out = out | roots
    return out


@dataclass(frozen=True)
class ArrangementReport:
    n: int
    d: int
    edges: tuple[Edge, ...]
    betti: BettiNumbers | None
    alpha_prime: Fraction
    alpha_min: Fraction
    candidates: RootSet
    generic: bool
    bfunction: RootMultiset | None = None
    r: int | None = None
    indeterminate: bool = False
    notes: tuple[str, ...] = ()
    remark_check: bool | None = None

    @property
    def dense_edges(self) -> list[Edge]:
        return [e for e in self.edges if e.dense]

    def edges_by_codim(self) -> dict[int, list[Edge]]:
        out: dict[int, list[Edge]] = {}
        for e in self.edges:
            out.setdefault(e.codim, []).append(e)
        return out

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "d": self.d,
            "edges": {str(c): [e.to_json() for e in es] for c, es in self.edges_by_codim().items()},
            "dense_edges": [e.to_json() for e in self.dense_edges],
            "alpha_prime": format_rational(self.alpha_prime),
            "alpha_min": format_rational(self.alpha_min),
            "candidates": self.candidates.to_json(),
            "generic": self.generic,
            "bfunction": None if self.bfunction is None else self.bfunction.to_json(),
            "r": self.r,
            "indeterminate": self.indeterminate,
            "notes": list(self.notes),
        }
        if self.betti is not None:
            out.update(self.betti.to_json())
            out["remark_check"] = self.remark_check
        return out


def arrangement_report(A: Arrangement) -> ArrangementReport:
    """Collect the lattice data, invariants and b-function (when a formula applies)."""
    _require_proper(A)
    notes = []
    betti = None
    remark = None
    if A.n == 3 and A.infinity_index is None:
        A = A.with_infinity(A.d - 1)
        notes.append(f"infinity index defaulted to {A.d}")
    if A.n == 3:
        try:
            betti = euler_betti(A)
            # nu3 < d - 3 iff chi(U) > C(d - 3, 2)
            remark = (betti.nu3 < A.d - 3) == (betti.chi > binomial(A.d - 3, 2))
        except PreconditionError as exc:
            notes.append(str(exc))

    generic = is_generic(A)
    bfunction, r, indeterminate = None, None, False
    if generic:
        bfunction = generic_bfunction(A)
    elif A.n == 3:
        try:
            r = low_degree_exponent(A)
            bfunction = _low_degree_roots(A.d, r)
        except IndeterminateError as exc:
            indeterminate = True
            notes.append(str(exc))
        except PreconditionError as exc:
            notes.append(f"no closed formula: {exc}")

    return ArrangementReport(
        n=A.n,
        d=A.d,
        edges=A.edges,
        betti=betti,
        alpha_prime=alpha_prime(A),
        alpha_min=alpha_min(A),
        candidates=root_candidates(A),
        generic=generic,
        bfunction=bfunction,
        r=r,
        indeterminate=indeterminate,
        notes=tuple(notes),
        remark_check=remark,
    )


def affine_cone(lines: Sequence[Sequence]) -> Arrangement:
    """Cone of the affine lines a x + b y = c, with the line at infinity appended last."""
    if not lines:
        raise ValidationError("no affine lines given")
    forms = []
    for line in lines:
        if len(line) != 3:
            raise ValidationError(f"an affine line needs (a, b, c), got {line}")
        a, b, c = (parse_rational(x) for x in line)
        if a == 0 and b == 0:
            raise ValidationError(f"degenerate line {line}")
        forms.append((a, b, -c))
    for i, j in itertools.combinations(range(len(forms)), 2):
        if matrix_rank([forms[i], forms[j]]) < 2:
            raise ValidationError(f"duplicate lines {i + 1} and {j + 1}")
    forms.append((Fraction(0), Fraction(0), Fraction(1)))
    return Arrangement(3, tuple(forms), len(forms) - 1)
