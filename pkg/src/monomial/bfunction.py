"""Root sets of b-functions of monomial ideals.

R_a is the union of R_Q over the faces Q of the Newton polyhedron that are
not contained in a coordinate hyperplane, with
R_Q = {L_Q(u) : u in e + (M_Q minus M'_Q), u in V_Q}.
For n = 2 only the one-dimensional faces are needed and R_Q has a finite
description through the window S_Q.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction

from src.core.fracpoly import FractionalPolynomial
from src.core.rational import RootSet, parse_rational
from src.errors import PreconditionError, ValidationError
from src.monomial.newton import (
    ExponentVector,
    Face,
    MonomialIdeal,
    NewtonPolyhedron,
    SemigroupPresentation,
    build_polyhedron,
    face_functional,
    semigroup_data,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FaceWindow:
    """The finite window S_Q of a compact edge, split by membership in M'_Q."""

    face: Face
    v1: ExponentVector
    v2: ExponentVector
    v3: ExponentVector
    S: tuple[ExponentVector, ...]
    S1: tuple[ExponentVector, ...]
    S0: tuple[ExponentVector, ...]

    def roots(self) -> set[Fraction]:
        shift = set(self.S1)
        return {self.face.evaluate((u[0] + 1, u[1] + 1)) - (u in shift) for u in self.S}


def _require_dim2(ideal: MonomialIdeal) -> None:
    if ideal.n != 2:
        raise PreconditionError(f"this algorithm needs n = 2, got n = {ideal.n}")


def face_window(
    poly: NewtonPolyhedron, face: Face, presentation: SemigroupPresentation | None = None
) -> FaceWindow:
    """Window S_Q and its split S_Q^[1] / S_Q^[0] for a compact edge in dimension 2."""
    _require_dim2(poly.ideal)
    if not face.compact or face.dim != 1:
        raise PreconditionError(f"face {face.label()} is not a compact edge")
    S = presentation or semigroup_data(poly, face)

    v1, v2 = sorted(face.vertex_set)
    g = math.gcd(v2[0] - v1[0], v2[1] - v1[1])
    prim = ((v2[0] - v1[0]) // g, (v2[1] - v1[1]) // g)

    # positions of the points of Gamma on Q along the primitive direction
    steps = [(p[0] - v1[0]) // prim[0] for p in S.gamma_points]
    index = math.gcd(*steps)
    v3 = (v1[0] + index * prim[0], v1[1] + index * prim[1])

    window = tuple(itertools.product(range(v3[0]), range(v1[1])))
    shifted = tuple(u for u in window if S.member(u, shifted=True))
    unshifted = tuple(u for u in window if u not in set(shifted))
    log.debug(f"Face {face.label()}: v3={v3}, |S|={len(window)}, S1={shifted}")
    return FaceWindow(face, v1, v2, v3, window, shifted, unshifted)


def _axis_roots(face: Face) -> set[Fraction]:
    """R_Q = {i/m : 1 <= i <= m} for an unbounded edge inside {u_i = m}."""
    (ray,) = face.ray_directions
    m = face.vertex_set[0][1 - ray]
    return {Fraction(i, m) for i in range(1, m + 1)}


def roots_dim2(ideal: MonomialIdeal, poly: NewtonPolyhedron | None = None) -> RootSet:
    """Exact root set of b_a(-s) for a monomial ideal in two variables."""
    _require_dim2(ideal)
    poly = poly or build_polyhedron(ideal)
    roots: set[Fraction] = set()
    for face in poly.admissible_faces(dim=1):
        if face.compact:
            face_roots = face_window(poly, face).roots()
        else:
            face_roots = _axis_roots(face)
        log.debug(f"R_Q for {face.label()}: {sorted(face_roots)}")
        roots |= face_roots
    return RootSet.of(roots)


def _multisets(
    generators: Sequence[tuple[tuple[int, ...], Fraction]], budget: Fraction, n: int
) -> Iterator[tuple[tuple[int, ...], Fraction]]:
    """All sums of positive generators with total degree at most `budget`."""

    def walk(idx: int, vec: tuple[int, ...], deg: Fraction):
        if idx == len(generators):
            yield vec, deg
            return
        gen, gdeg = generators[idx]
        count = 0
        while deg + count * gdeg <= budget:
            yield from walk(
                idx + 1,
                tuple(v + count * x for v, x in zip(vec, gen)),
                deg + count * gdeg,
            )
            count += 1

    yield from walk(0, (0,) * n, Fraction(0))


def face_roots(
    poly: NewtonPolyhedron,
    face: Face,
    degree_bound: Fraction | None = None,
    window_pad: int | None = None,
) -> set[Fraction]:
    """R_Q for one face, restricted to values at most `degree_bound`.

    For n = 2 compact edges without a bound the S_Q window is used; otherwise
    the lattice points u = e + (sum of positive generators) are enumerated
    by degree.
    """
    ideal = poly.ideal
    n = ideal.n
    functional = face_functional(face)
    if degree_bound is None:
        if n == 2 and face.dim == 1:
            return face_window(poly, face).roots() if face.compact else _axis_roots(face)
        degree_bound = Fraction(n)

    S = semigroup_data(poly, face, window_pad)
    e = (1,) * n
    base = sum(functional, Fraction(0))
    if base > degree_bound:
        return set()

    found: set[Fraction] = set()
    verdicts: dict[tuple, bool] = {}
    for vec, deg in _multisets(S.positive_generators, degree_bound - base, n):
        w = tuple(a + b for a, b in zip(e, vec))
        if not face.spans(w):
            continue
        key = (S.group.reduce(vec), deg)
        if key not in verdicts:
            verdicts[key] = not S.member(vec, shifted=True)
        if verdicts[key]:
            found.add(base + deg)
    return found


def roots_general(
    ideal: MonomialIdeal,
    degree_bound: Fraction | str | None = None,
    window_pad: int | None = None,
) -> RootSet:
    """Root set of b_a(-s) below `degree_bound` (default n), any n <= 3.

    The result is flagged as truncated; it is exact for roots at most the bound.
    """
    bound = Fraction(ideal.n) if degree_bound is None else parse_rational(degree_bound)
    if bound <= 0:
        raise PreconditionError(f"degree bound must be positive, got {bound}")
    poly = build_polyhedron(ideal)
    roots: set[Fraction] = set()
    for face in poly.admissible_faces():
        found = face_roots(poly, face, bound, window_pad)
        log.debug(f"R_Q for {face.label()} below {bound}: {sorted(found)}")
        roots |= found
    log.info(f"Found {len(roots)} roots below {bound} over {len(poly.faces)} faces")
    return RootSet.of(roots, truncated=True)


def diagonal_roots(*exponents: int) -> RootSet:
    """{sum p_i / a_i : 1 <= p_i <= a_i} for the ideal (x_1^a_1, ..., x_n^a_n)."""
    if not exponents or any(int(a) < 1 for a in exponents):
        raise ValidationError(f"diagonal exponents must be positive integers, got {exponents}")
    ranges = [[Fraction(p, a) for p in range(1, a + 1)] for a in exponents]
    return RootSet.of(sum(combo, Fraction(0)) for combo in itertools.product(*ranges))


def family_roots(a: int, b: int) -> RootSet:
    """Closed form for (x^a y, x y^b): ((b-1) i + (a-1) j) / (ab - 1)."""
    if a < 2 or b < 2:
        raise ValidationError(f"the family needs a, b >= 2, got ({a}, {b})")
    return RootSet.of(
        Fraction((b - 1) * i + (a - 1) * j, a * b - 1)
        for i in range(1, a + 1)
        for j in range(1, b + 1)
    )


def lct(ideal: MonomialIdeal, degree_bound: Fraction | None = None) -> Fraction:
    """Log canonical threshold, the smallest root of b_a(-s)."""
    if ideal.n == 2 and degree_bound is None:
        return roots_dim2(ideal).min_root
    return roots_general(ideal, degree_bound).min_root


def newton_exponents_dim2(support: Sequence[ExponentVector]) -> FractionalPolynomial:
    """Exponents of a nondegenerate f in two variables from its Newton polygon.

    Each u in Z_{>0}^2 lying in conv(0, Q) for a compact edge Q contributes
    L_Q(u) once; values below 1 are mirrored to 2 - alpha. The result is a
    polynomial whose coefficients are the multiplicities.
    """
    ideal = MonomialIdeal(2, tuple(tuple(u) for u in support))
    poly = build_polyhedron(ideal)
    edges = poly.compact_faces(dim=1)
    if not edges:
        raise PreconditionError("the Newton polygon has no compact faces")

    top = max(max(v) for v in poly.vertices)
    values: list[Fraction] = []
    for u in itertools.product(range(1, top + 1), repeat=2):
        for face in edges:
            v1, v2 = face.vertex_set
            cross = v1[0] * v2[1] - v1[1] * v2[0]
            a = Fraction(u[0] * v2[1] - u[1] * v2[0], cross)
            b = Fraction(v1[0] * u[1] - v1[1] * u[0], cross)
            if a >= 0 and b >= 0 and a + b <= 1:
                values.append(face.evaluate(u))
                break

    low = FractionalPolynomial.from_terms((v, 1) for v in values)
    high = FractionalPolynomial.from_terms((2 - v, c) for v, c in low if v < 1)
    return low + high
