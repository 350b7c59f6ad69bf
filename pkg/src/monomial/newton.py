"""Newton polyhedra of monomial ideals and the semigroups attached to their faces.

For an ideal with exponent set Gamma, P is conv(Gamma) + R_{>=0}^n. A face Q
not contained in a coordinate hyperplane carries a functional L_Q equal to 1
on Q, the semigroup M_Q generated by u - v (u in Gamma, v in Gamma on Q) and
its shift M'_Q = v0 + M_Q.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from src.core.linalg import IntegerLattice, QMatrix, dot, matrix_rank
from src.core.rational import format_rational
from src.errors import PreconditionError, ValidationError

log = logging.getLogger(__name__)

ExponentVector = tuple[int, ...]

MAX_DIMENSION = 3


def _sub(u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def _unit(n: int, i: int) -> tuple[int, ...]:
    return tuple(int(j == i) for j in range(n))


@dataclass(frozen=True)
class MonomialIdeal:
    """A monomial ideal given by exponent vectors, kept minimally generated."""

    n: int
    generators: tuple[ExponentVector, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError(f"ambient dimension must be >= 1, got {self.n}")
        gens = set()
        for g in self.generators:
            g = tuple(int(x) for x in g)
            if len(g) != self.n:
                raise ValidationError(f"generator {g} does not have length {self.n}")
            if any(x < 0 for x in g):
                raise ValidationError(f"generator {g} has a negative exponent")
            gens.add(g)
        if not gens:
            raise ValidationError("a monomial ideal needs at least one generator")
        if any(not any(g) for g in gens):
            raise ValidationError("the unit ideal is not supported (zero generator)")
        minimal = [
            g for g in gens if not any(h != g and all(a <= b for a, b in zip(h, g)) for h in gens)
        ]
        object.__setattr__(self, "generators", tuple(sorted(minimal)))

    @classmethod
    def from_json(cls, data: dict) -> MonomialIdeal:
        try:
            return cls(int(data["n"]), tuple(tuple(g) for g in data["generators"]))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed monomial ideal: {exc}") from exc

    def to_json(self) -> dict:
        return {"n": self.n, "generators": [list(g) for g in self.generators]}

    def contains(self, u: Sequence[int]) -> bool:
        """Whether x^u lies in the ideal."""
        return any(all(a >= b for a, b in zip(u, g)) for g in self.generators)


@dataclass(frozen=True)
class Facet:
    """The inequality normal . u >= offset, normals coordinatewise >= 0."""

    normal: tuple[Fraction, ...]
    offset: Fraction

    def value(self, u: Sequence) -> Fraction:
        return dot(self.normal, u)

    def is_tight(self, u: Sequence) -> bool:
        return self.value(u) == self.offset

    def integer_form(self) -> tuple[np.ndarray, int]:
        """Integer normal and offset describing the same inequality."""
        scale = math.lcm(1, *(x.denominator for x in (*self.normal, self.offset)))
        normal = np.array([int(x * scale) for x in self.normal], dtype=np.int64)
        return normal, int(self.offset * scale)

    def to_json(self) -> dict:
        return {
            "normal": [format_rational(x) for x in self.normal],
            "offset": format_rational(self.offset),
        }


@dataclass(frozen=True)
class Face:
    """A face of P stored as its vertices plus the coordinate rays it contains."""

    dim: int
    vertex_set: tuple[ExponentVector, ...]
    ray_directions: tuple[int, ...]
    in_coordinate_hyperplane: bool
    facets: tuple[int, ...]
    L_Q: tuple[Fraction, ...] | None
    V_Q_basis: tuple[tuple[Fraction, ...], ...]

    @property
    def compact(self) -> bool:
        return not self.ray_directions

    @property
    def n(self) -> int:
        return len(self.vertex_set[0])

    def evaluate(self, u: Sequence) -> Fraction:
        if self.L_Q is None:
            raise PreconditionError("faces inside a coordinate hyperplane carry no L_Q")
        return dot(self.L_Q, u)

    def spans(self, u: Sequence) -> bool:
        """Whether u lies in the linear span V_Q."""
        if len(self.V_Q_basis) == self.n:
            return True
        return matrix_rank(QMatrix([*self.V_Q_basis, u])) == len(self.V_Q_basis)

    def label(self) -> str:
        verts = ",".join(str(v) for v in self.vertex_set)
        rays = "".join(f"+e{r + 1}" for r in self.ray_directions)
        return f"[{verts}]{rays}"


@dataclass(frozen=True)
class NewtonPolyhedron:
    ideal: MonomialIdeal
    vertices: tuple[ExponentVector, ...]
    facet_inequalities: tuple[Facet, ...]
    faces: tuple[Face, ...]

    def contains(self, u: Sequence) -> bool:
        return all(f.value(u) >= f.offset for f in self.facet_inequalities)

    def admissible_faces(self, dim: int | None = None) -> list[Face]:
        """Faces not contained in any coordinate hyperplane."""
        return [
            q
            for q in self.faces
            if not q.in_coordinate_hyperplane and (dim is None or q.dim == dim)
        ]

    def compact_faces(self, dim: int | None = None) -> list[Face]:
        return [q for q in self.faces if q.compact and (dim is None or q.dim == dim)]


def polyhedron_dump(poly: NewtonPolyhedron) -> dict:
    """Debug representation of the polyhedron."""
    return {
        "vertices": [list(v) for v in poly.vertices],
        "facets": [f.to_json() for f in poly.facet_inequalities],
        "faces": [
            {
                "dim": q.dim,
                "vertices": [list(v) for v in q.vertex_set],
                "rays": list(q.ray_directions),
                "in_coordinate_hyperplane": q.in_coordinate_hyperplane,
                "L_Q": None if q.L_Q is None else [format_rational(x) for x in q.L_Q],
            }
            for q in poly.faces
        ],
    }


def _candidate_facets(gens: Sequence[ExponentVector], n: int) -> list[Facet]:
    """Supporting hyperplanes through n affinely independent generators/rays.

    Parameters
    ----------
    gens : Sequence[ExponentVector]
        The minimal generators of the ideal.
    n : int
        The ambient dimension.

    Returns
    -------
    list[Facet]
        Distinct facets, normalised to offset 1 where the offset is positive,
        with the coordinate facets (offset 0) last.
    """
    found: dict[tuple, Facet] = {}
    for k in range(1, n + 1):
        for pts in itertools.combinations(gens, k):
            for dirs in itertools.combinations(range(n), n - k):
                # The hyperplane through k generators parallel to n - k axis rays
                rows = [(*g, -1) for g in pts] + [(*_unit(n, i), 0) for i in dirs]
                kernel = QMatrix(rows).nullspace()
                if len(kernel) != 1:
                    continue
                for sign in (1, -1):
                    vec = [sign * x for x in kernel[0]]
                    normal, offset = tuple(vec[:n]), vec[n]
                    # Keep it only if the whole polyhedron lies on its upper side
                    if any(c < 0 for c in normal) or not any(normal):
                        continue
                    if any(dot(normal, g) < offset for g in gens):
                        continue
                    scale = offset if offset > 0 else max(normal)
                    facet = Facet(tuple(c / scale for c in normal), offset / scale)
                    found[(facet.normal, facet.offset)] = facet
    return sorted(found.values(), key=lambda f: (f.offset == 0, f.normal))


def _face_from(
    vertices: Sequence[ExponentVector],
    rays: Sequence[int],
    facets: Sequence[Facet],
    n: int,
) -> Face:
    v0 = vertices[0]
    directions = [_sub(v, v0) for v in vertices[1:]] + [_unit(n, r) for r in rays]
    dim = matrix_rank(QMatrix(directions)) if directions else 0
    containing = tuple(
        i
        for i, f in enumerate(facets)
        if all(f.is_tight(v) for v in vertices) and all(f.normal[r] == 0 for r in rays)
    )
    in_coord = any(all(v[i] == 0 for v in vertices) and i not in rays for i in range(n))
    functional = None
    if not in_coord:
        tight = [facets[i] for i in containing]
        if any(f.offset != 1 for f in tight):
            raise AssertionError(
                "a face off the coordinate hyperplanes lies on a facet with offset 0"
            )
        functional = tuple(sum(f.normal[i] for f in tight) / len(tight) for i in range(n))
    span = QMatrix([*vertices, *(_unit(n, r) for r in rays)]).row_space_basis()
    return Face(
        dim=dim,
        vertex_set=tuple(sorted(vertices)),
        ray_directions=tuple(sorted(rays)),
        in_coordinate_hyperplane=in_coord,
        facets=containing,
        L_Q=functional,
        V_Q_basis=tuple(span),
    )


def build_polyhedron(ideal: MonomialIdeal) -> NewtonPolyhedron:
    """Vertices, facets and the complete face list of the Newton polyhedron."""
    n = ideal.n
    if n > MAX_DIMENSION:
        raise PreconditionError(f"unsupported dimension: n={n} > {MAX_DIMENSION}")
    gens = ideal.generators
    facets = _candidate_facets(gens, n)

    def tight_rank(g: ExponentVector) -> int:
        normals = [f.normal for f in facets if f.is_tight(g)]
        return matrix_rank(normals) if normals else 0

    vertices = tuple(g for g in gens if tight_rank(g) == n)

    faces: dict[tuple, Face] = {}
    for size in range(1, n + 1):
        for subset in itertools.combinations(facets, size):
            on = [v for v in vertices if all(f.is_tight(v) for f in subset)]
            if not on:
                continue
            rays = [i for i in range(n) if all(f.normal[i] == 0 for f in subset)]
            key = (tuple(sorted(on)), tuple(rays))
            if key not in faces:
                faces[key] = _face_from(on, rays, facets, n)

    ordered = sorted(faces.values(), key=lambda q: (q.dim, q.vertex_set, q.ray_directions))
    log.debug(f"Newton polyhedron of {gens}: {len(vertices)} vertices, {len(facets)} facets")
    return NewtonPolyhedron(ideal, vertices, tuple(facets), tuple(ordered))


def face_functional(face: Face) -> tuple[Fraction, ...]:
    """The functional L_Q, identically 1 on the face."""
    if face.in_coordinate_hyperplane or face.L_Q is None:
        raise PreconditionError(f"face {face.label()} lies in a coordinate hyperplane")
    return face.L_Q


def lattice_points_on_face(
    ideal: MonomialIdeal, face: Face, facets: Sequence[Facet], window_pad: int | None = None
) -> list[ExponentVector]:
    """Points of Gamma on the face, truncated to the box [0, max coordinate + pad]^n."""
    n = ideal.n
    pad = n if window_pad is None else window_pad
    top = max(max(g) for g in ideal.generators) + pad
    grid = np.array(list(itertools.product(range(top + 1), repeat=n)), dtype=np.int64)

    mask = np.ones(len(grid), dtype=bool)
    for i, facet in enumerate(facets):
        normal, offset = facet.integer_form()
        values = grid @ normal
        mask &= values == offset if i in face.facets else values >= offset
    in_gamma = np.zeros(len(grid), dtype=bool)
    for g in ideal.generators:
        in_gamma |= np.all(grid >= np.array(g, dtype=np.int64), axis=1)
    mask &= in_gamma
    return sorted(tuple(int(x) for x in p) for p in grid[mask])


@dataclass(frozen=True)
class SemigroupPresentation:
    """M_Q as (lattice G_Q) + N-combinations of positive-degree generators."""

    face: Face
    functional: tuple[Fraction, ...]
    anchor: ExponentVector
    gamma_points: tuple[ExponentVector, ...]
    positive_generators: tuple[tuple[tuple[int, ...], Fraction], ...]
    group: IntegerLattice
    _memo: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def group_basis(self) -> list[list[int]]:
        return self.group.basis

    def degree(self, w: Sequence[int]) -> Fraction:
        return dot(self.functional, w)

    def member(self, w: Sequence[int], shifted: bool = False) -> bool:
        """Whether w lies in M_Q (or in M'_Q = anchor + M_Q when shifted)."""
        w = tuple(int(x) for x in w)
        if shifted:
            w = _sub(w, self.anchor)
        target = self.degree(w)
        if target < 0:
            return False
        return self._reachable(self.group.reduce(w), target, 0)

    def _reachable(self, residual: tuple[int, ...], remaining: Fraction, idx: int) -> bool:
        if remaining == 0:
            return not any(residual)
        if idx == len(self.positive_generators):
            return False
        key = (residual, remaining, idx)
        if key in self._memo:
            return self._memo[key]
        gen, deg = self.positive_generators[idx]
        last = idx == len(self.positive_generators) - 1
        counts = range(math.floor(remaining / deg), -1, -1)
        if last:
            counts = [int(remaining / deg)] if (remaining / deg).denominator == 1 else []
        result = False
        for k in counts:
            nxt = self.group.reduce(tuple(r - k * g for r, g in zip(residual, gen)))
            if self._reachable(nxt, remaining - k * deg, idx + 1):
                result = True
                break
        self._memo[key] = result
        return result


def semigroup_data(
    poly: NewtonPolyhedron, face: Face, window_pad: int | None = None
) -> SemigroupPresentation:
    """Presentation of M_Q for a face off the coordinate hyperplanes."""
    ideal = poly.ideal
    n = ideal.n
    functional = face_functional(face)
    points = lattice_points_on_face(ideal, face, poly.facet_inequalities, window_pad)
    if not points:
        raise AssertionError(f"Gamma meets face {face.label()} in no lattice point")
    anchor = points[0]

    group = IntegerLattice(n, [_sub(p, anchor) for p in points[1:]])
    for r in face.ray_directions:
        group.add_vector(_unit(n, r))

    positive: dict[tuple[int, ...], Fraction] = {}
    for g in ideal.generators:
        deg = dot(functional, g) - 1
        if deg > 0:
            positive[_sub(g, anchor)] = deg
    for i in range(n):
        if functional[i] > 0:
            positive[_unit(n, i)] = functional[i]
    ordered = tuple(sorted(positive.items(), key=lambda item: (-item[1], item[0])))

    return SemigroupPresentation(
        face=face,
        functional=functional,
        anchor=anchor,
        gamma_points=tuple(points),
        positive_generators=ordered,
        group=group,
    )


def member(presentation: SemigroupPresentation, w: Iterable[int], shifted: bool = False) -> bool:
    return presentation.member(tuple(w), shifted)
