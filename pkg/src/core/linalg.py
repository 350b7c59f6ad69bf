"""Exact linear algebra over the rationals and integer lattices."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from fractions import Fraction

import numpy as np


def _as_fraction_array(rows: Iterable[Iterable], cols: int | None = None) -> np.ndarray:
    data = [[Fraction(x) for x in row] for row in rows]
    if not data:
        return np.empty((0, cols or 0), dtype=object)
    width = len(data[0])
    if any(len(row) != width for row in data):
        raise ValueError("All rows of a QMatrix must have the same length")
    arr = np.empty((len(data), width), dtype=object)
    for i, row in enumerate(data):
        arr[i, :] = row
    return arr


class QMatrix:
    """An immutable matrix with exact rational entries.

    Entries live in a numpy object array of Fractions so row operations are
    vectorised without ever leaving exact arithmetic.
    """

    __slots__ = ("_data",)

    def __init__(self, rows: Iterable[Iterable] = (), cols: int | None = None) -> None:
        self._data = _as_fraction_array(rows, cols)
        self._data.flags.writeable = False

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> QMatrix:
        obj = object.__new__(cls)
        obj._data = arr.copy()
        obj._data.flags.writeable = False
        return obj

    @classmethod
    def zeros(cls, rows: int, cols: int) -> QMatrix:
        arr = np.empty((rows, cols), dtype=object)
        arr.fill(Fraction(0))
        return cls._wrap(arr)

    @classmethod
    def identity(cls, size: int) -> QMatrix:
        arr = cls.zeros(size, size)._data.copy()
        for i in range(size):
            arr[i, i] = Fraction(1)
        return cls._wrap(arr)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> QMatrix:
        if not columns:
            return cls.zeros(rows or 0, 0)
        return cls(columns).T

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._data.shape

    @property
    def T(self) -> QMatrix:
        return QMatrix._wrap(self._data.T)

    def __getitem__(self, idx) -> Fraction | np.ndarray:
        return self._data[idx]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return tuple(self._data[i, :])

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(self._data[:, j])

    def __matmul__(self, other: QMatrix) -> QMatrix:
        if self.cols != other.rows:
            raise ValueError(f"Shape mismatch: {self.shape} @ {other.shape}")
        out = QMatrix.zeros(self.rows, other.cols)._data.copy()
        for i in range(self.rows):
            for j in range(other.cols):
                out[i, j] = sum(
                    (self._data[i, k] * other._data[k, j] for k in range(self.cols)),
                    Fraction(0),
                )
        return QMatrix._wrap(out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.all(self._data == other._data))

    def __hash__(self) -> int:
        return hash((self.shape, tuple(self._data.ravel())))

    def __repr__(self) -> str:
        return f"QMatrix({self.rows}x{self.cols})"

    def is_zero(self) -> bool:
        return all(x == 0 for x in self._data.ravel())

    def hstack(self, other: QMatrix) -> QMatrix:
        if self.rows != other.rows:
            raise ValueError("hstack needs matching row counts")
        return QMatrix._wrap(np.hstack([self._data, other._data]))

    def rref(self) -> tuple[QMatrix, list[int]]:
        """Reduced row echelon form and its pivot columns."""
        m = self._data.copy()
        pivots = []
        piv_r = 0
        for piv_c in range(self.cols):
            if piv_r == self.rows:
                break
            nonzero = [r for r in range(piv_r, self.rows) if m[r, piv_c] != 0]
            if not nonzero:
                continue
            r = nonzero[0]
            if r != piv_r:
                m[[piv_r, r]] = m[[r, piv_r]]
            m[piv_r] = m[piv_r] / m[piv_r, piv_c]
            for other in range(self.rows):
                if other != piv_r and m[other, piv_c] != 0:
                    m[other] = m[other] - m[piv_r] * m[other, piv_c]
            pivots.append(piv_c)
            piv_r += 1
        return QMatrix._wrap(m), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> list[tuple[Fraction, ...]]:
        """A basis of {x : M x = 0}."""
        reduced, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        for f in free:
            vec = [Fraction(0)] * self.cols
            vec[f] = Fraction(1)
            for r, p in enumerate(pivots):
                vec[p] = -reduced[r, f]
            basis.append(tuple(vec))
        return basis

    def solve(self, rhs: Sequence) -> tuple[Fraction, ...] | None:
        """One solution of M x = rhs, or None when the system is inconsistent."""
        aug = self.hstack(QMatrix([[x] for x in rhs], cols=1))
        reduced, pivots = aug.rref()
        if self.cols in pivots:
            return None
        sol = [Fraction(0)] * self.cols
        for r, p in enumerate(pivots):
            sol[p] = reduced[r, self.cols]
        return tuple(sol)

    def row_space_basis(self) -> list[tuple[Fraction, ...]]:
        reduced, pivots = self.rref()
        return [reduced.row(r) for r in range(len(pivots))]


def matrix_rank(matrix: QMatrix | Sequence[Sequence]) -> int:
    """Rank over the rationals."""
    if not isinstance(matrix, QMatrix):
        matrix = QMatrix(matrix)
    return matrix.rank()


def in_span(basis: Sequence[Sequence], vector: Sequence) -> bool:
    """Whether `vector` lies in the rational span of `basis`."""
    if not basis:
        return all(x == 0 for x in vector)
    return matrix_rank(QMatrix([*basis, vector])) == matrix_rank(QMatrix(basis))


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(u, v, strict=True)), Fraction(0))


class IntegerLattice:
    """A subgroup of Z^n kept in row Hermite normal form.

    Rows are ordered by strictly increasing pivot column, pivots are positive
    and entries above each pivot are reduced into [0, pivot).
    """

    __slots__ = ("basis", "dim", "pivots")

    def __init__(self, dim: int, generators: Iterable[Sequence[int]] = ()) -> None:
        self.dim = dim
        self.basis: list[list[int]] = []
        self.pivots: list[int] = []
        for vec in generators:
            self.add_vector(vec)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def add_vector(self, vec: Sequence[int]) -> None:
        if len(vec) != self.dim:
            raise ValueError(f"Expected a vector of length {self.dim}, got {len(vec)}")
        rows = [list(r) for r in self.basis]
        rows.append([int(x) for x in vec])
        self.basis, self.pivots = _hermite_normal_form(rows, self.dim)

    def reduce(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Canonical representative of vec + lattice."""
        out = [int(x) for x in vec]
        for row, p in zip(self.basis, self.pivots, strict=True):
            q = out[p] // row[p]
            if q:
                out = [a - q * b for a, b in zip(out, row, strict=True)]
        return tuple(out)

    def __contains__(self, vec: Sequence[int]) -> bool:
        return not any(self.reduce(vec))

    def __repr__(self) -> str:
        return f"IntegerLattice(dim={self.dim}, basis={self.basis})"


def _hermite_normal_form(rows: list[list[int]], dim: int) -> tuple[list[list[int]], list[int]]:
    rows = [r for r in rows if any(r)]
    basis: list[list[int]] = []
    pivots: list[int] = []
    col = 0
    while rows and col < dim:
        active = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        if not active:
            col += 1
            continue
        # Euclid on the column until a single row keeps a nonzero entry
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            head = active[0]
            reduced = []
            for r in active[1:]:
                q = r[col] // head[col]
                r = [a - q * b for a, b in zip(r, head, strict=True)]
                if r[col] != 0:
                    reduced.append(r)
                elif any(r):
                    rest.append(r)
            active = [head, *reduced]
        head = active[0]
        if head[col] < 0:
            head = [-x for x in head]
        basis.append(head)
        pivots.append(col)
        rows = rest
        col += 1
    for i in range(len(basis)):
        for j in range(i):
            p = pivots[i]
            q = basis[j][p] // basis[i][p]
            if q:
                basis[j] = [a - q * b for a, b in zip(basis[j], basis[i], strict=True)]
    return basis, pivots
