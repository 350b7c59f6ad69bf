from fractions import Fraction

import numpy as np
import pytest

from src.core.fracpoly import FractionalPolynomial, frac_poly_mul_div
from src.core.linalg import IntegerLattice, QMatrix, in_span, matrix_rank
from src.core.rational import (
    RootMultiset,
    RootSet,
    binomial,
    format_rational,
    parse_rational,
    rational_arith,
)
from src.errors import InexactDivisionError, ValidationError

F = Fraction


def _random_poly(rng: np.random.Generator, denom: int) -> FractionalPolynomial:
    size = int(rng.integers(1, 4))
    exps = rng.integers(0, 3 * denom, size=size)
    coeffs = rng.integers(-3, 4, size=size)
    return FractionalPolynomial.from_terms((F(int(e), denom), int(c)) for e, c in zip(exps, coeffs))


def _random_matrix(rng: np.random.Generator, rows: int, cols: int) -> QMatrix:
    nums = rng.integers(-3, 4, size=(rows, cols))
    dens = rng.integers(1, 5, size=(rows, cols))
    return QMatrix([[F(int(a), int(b)) for a, b in zip(r, s)] for r, s in zip(nums, dens)])


class TestRational:
    @pytest.mark.parametrize(
        ("text", "expected"),
        [("3/6", F(1, 2)), ("-4/2", F(-2)), ("7", F(7)), (" 5 / 13 ", F(5, 13)), (4, F(4))],
    )
    def test_parse(self, text, expected):
        assert parse_rational(text) == expected

    @pytest.mark.parametrize("text", ["1/0", "abc", "1.5", "", True])
    def test_parse_rejects(self, text):
        with pytest.raises(ValidationError):
            parse_rational(text)

    def test_format(self):
        assert format_rational(F(10, 6)) == "5/3"
        assert format_rational(F(13, 13)) == "1"
        assert format_rational(F(-3, 4)) == "-3/4"

    def test_arith(self):
        assert rational_arith(F(1, 3), F(1, 6), "add") == F(1, 2)
        assert rational_arith(F(1, 3), F(1, 6), "sub") == F(1, 6)
        assert rational_arith(F(2, 3), F(3, 4), "mul") == F(1, 2)
        assert rational_arith(F(2, 3), F(4, 3), "div") == F(1, 2)
        assert rational_arith(F(2, 3), F(3, 4), "cmp") == -1
        assert rational_arith(F(3, 4), F(3, 4), "cmp") == 0
        with pytest.raises(ZeroDivisionError):
            rational_arith(F(1), F(0), "div")

    def test_binomial(self):
        assert binomial(4, 2) == 6
        assert binomial(2, 3) == 0
        assert binomial(3, 0) == 1

    def test_root_set(self):
        roots = RootSet.of([F(4, 3), F(2, 3), 1, F(2, 3)])
        assert roots.sorted() == [F(2, 3), F(1), F(4, 3)]
        assert roots.min_root == F(2, 3)
        assert roots.to_json() == ["2/3", "1", "4/3"]
        assert roots.below(F(1)).sorted() == [F(2, 3), F(1)]
        assert roots.below(F(1), inclusive=False).sorted() == [F(2, 3)]

    def test_root_set_rejects_nonpositive(self):
        with pytest.raises(ValidationError):
            RootSet.of([F(1, 2), F(0)])

    def test_root_multiset(self):
        roots = RootMultiset.from_factors([1, F(2, 3), 1, F(4, 3), 1])
        assert roots.entries == ((F(2, 3), 1), (F(1), 3), (F(4, 3), 1))
        assert roots.multiplicity(1) == 3
        assert roots.multiplicity(F(1, 2)) == 0
        assert roots.degree == 5
        assert roots.max_root == F(4, 3)
        assert roots.to_json() == [["2/3", 1], ["1", 3], ["4/3", 1]]

    def test_root_multiset_rejects_negative_root(self):
        with pytest.raises(ValidationError):
            RootMultiset.from_mapping({F(-1, 2): 1})


class TestLinalg:
    def test_rank_and_nullspace(self):
        M = QMatrix([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
        assert M.rank() == 2
        for vec in M.nullspace():
            assert all(x == 0 for x in (M @ QMatrix([[x] for x in vec])).column(0))

    def test_rref(self):
        reduced, pivots = QMatrix([[2, 4], [1, 3]]).rref()
        assert pivots == [0, 1]
        assert reduced == QMatrix.identity(2)

    def test_solve(self):
        M = QMatrix([[1, 1], [1, -1]])
        assert M.solve([3, 1]) == (F(2), F(1))
        assert QMatrix([[1, 1], [2, 2]]).solve([1, 3]) is None

    def test_in_span(self):
        assert in_span([(1, 0, 1), (0, 1, 1)], (2, 3, 5))
        assert not in_span([(1, 0, 1), (0, 1, 1)], (0, 0, 1))
        assert in_span([], (0, 0))

    def test_rank_of_transpose(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            M = _random_matrix(rng, 4, 6)
            assert matrix_rank(M) == matrix_rank(M.T)
            assert matrix_rank(M) <= 4

    def test_integer_lattice(self):
        lattice = IntegerLattice(2, [(2, -3)])
        assert lattice.basis == [[2, -3]]
        assert (4, -6) in lattice
        assert (1, 0) not in lattice
        assert lattice.reduce((3, 1)) == (1, 4)

    def test_integer_lattice_hermite_form(self):
        lattice = IntegerLattice(2, [(4, 6), (6, 9)])
        assert lattice.rank == 1
        assert lattice.basis == [[2, 3]]
        full = IntegerLattice(2, [(2, 1), (1, 1)])
        assert full.basis == [[1, 0], [0, 1]]


class TestFractionalPolynomial:
    def test_exact_division(self):
        t = FractionalPolynomial.monomial(1)
        half = FractionalPolynomial.monomial(F(1, 2))
        one = FractionalPolynomial.monomial(0)
        assert (t - half).exact_div(half - one) == half
        assert half * half == t

    def test_inexact_division_raises(self):
        t = FractionalPolynomial.monomial(1)
        third = FractionalPolynomial.monomial(F(1, 3))
        half = FractionalPolynomial.monomial(F(1, 2))
        one = FractionalPolynomial.monomial(0)
        with pytest.raises(InexactDivisionError):
            (t - third).exact_div(half - one)

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            FractionalPolynomial.monomial(1).exact_div(FractionalPolynomial({}))

    def test_mul_div_dispatch(self):
        p = FractionalPolynomial.from_terms([(F(1, 3), 1), (1, 2)])
        q = FractionalPolynomial.monomial(F(1, 2), 3)
        prod = frac_poly_mul_div(p, q, "mul")
        assert prod.coefficient(F(5, 6)) == 3
        assert prod.coefficient(F(3, 2)) == 6
        assert frac_poly_mul_div(prod, q, "exact_div") == p
        with pytest.raises(ValueError, match="Unknown"):
            frac_poly_mul_div(p, q, "pow")

    def test_mirror_and_mass(self):
        p = FractionalPolynomial.from_terms([(F(2, 3), 1), (1, 2), (F(4, 3), 1)])
        assert p.mirrored(1) == p
        assert p.total_mass() == 4
        assert p.to_json() == [["2/3", 1], ["1", 2], ["4/3", 1]]

    def test_ring_laws(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            p, q, r = (_random_poly(rng, int(rng.integers(1, 5))) for _ in range(3))
            assert p * (q + r) == p * q + p * r
            assert (p * q) * r == p * (q * r)
            assert p * q == q * p
            if not q.is_zero():
                assert (p * q).exact_div(q) == p
