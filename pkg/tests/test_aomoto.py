from fractions import Fraction

import pytest

from src.arrangements.aomoto import (
    Verdict,
    aomoto_cohomology,
    build_aomoto,
    certify_root,
    hodge_prediction,
    nonresonance_check,
    residue_assignment,
    v_subspace,
)
from src.arrangements.lattice import Arrangement, euler_betti, root_candidates
from src.errors import PreconditionError, ValidationError

F = Fraction

# x = 0, y = 0 and x + y = 1 with the line at infinity last
THREE_GENERIC_LINES = Arrangement(3, ((1, 0, 0), (0, 1, 0), (1, 1, -1), (0, 0, 1)), 3)


class TestResidues:
    def test_assignment(self, square):
        R = residue_assignment(square, 3, [0, 2])
        assert R.alpha == F(3, 5)
        assert R.residues == (F(2, 5), F(-3, 5), F(2, 5), F(-3, 5), F(2, 5))
        assert sum(R.residues) == 0
        assert R.to_json()["I"] == [1, 3]

    @pytest.mark.parametrize(
        ("k", "I"),
        [(3, [0]), (3, [0, 4]), (0, []), (6, [0, 1, 2, 3, 4]), (2, [7])],
    )
    def test_rejects(self, square, k, I):
        with pytest.raises(ValidationError):
            residue_assignment(square, k, I)

    def test_needs_an_infinity_line(self):
        A = Arrangement(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)))
        with pytest.raises(PreconditionError):
            residue_assignment(A, 1, [])

    def test_nonresonance(self, square_diagonals, square_antidiagonal):
        R = residue_assignment(square_diagonals, 5, [0, 1, 2, 4])
        ok, violating = nonresonance_check(square_diagonals, R)
        assert ok
        assert violating == []
        # x - z, x + z and the line at infinity each carry 1/3
        R = residue_assignment(square_antidiagonal, 4, [0, 1, 2])
        ok, violating = nonresonance_check(square_antidiagonal, R)
        assert not ok
        assert [e.label() for e in violating] == ["{1,2,6}"]


class TestAomotoComplex:
    @pytest.mark.parametrize(
        ("name", "k", "I"),
        [
            ("square", 2, [0]),
            ("square_antidiagonal", 4, [0, 2, 4]),
            ("cross_pair_line", 4, [0, 1, 2]),
            ("square_diagonals", 5, [0, 1, 2, 4]),
        ],
    )
    def test_complex_and_euler_identity(self, request, name, k, I):
        A = request.getfixturevalue(name)
        C = build_aomoto(A, residue_assignment(A, k, I))
        assert (C.d1 @ C.d0).is_zero()
        assert C.dims == (1, A.d - 1, euler_betti(A).b2)
        h0, h1, h2 = aomoto_cohomology(C)
        assert h0 - h1 + h2 == euler_betti(A).chi

    def test_top_degree_does_not_depend_on_residues(self, square_antidiagonal):
        A = square_antidiagonal
        assignments = [(1, []), (4, [0, 2, 4]), (3, [1, 3])]
        dims = {build_aomoto(A, residue_assignment(A, k, I)).dims[2] for k, I in assignments}
        assert dims == {6}

    def test_generic_lines_concentrate_in_top_degree(self):
        A = THREE_GENERIC_LINES
        for k, I in [(1, []), (2, [0]), (2, [2]), (3, [0, 1])]:
            h = aomoto_cohomology(build_aomoto(A, residue_assignment(A, k, I)))
            assert h == (0, 0, 1)

    def test_square_with_antidiagonal(self, square_antidiagonal):
        A = square_antidiagonal
        C = build_aomoto(A, residue_assignment(A, 4, [0, 2, 4]))
        assert aomoto_cohomology(C) == (0, 1, 3)
        V = v_subspace(C, [0, 2, 4])
        assert (V.dim, V.nonzero, V.full) == (3, True, True)

    def test_cross_pair_line(self, cross_pair_line):
        A = cross_pair_line
        C = build_aomoto(A, residue_assignment(A, 4, [0, 1, 2]))
        assert aomoto_cohomology(C)[2] == 5
        V = v_subspace(C, [0, 1, 2])
        assert V.nonzero
        assert not V.full

    def test_square_diagonals(self, square_diagonals):
        A = square_diagonals
        C = build_aomoto(A, residue_assignment(A, 5, [0, 1, 2, 4]))
        assert aomoto_cohomology(C)[2] == 4
        assert v_subspace(C, [0, 1, 2, 4]).full

    def test_small_index_sets_span_nothing(self, square):
        C = build_aomoto(square, residue_assignment(square, 2, [1]))
        V = v_subspace(C, [1])
        assert (V.dim, V.nonzero) == (0, False)

    def test_hodge_prediction(self):
        assert hodge_prediction(1, 3) == 0
        assert hodge_prediction(3, 3) == 1
        assert hodge_prediction(4, 3) == 3


class TestCertify:
    def test_below_alpha_prime(self, square):
        cert = certify_root(square, 3)
        assert cert.verdict_alpha == Verdict.IN
        assert cert.verdict_alpha_plus_1 == Verdict.NOT_IN
        assert cert.rules_fired == ("b", "d")

    def test_single_residue_set(self, square):
        cert = certify_root(square, 1)
        assert cert.verdict_alpha == Verdict.UNKNOWN
        assert cert.verdict_alpha_plus_1 == Verdict.IN
        assert "c" in cert.rules_fired
        assert cert.diagnostics["h"][2] >= 1

    def test_search(self, square):
        assert certify_root(square, 2).verdict_alpha_plus_1 == Verdict.UNKNOWN
        cert = certify_root(square, 2, search=True)
        assert cert.verdict_alpha_plus_1 == Verdict.IN

    def test_search_cap(self, square):
        cert = certify_root(square, 3, search=True, search_cap=2)
        assert "exceeds the cap" in cert.diagnostics["search"]

    @pytest.mark.parametrize("k", [4, 5])
    def test_top_values(self, square, k):
        cert = certify_root(square, k)
        assert cert.verdict_alpha == Verdict.IN
        assert cert.verdict_alpha_plus_1 == Verdict.NOT_IN
        assert "a" in cert.rules_fired

    @pytest.mark.parametrize(
        ("name", "k", "I", "verdicts", "rule"),
        [
            ("square_antidiagonal", 4, [0, 2, 4], (Verdict.IN, Verdict.NOT_IN), "f"),
            ("cross_pair_line", 4, [0, 1, 2], (Verdict.IN, Verdict.IN), "c"),
            ("square_diagonals", 5, [0, 1, 2, 4], (Verdict.IN, Verdict.NOT_IN), "f"),
        ],
    )
    def test_with_residue_set(self, request, name, k, I, verdicts, rule):
        A = request.getfixturevalue(name)
        cert = certify_root(A, k, I)
        assert (cert.verdict_alpha, cert.verdict_alpha_plus_1) == verdicts
        assert "e" in cert.rules_fired
        assert rule in cert.rules_fired
        assert cert.alpha in root_candidates(A)
        assert "conflicts" not in cert.diagnostics

    def test_json(self, square_antidiagonal):
        data = certify_root(square_antidiagonal, 4, [0, 2, 4]).to_json()
        assert data["alpha"] == "2/3"
        assert data["alpha_plus_1"] == "5/3"
        assert data["verdict_alpha"] == "IN"
        assert data["diagnostics"]["h"] == [0, 1, 3]
        assert data["diagnostics"]["I"] == [1, 3, 5]

    def test_preconditions(self, square):
        with pytest.raises(ValidationError):
            certify_root(square, 6)
        with pytest.raises(PreconditionError):
            certify_root(Arrangement(2, ((1, 0), (0, 1), (1, 1))), 1)
