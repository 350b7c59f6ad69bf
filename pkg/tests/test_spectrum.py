import itertools
from fractions import Fraction

import numpy as np
import pytest

from src.core.rational import RootMultiset
from src.errors import InexactDivisionError, PreconditionError, ValidationError
from src.singularity.spectrum import (
    WeightVector,
    brieskorn_exponents,
    exponents,
    milnor_number,
    spectrum_summary,
    spectrum_wh,
    wh_root_multiset,
    window_check,
)

F = Fraction


class TestWeightVector:
    def test_parse(self):
        w = WeightVector.parse("1/5, 1/4")
        assert w.weights == (F(1, 5), F(1, 4))
        assert w.n == 2
        assert w.alpha_tilde == F(9, 20)

    @pytest.mark.parametrize("values", ["1", "0,1/2", "3/2", ""])
    def test_rejects(self, values):
        with pytest.raises(ValidationError):
            WeightVector.parse(values)


class TestSpectrum:
    def test_brieskorn_curve(self):
        sp = spectrum_wh(WeightVector.parse("1/5,1/4"))
        assert set(sp.exponents) == {F(i, 5) + F(j, 4) for i in range(1, 5) for j in range(1, 4)}
        assert all(c == 1 for _, c in sp)
        assert sp.total_mass() == 12

    def test_node(self):
        sp = spectrum_wh(WeightVector.parse("1/2,1/2"))
        assert dict(sp) == {F(1): 1}

    def test_repeated_exponent(self):
        sp = spectrum_wh(WeightVector.parse("1/3,1/3"))
        assert dict(sp) == {F(2, 3): 1, F(1): 2, F(4, 3): 1}
        assert exponents(sp).sorted() == [F(2, 3), F(1), F(4, 3)]

    def test_mixed_weights(self):
        sp = spectrum_wh(WeightVector.parse("1/2,1/3"))
        assert exponents(sp).sorted() == [F(5, 6), F(7, 6)]

    def test_invalid_weights(self):
        w = WeightVector.parse("2/5,2/5")
        with pytest.raises(InexactDivisionError, match="invalid weights"):
            spectrum_wh(w)

    @pytest.mark.parametrize(
        "exps", [*itertools.product(range(2, 7), repeat=2), (2, 3, 5), (3, 3, 4), (2, 2, 2)]
    )
    def test_matches_brieskorn(self, exps):
        w = WeightVector(tuple(F(1, a) for a in exps))
        sp = spectrum_wh(w)
        assert exponents(sp) == brieskorn_exponents(*exps)
        assert sp.total_mass() == milnor_number(w)
        assert sp.mirrored(F(w.n, 2)) == sp
        assert min(sp.exponents) == w.alpha_tilde
        assert max(sp.exponents) == w.n - w.alpha_tilde

    def test_random_weights_are_symmetric(self):
        rng = np.random.default_rng(13)
        for _ in range(15):
            n = int(rng.integers(1, 4))
            w = WeightVector(tuple(F(1, int(a)) for a in rng.integers(2, 7, size=n)))
            sp = spectrum_wh(w)
            assert sp.mirrored(F(n, 2)) == sp
            assert sp.total_mass() == milnor_number(w)

    def test_summary(self):
        summary = spectrum_summary([F(1, 3), F(1, 3)])
        assert summary == {
            "spectrum": [["2/3", 1], ["1", 2], ["4/3", 1]],
            "exponents": ["2/3", "1", "4/3"],
            "alpha_tilde": "2/3",
        }

    def test_milnor_number(self):
        assert milnor_number(WeightVector.parse("1/5,1/4")) == 12
        with pytest.raises(InexactDivisionError):
            milnor_number(WeightVector.parse("2/5,2/5"))


class TestMicrolocalRoots:
    def test_roots_are_simple_exponents(self):
        roots = wh_root_multiset(WeightVector.parse("1/3,1/3"))
        assert roots == RootMultiset.from_mapping({F(2, 3): 1, F(1): 1, F(4, 3): 1})

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_ordinary_double_point(self, n):
        roots = wh_root_multiset(WeightVector(tuple([F(1, 2)] * n)))
        assert roots.entries == ((F(n, 2), 1),)

    def test_window_check_accepts_exponents(self):
        w = WeightVector.parse("1/5,1/4")
        ok, violations = window_check(wh_root_multiset(w), w.alpha_tilde, w.n)
        assert ok
        assert violations == []

    def test_window_check_reports_violations(self):
        roots = RootMultiset.from_mapping({F(1, 2): 1, F(1): 3, F(3, 2): 1, F(2): 1})
        ok, violations = window_check(roots, F(1, 2), 2)
        assert not ok
        # 2 lies outside the window and also breaks the multiplicity bound
        assert len(violations) == 3
        assert any("exceeds" in v for v in violations)
        assert any("outside" in v for v in violations)

    def test_window_check_needs_minimal_root(self):
        roots = RootMultiset.from_mapping({F(1, 2): 1, F(1): 1})
        with pytest.raises(PreconditionError):
            window_check(roots, F(1), 2)
