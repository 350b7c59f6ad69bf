import json
from io import StringIO
from pathlib import Path

import pytest
from hydra import compose, initialize_config_dir
from hydra.errors import ConfigCompositionException

from src.cli import CommandRequest, run
from src.errors import ValidationError

CONFIG_DIR = str(Path(__file__).parents[1] / "configs")


def _request(*overrides: str) -> CommandRequest:
    with initialize_config_dir(config_dir=CONFIG_DIR, version_base=None):
        cfg = compose(config_name="bsroots", overrides=list(overrides))
    return CommandRequest.from_config(cfg)


def _run(*overrides: str) -> tuple[int, str, str]:
    out, err = StringIO(), StringIO()
    code = run(_request(*overrides), out, err)
    return code, out.getvalue(), err.getvalue()


def _run_json(*overrides: str) -> tuple[int, dict]:
    code, out, _ = _run(*overrides, "json=true")
    return code, json.loads(out)


class TestMonomialCommands:
    def test_roots_json(self, data_dir):
        code, data = _run_json(
            "command=monomial-roots", f"input_path={data_dir / 'ideal_xy5_x3y2_x4y.json'}"
        )
        assert code == 0
        assert len(data["roots"]) == 17
        assert data["roots"][0] == "5/13"
        assert "6/13" in data["roots"]
        assert data["lct"] == "5/13"
        assert data["method"] == "dim2"
        assert data["truncated"] is False

    def test_roots_text(self, data_dir):
        code, out, err = _run(
            "command=monomial-roots", f"input_path={data_dir / 'ideal_xy5_x3y2_x4y.json'}"
        )
        assert code == 0
        assert "17 roots" in out
        assert "lct: 5/13" in out
        assert err == ""

    def test_lct_with_bound(self, data_dir):
        code, data = _run_json(
            "command=lct", f"input_path={data_dir / 'ideal_diagonal_2_3_5.json'}", "bound=2"
        )
        assert code == 0
        assert data == {"lct": "31/30", "method": "general"}

    def test_newton_exponents(self, data_dir):
        code, data = _run_json(
            "command=newton-exponents", f"input_path={data_dir / 'support_x5_y4.json'}"
        )
        assert code == 0
        assert len(data["exponents"]) == 12
        assert data["exponents"][0] == ["9/20", 1]
        assert data["assumes_nondegenerate"] is True


class TestSpectrumCommand:
    def test_spectrum(self):
        code, data = _run_json("command=spectrum", "weights='1/5,1/4'")
        assert code == 0
        assert len(data["spectrum"]) == 12
        assert data["alpha_tilde"] == "9/20"
        assert data["milnor_number"] == 12

    def test_invalid_weights(self):
        code, out, err = _run("command=spectrum", "weights='2/5,2/5'")
        assert code == 2
        assert out == ""
        assert err.startswith("error[2]: invalid weights")

    def test_missing_weights(self):
        code, _, err = _run("command=spectrum")
        assert code == 1
        assert "weights" in err


class TestArrangementCommands:
    def test_report(self, data_dir):
        code, data = _run_json(
            "command=arrangement-report", f"input_path={data_dir / 'cone_square.json'}"
        )
        assert code == 0
        assert data["nu3"] == 2
        assert data["r"] == 7
        assert data["chi"] == 1
        assert data["bfunction"][0] == ["3/5", 1]

    def test_report_from_linear_form_strings(self, data_dir):
        written = _run_json(
            "command=arrangement-report", f"input_path={data_dir / 'cone_square_forms.json'}"
        )
        coefficients = _run_json(
            "command=arrangement-report", f"input_path={data_dir / 'cone_square.json'}"
        )
        assert written == coefficients
        assert written[0] == 0

    def test_report_from_affine_lines(self, data_dir):
        code, data = _run_json(
            "command=arrangement-report", f"input_path={data_dir / 'lines_square.json'}"
        )
        assert code == 0
        assert data["betti"] == [1, 4, 4]

    def test_indeterminate_report(self, data_dir):
        path = data_dir / "cone_seven_lines_four_triples.json"
        code, data = _run_json("command=arrangement-report", f"input_path={path}")
        assert code == 3
        assert data["indeterminate"] is True
        code, out, _ = _run("command=arrangement-report", f"input_path={path}")
        assert code == 3
        assert "nu3 = 4" in out

    def test_generic_b(self, data_dir):
        code, data = _run_json(
            "command=generic-b", f"input_path={data_dir / 'cone_generic_3_4.json'}"
        )
        assert code == 0
        assert data["bfunction"] == [["3/4", 1], ["1", 3], ["5/4", 1], ["3/2", 1]]

    def test_generic_b_rejects_triple_points(self, data_dir):
        code, data = _run_json(
            "command=generic-b", f"input_path={data_dir / 'cone_square.json'}"
        )
        assert code == 2
        assert data == {"error": "not generic", "exit_code": 2}

    def test_certify(self, data_dir):
        code, data = _run_json(
            "command=certify",
            f"input_path={data_dir / 'cone_square_antidiagonal.json'}",
            "k=4",
            "I='1,3,5'",
        )
        assert code == 0
        assert data["verdict_alpha"] == "IN"
        assert data["verdict_alpha_plus_1"] == "NOT_IN"
        assert data["rules_fired"] == ["e", "f"]

    def test_certify_needs_k(self, data_dir):
        code, _, err = _run("command=certify", f"input_path={data_dir / 'cone_square.json'}")
        assert code == 1
        assert err.startswith("error[1]:")

    def test_cone(self, data_dir):
        code, data = _run_json("command=cone", f"input_path={data_dir / 'lines_square.json'}")
        assert code == 0
        assert len(data["forms"]) == 5
        assert data["forms"][0] == ["1", "0", "-1"]
        assert data["infinity_index"] == 5


class TestErrors:
    def test_missing_file(self, tmp_path):
        code, out, err = _run("command=lct", f"input_path={tmp_path / 'absent.json'}")
        assert code == 1
        assert out == ""
        assert err.startswith("error[1]: input file not found")

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        code, data = _run_json("command=monomial-roots", f"input_path={path}")
        assert code == 1
        assert data["exit_code"] == 1
        assert "invalid JSON" in data["error"]

    @pytest.mark.parametrize("value", ["3.7", "abc", "true"])
    def test_certify_rejects_non_integer_k(self, data_dir, value):
        code, out, err = _run(
            "command=certify", f"input_path={data_dir / 'cone_square.json'}", f"k={value}"
        )
        assert code == 1
        assert out == ""
        assert err.startswith("error[1]: k must be an integer")

    @pytest.mark.parametrize("value", ["2.5", "last"])
    def test_non_integer_infinity(self, data_dir, value):
        code, data = _run_json(
            "command=arrangement-report",
            f"input_path={data_dir / 'cone_square.json'}",
            f"infinity={value}",
        )
        assert code == 1
        assert data["exit_code"] == 1
        assert data["error"].startswith("infinity must be an integer")

    def test_non_integer_index_set(self, data_dir):
        code, _, err = _run(
            "command=certify",
            f"input_path={data_dir / 'cone_square_antidiagonal.json'}",
            "k=4",
            "I=[1,2.5,5]",
        )
        assert code == 1
        assert "I must be an integer" in err

    def test_unknown_command(self):
        code, _, err = _run("command=roots", "input_path=x.json")
        assert code == 1
        assert "unknown command" in err

    def test_missing_input(self):
        code, _, err = _run("command=lct")
        assert code == 1
        assert "input_path" in err

    def test_missing_command(self):
        with pytest.raises(ValidationError, match="no command"):
            _request()

    def test_unknown_option(self):
        with pytest.raises(ConfigCompositionException):
            _request("command=lct", "colour=red")

    def test_output_is_deterministic(self, data_dir):
        path = data_dir / "cone_square_diagonals.json"
        args = ("command=arrangement-report", f"input_path={path}")
        assert _run(*args) == _run(*args)
