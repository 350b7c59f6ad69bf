from pathlib import Path

import pytest
import rootutils

root = rootutils.setup_root(search_from=__file__, pythonpath=True)

from src.arrangements.lattice import Arrangement
from src.utils import read_arrangement_file, read_ideal_file

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def square() -> Arrangement:
    """Cone over x = +-1, y = +-1."""
    return read_arrangement_file(DATA_DIR / "cone_square.json")


@pytest.fixture
def square_antidiagonal() -> Arrangement:
    return read_arrangement_file(DATA_DIR / "cone_square_antidiagonal.json")


@pytest.fixture
def cross_pair_line() -> Arrangement:
    return read_arrangement_file(DATA_DIR / "cone_cross_pair_line.json")


@pytest.fixture
def square_diagonals() -> Arrangement:
    return read_arrangement_file(DATA_DIR / "cone_square_diagonals.json")


@pytest.fixture
def seven_lines() -> Arrangement:
    """Seven lines with four triple points, where the low degree formula is undecided."""
    return read_arrangement_file(DATA_DIR / "cone_seven_lines_four_triples.json")


@pytest.fixture
def shifted_ideal():
    """(x y^5, x^3 y^2, x^4 y), the ideal with a nonempty shifted window."""
    return read_ideal_file(DATA_DIR / "ideal_xy5_x3y2_x4y.json")
