"""Readers for the JSON inputs of the command line tools."""

import json
import re
from collections.abc import Iterable
from pathlib import Path

from dotmap import DotMap

from src.arrangements.lattice import Arrangement, affine_cone
from src.core.rational import parse_rational
from src.errors import ValidationError
from src.monomial.newton import MonomialIdeal
from src.singularity.spectrum import WeightVector

_INTEGER_RE = re.compile(r"\s*[+-]?\d+\s*")


def read_json_file(file_path: Path | str) -> DotMap:
    """Reads a JSON document, returning it as a DotMap object."""
    file_path = Path(file_path)
    if not file_path.is_file():
        raise ValidationError(f"input file not found: {file_path}")
    try:
        with file_path.open() as f:
            data = json.load(f)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"invalid JSON in {file_path}: {exc.msg} (line {exc.lineno})"
        ) from exc
    if not isinstance(data, dict):
        raise ValidationError(f"expected a JSON object in {file_path}")
    return DotMap(data, _dynamic=False)


def _require_keys(data: DotMap, *keys: str) -> None:
    missing = [k for k in keys if k not in data]
    if missing:
        raise ValidationError(f"missing keys: {', '.join(missing)}")


def _integer_vectors(rows, name: str) -> tuple[tuple[int, ...], ...]:
    if not isinstance(rows, list | tuple) or not rows:
        raise ValidationError(f"'{name}' must be a nonempty list of integer vectors")
    out = []
    for row in rows:
        if not isinstance(row, list | tuple) or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in row
        ):
            raise ValidationError(f"'{name}' entry {row!r} is not a list of integers")
        out.append(tuple(row))
    return tuple(out)


def read_ideal_file(file_path: Path | str) -> MonomialIdeal:
    """{"n": int, "generators": [[int, ...], ...]}"""
    data = read_json_file(file_path)
    _require_keys(data, "n", "generators")
    if not isinstance(data.n, int):
        raise ValidationError("'n' must be an integer")
    return MonomialIdeal(data.n, _integer_vectors(data.generators, "generators"))


def read_support_file(file_path: Path | str) -> tuple[tuple[int, ...], ...]:
    """{"support": [[i, j], ...]}; a monomial ideal document is accepted as well."""
    data = read_json_file(file_path)
    key = "support" if "support" in data else "generators"
    _require_keys(data, key)
    support = _integer_vectors(data[key], key)
    if any(len(u) != 2 for u in support):
        raise ValidationError("Newton polygon exponents need two-dimensional support")
    return support


def read_arrangement_file(file_path: Path | str, infinity: int | None = None) -> Arrangement:
    """Reads either an arrangement or an affine line list, which is coned.

    `infinity` is a 1-based override of the infinity index.
    """
    data = read_json_file(file_path)
    if "affine_lines" in data:
        arrangement = read_affine_lines(data)
    else:
        _require_keys(data, "n", "forms")
        if not isinstance(data.n, int):
            raise ValidationError("'n' must be an integer")
        arrangement = Arrangement.from_json(data.toDict())
    infinity = parse_integer(infinity, "infinity")
    if infinity is not None:
        if not 1 <= infinity <= arrangement.d:
            raise ValidationError(f"infinity index {infinity} out of range 1..{arrangement.d}")
        arrangement = arrangement.with_infinity(infinity - 1)
    return arrangement


def read_affine_lines(data: DotMap | dict) -> Arrangement:
    """{"affine_lines": [[a, b, c], ...]} for the lines a x + b y = c."""
    lines = data["affine_lines"]
    if not isinstance(lines, list):
        raise ValidationError("'affine_lines' must be a list of [a, b, c] triples")
    return affine_cone([[parse_rational(x) for x in line] for line in lines])


def parse_weights(value: str | Iterable | None) -> WeightVector:
    """Weights from "1/5,1/4" or a list of rationals."""
    if value is None:
        raise ValidationError("the spectrum command needs weights=[p/q,...]")
    if not isinstance(value, str):
        value = [str(v) for v in value]
    return WeightVector.parse(value)


def parse_index_set(value: str | int | Iterable | None) -> list[int] | None:
    """1-based indices from "1,3,4", a single integer or a list."""
    if value is None:
        return None
    if isinstance(value, int | float):
        value = [value]
    if isinstance(value, str):
        value = [v for v in value.split(",") if v.strip()]
    try:
        indices = [parse_integer(v, "I") for v in value]
    except TypeError as exc:
        raise ValidationError(f"not an index list: {value!r}") from exc
    if None in indices:
        raise ValidationError(f"not an index list: {value!r}")
    return indices


def parse_integer(value, name: str) -> int | None:
    """A whole number from an int or its decimal text; floats such as 3.7 are rejected."""
    if value is None:
        return None
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    if isinstance(value, str) and _INTEGER_RE.fullmatch(value):
        return int(value)
    raise ValidationError(f"{name} must be an integer, got {value!r}")
