"""Command dispatch and report rendering for the bsroots entrypoint."""

from __future__ import annotations

import json
import logging
import sys
from collections.abc import Callable
from dataclasses import dataclass
from typing import TextIO

from dotmap import DotMap
from hydra.utils import to_absolute_path
from omegaconf import DictConfig, OmegaConf
from omegaconf.errors import MissingMandatoryValue
from rich import box
from rich.console import Console
from rich.table import Table

from src.arrangements.aomoto import certify_root
from src.arrangements.lattice import arrangement_report, generic_bfunction
from src.core.rational import RootMultiset, format_rational, parse_rational
from src.errors import BSRootsError, IndeterminateError, ValidationError
from src.monomial.bfunction import newton_exponents_dim2, roots_dim2, roots_general
from src.singularity.spectrum import milnor_number, spectrum_summary
from src.utils import (
    parse_index_set,
    parse_integer,
    parse_weights,
    read_affine_lines,
    read_arrangement_file,
    read_ideal_file,
    read_json_file,
    read_support_file,
)

log = logging.getLogger(__name__)

COMMANDS = (
    "monomial-roots",
    "lct",
    "spectrum",
    "newton-exponents",
    "arrangement-report",
    "generic-b",
    "certify",
    "cone",
)

# commands reading no input file
_NO_INPUT = {"spectrum"}


@dataclass(frozen=True)
class CommandRequest:
    command: str
    input_path: str | None
    options: DotMap

    @classmethod
    def from_config(cls, cfg: DictConfig) -> CommandRequest:
        try:
            command = cfg.command
        except MissingMandatoryValue as exc:
            raise ValidationError(f"no command given, choose one of {', '.join(COMMANDS)}") from exc
        options = DotMap(
            json=bool(cfg.json),
            bound=cfg.bound,
            weights=OmegaConf.to_object(cfg.weights)
            if OmegaConf.is_list(cfg.weights)
            else cfg.weights,
            k=cfg.k,
            I=OmegaConf.to_object(cfg.I) if OmegaConf.is_list(cfg.I) else cfg.I,
            search=bool(cfg.search),
            infinity=cfg.infinity,
            width=int(cfg.width),
            search_cap=int(cfg.limits.search_cap),
            window_pad=cfg.limits.window_pad,
            _dynamic=False,
        )
        path = None if cfg.input_path is None else to_absolute_path(str(cfg.input_path))
        return cls(str(command), path, options)

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ValidationError(
                f"unknown command '{self.command}', choose one of {', '.join(COMMANDS)}"
            )
        if self.command not in _NO_INPUT and self.input_path is None:
            raise ValidationError(f"command '{self.command}' needs input_path=<file>")
        if self.options.bound is not None and parse_rational(str(self.options.bound)) <= 0:
            raise ValidationError(f"bound must be positive, got {self.options.bound}")
        # whole-number options are checked before any input is read
        parse_integer(self.options.k, "k")
        parse_integer(self.options.infinity, "infinity")


@dataclass
class Outcome:
    payload: dict
    render: Callable[[Console], None]
    exit_code: int = 0


def _roots_table(title: str, roots: list, marks: dict | None = None) -> Table:
    table = Table(title=title, box=box.SIMPLE, show_edge=False)
    table.add_column("root", justify="right")
    table.add_column("", justify="left")
    for r in roots:
        table.add_row(format_rational(r), (marks or {}).get(r, ""))
    return table


def _multiset_table(title: str, roots: RootMultiset) -> Table:
    table = Table(title=title, box=box.SIMPLE, show_edge=False)
    table.add_column("root", justify="right")
    table.add_column("multiplicity", justify="right")
    for r, m in roots.entries:
        table.add_row(format_rational(r), str(m))
    return table


def _monomial_roots(request: CommandRequest, lct_only: bool = False) -> Outcome:
    ideal = read_ideal_file(request.input_path)
    opts = request.options
    if ideal.n == 2 and opts.bound is None:
        roots = roots_dim2(ideal)
        method = "dim2"
        provenance = "method: union over Newton polygon edges of the S_Q window roots (n = 2)"
    else:
        roots = roots_general(ideal, opts.bound, opts.window_pad)
        method = "general"
        provenance = "method: face semigroup enumeration up to the degree bound"
    lct = roots.min_root
    payload = {
        "roots": roots.to_json(),
        "lct": format_rational(lct),
        "truncated": roots.truncated,
        "method": method,
    }
    if lct_only:
        payload = {"lct": payload["lct"], "method": method}

    def render(console: Console) -> None:
        console.print(provenance)
        if not lct_only:
            title = f"{len(roots)} roots of b(-s)"
            console.print(_roots_table(title, roots.sorted(), {lct: "lct"}))
        console.print(f"lct: {format_rational(lct)}")
        if roots.truncated:
            console.print("truncated: roots above the degree bound are not listed")

    return Outcome(payload, render)


def _spectrum(request: CommandRequest) -> Outcome:
    weights = parse_weights(request.options.weights)
    payload = spectrum_summary(weights)
    payload["milnor_number"] = milnor_number(weights)

    def render(console: Console) -> None:
        console.print("method: product formula for weighted-homogeneous singularities")
        table = Table(title="spectrum", box=box.SIMPLE, show_edge=False)
        table.add_column("exponent", justify="right")
        table.add_column("coefficient", justify="right")
        for e, c in payload["spectrum"]:
            table.add_row(e, str(c))
        console.print(table)
        console.print(f"exponents: {', '.join(payload['exponents'])}")
        console.print(f"alpha_tilde: {payload['alpha_tilde']}")
        console.print(f"milnor number: {payload['milnor_number']}")

    return Outcome(payload, render)


def _newton_exponents(request: CommandRequest) -> Outcome:
    exps = newton_exponents_dim2(read_support_file(request.input_path))
    payload = {"exponents": exps.to_json(), "assumes_nondegenerate": True}

    def render(console: Console) -> None:
        console.print("method: lattice points under the compact edges of the Newton polygon")
        table = Table(title="exponents", box=box.SIMPLE, show_edge=False)
        table.add_column("exponent", justify="right")
        table.add_column("multiplicity", justify="right")
        for e, c in payload["exponents"]:
            table.add_row(e, str(c))
        console.print(table)
        console.print("assumes nondegenerate coefficients")

    return Outcome(payload, render)


def _arrangement_report(request: CommandRequest) -> Outcome:
    A = read_arrangement_file(request.input_path, request.options.infinity)
    report = arrangement_report(A)
    payload = report.to_json()

    def render(console: Console) -> None:
        console.print(f"arrangement: n = {report.n}, d = {report.d}, generic = {report.generic}")
        table = Table(title="edges", box=box.SIMPLE, show_edge=False)
        for col in ("codim", "hyperplanes", "m", "dense"):
            table.add_column(col, justify="right")
        for e in report.edges:
            table.add_row(str(e.codim), e.label(), str(e.m_L), "yes" if e.dense else "")
        console.print(table)
        if report.betti is not None:
            b = report.betti
            console.print(
                f"nu3 = {b.nu3}, nu2' = {b.nu2_prime}, nu3' = {b.nu3_prime}, "
                f"betti = ({b.b0}, {b.b1}, {b.b2}), chi = {b.chi}"
            )
        console.print(f"alpha' = {payload['alpha_prime']}, alpha_min = {payload['alpha_min']}")
        console.print(f"candidates: {', '.join(payload['candidates'])}")
        if report.bfunction is not None:
            method = "generic formula" if report.generic else f"low degree formula, r = {report.r}"
            console.print(_multiset_table(f"b-function roots ({method})", report.bfunction))
        for note in report.notes:
            console.print(f"note: {note}")

    return Outcome(payload, render, 3 if report.indeterminate else 0)


def _generic_b(request: CommandRequest) -> Outcome:
    A = read_arrangement_file(request.input_path, request.options.infinity)
    roots = generic_bfunction(A)
    payload = {"bfunction": roots.to_json(), "n": A.n, "d": A.d}

    def render(console: Console) -> None:
        console.print("method: closed formula for generic central arrangements")
        console.print(_multiset_table("b-function roots", roots))

    return Outcome(payload, render)


def _certify(request: CommandRequest) -> Outcome:
    opts = request.options
    k = parse_integer(opts.k, "k")
    if k is None:
        raise ValidationError("the certify command needs k=<int>")
    A = read_arrangement_file(request.input_path, opts.infinity)
    indices = parse_index_set(opts.I)
    I = None if indices is None else [i - 1 for i in indices]
    if I is not None and any(not 0 <= i < A.d for i in I):
        raise ValidationError(f"I has indices outside 1..{A.d}")
    cert = certify_root(A, k, I, search=opts.search, search_cap=opts.search_cap)
    payload = cert.to_json()

    def render(console: Console) -> None:
        console.print("method: Aomoto complex criteria")
        table = Table(box=box.SIMPLE, show_edge=False)
        table.add_column("value", justify="right")
        table.add_column("verdict")
        table.add_row(payload["alpha"], payload["verdict_alpha"])
        table.add_row(payload["alpha_plus_1"], payload["verdict_alpha_plus_1"])
        console.print(table)
        console.print(f"rules fired: {', '.join(cert.rules_fired) or 'none'}")
        for key, value in cert.diagnostics.items():
            console.print(f"{key}: {value}")

    return Outcome(payload, render)


def cone(affine_input: dict) -> dict:
    """Arrangement JSON of the cone over an affine line arrangement."""
    return read_affine_lines(affine_input).to_json()


def _cone(request: CommandRequest) -> Outcome:
    data = read_json_file(request.input_path)
    if "affine_lines" not in data:
        raise ValidationError("missing keys: affine_lines")
    payload = cone(data)

    def render(console: Console) -> None:
        console.print(json.dumps(payload, indent=2))

    return Outcome(payload, render)


_HANDLERS: dict[str, Callable[[CommandRequest], Outcome]] = {
    "monomial-roots": _monomial_roots,
    "lct": lambda r: _monomial_roots(r, lct_only=True),
    "spectrum": _spectrum,
    "newton-exponents": _newton_exponents,
    "arrangement-report": _arrangement_report,
    "generic-b": _generic_b,
    "certify": _certify,
    "cone": _cone,
}


def _report_error(exc: BSRootsError, as_json: bool, out: TextIO, err: TextIO) -> int:
    reason = " ".join(str(exc).split())
    if as_json:
        payload = {"error": reason, "exit_code": exc.exit_code}
        if isinstance(exc, IndeterminateError):
            payload["candidates"] = exc.candidates
        out.write(json.dumps(payload) + "\n")
    else:
        err.write(f"error[{exc.exit_code}]: {reason}\n")
    return exc.exit_code


def run(request: CommandRequest, out: TextIO | None = None, err: TextIO | None = None) -> int:
    """Execute one command, writing the report to `out`; returns the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        request.validate()
        log.info(f"Running {request.command} on {request.input_path}")
        outcome = _HANDLERS[request.command](request)
    except BSRootsError as exc:
        log.debug(f"{type(exc).__name__}: {exc}")
        return _report_error(exc, request.options.json, out, err)

    if request.options.json:
        out.write(json.dumps(outcome.payload, indent=2) + "\n")
    else:
        console = Console(
            file=out, width=request.options.width, color_system=None, highlight=False
        )
        outcome.render(console)
    return outcome.exit_code
