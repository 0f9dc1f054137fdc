"""Text and JSON formats: .pbf truth tables, .poly coefficient maps,
DIMACS CNF, and perturbation-instance JSON.

Serialization is canonical: parse -> serialize -> parse is the identity and
serializing twice yields byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from pbflab.boolfn import (
    MAX_ARITY,
    UNDEF,
    PartialFunction,
    point_from_bits,
)

_PBF_CHARS = {0: "0", 1: "1", UNDEF: "*"}
_PBF_VALUES = {"0": 0, "1": 1, "*": UNDEF}


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_pbf_text(text: str) -> PartialFunction:
    n = None
    table = None
    points: list[tuple[int, int, int]] = []
    for lineno, line in _content_lines(text):
        parts = line.split()
        if parts[0] == "n":
            if n is not None:
                raise FormatError("duplicate arity line", lineno)
            if len(parts) != 2 or not parts[1].isdigit():
                raise FormatError("expected 'n <int>'", lineno)
            n = int(parts[1])
            if not 1 <= n <= MAX_ARITY:
                raise FormatError(f"arity must be in [1, {MAX_ARITY}]", lineno)
        elif parts[0] == "table":
            if n is None:
                raise FormatError("table before arity line", lineno)
            if table is not None or points:
                raise FormatError("table conflicts with earlier data", lineno)
            if len(parts) != 2:
                raise FormatError("expected 'table <chars>'", lineno)
            chars = parts[1]
            if len(chars) != 1 << n:
                raise FormatError(
                    f"table must have 2**{n} = {1 << n} entries, got {len(chars)}",
                    lineno,
                )
            try:
                table = bytes(_PBF_VALUES[c] for c in chars)
            except KeyError as exc:
                raise FormatError(f"invalid table character {exc.args[0]!r}", lineno)
        elif parts[0] == "point":
            if n is None:
                raise FormatError("point before arity line", lineno)
            if table is not None:
                raise FormatError("point conflicts with table line", lineno)
            if len(parts) != 3 or parts[2] not in ("0", "1"):
                raise FormatError("expected 'point <bits> <0|1>'", lineno)
            if len(parts[1]) != n:
                raise FormatError(f"bitstring must have length {n}", lineno)
            try:
                x = point_from_bits(parts[1])
            except ValueError as exc:
                raise FormatError(str(exc), lineno)
            points.append((lineno, x, int(parts[2])))
        else:
            raise FormatError(f"unknown directive {parts[0]!r}", lineno)
    if n is None:
        raise FormatError("missing arity line 'n <int>'")
    if table is None:
        buf = bytearray([UNDEF]) * (1 << n)
        for lineno, x, v in points:
            if buf[x] != UNDEF and buf[x] != v:
                raise FormatError("conflicting value for point", lineno)
            buf[x] = v
        table = bytes(buf)
    return PartialFunction(n, table)


def serialize_pbf(f: PartialFunction) -> str:
    chars = "".join(_PBF_CHARS[v] for v in f.table)
    return f"n {f.n}\ntable {chars}\n"


def load_pbf(path) -> PartialFunction:
    return parse_pbf_text(Path(path).read_text())


def save_pbf(f: PartialFunction, path) -> None:
    Path(path).write_text(serialize_pbf(f))


# ---------------------------------------------------------------------------
# .poly


def parse_poly_text(text: str):
    from pbflab.polynomials import MultilinearPoly

    n = None
    basis = None
    coeffs: dict[int, float] = {}
    for lineno, line in _content_lines(text):
        parts = line.split()
        if parts[0] == "n":
            n = int(parts[1])
        elif parts[0] == "basis":
            if len(parts) != 2 or parts[1] not in ("fourier", "monomial"):
                raise FormatError("expected 'basis fourier|monomial'", lineno)
            basis = parts[1]
        else:
            if n is None or basis is None:
                raise FormatError("coefficient before header lines", lineno)
            if len(parts) != 2 or len(parts[0]) != n:
                raise FormatError("expected '<mask bits> <coefficient>'", lineno)
            try:
                mask = point_from_bits(parts[0])
                value = float(parts[1])
            except ValueError as exc:
                raise FormatError(str(exc), lineno)
            if mask in coeffs:
                raise FormatError("duplicate coefficient mask", lineno)
            coeffs[mask] = value
    if n is None or basis is None:
        raise FormatError("missing 'n' or 'basis' header")
    return MultilinearPoly(n, basis, coeffs)


def serialize_poly(p) -> str:
    from pbflab.boolfn import point_to_bits

    lines = [f"n {p.n}", f"basis {p.basis}"]
    for mask in sorted(p.coeffs):
        lines.append(f"{point_to_bits(mask, p.n)} {p.coeffs[mask]!r}")
    return "\n".join(lines) + "\n"


def load_poly(path):
    return parse_poly_text(Path(path).read_text())


def save_poly(p, path) -> None:
    Path(path).write_text(serialize_poly(p))


# ---------------------------------------------------------------------------
# DIMACS CNF


@dataclass(frozen=True)
class CNF:
    """A CNF formula: clauses hold signed 1-based literals."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]


def parse_dimacs_text(text: str) -> CNF:
    num_vars = None
    num_clauses = None
    clauses: list[tuple[int, ...]] = []
    pending: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormatError("expected 'p cnf <vars> <clauses>'", lineno)
            num_vars, num_clauses = int(parts[2]), int(parts[3])
            continue
        if num_vars is None:
            raise FormatError("clause before problem line", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise FormatError(f"invalid literal {tok!r}", lineno)
            if lit == 0:
                clauses.append(tuple(pending))
                pending = []
            else:
                if abs(lit) > num_vars:
                    raise FormatError(f"literal {lit} exceeds variable count", lineno)
                pending.append(lit)
    if pending:
        clauses.append(tuple(pending))
    if num_vars is None:
        raise FormatError("missing problem line")
    if num_clauses is not None and len(clauses) != num_clauses:
        raise FormatError(
            f"problem line declares {num_clauses} clauses, found {len(clauses)}"
        )
    return CNF(num_vars, tuple(clauses))


def serialize_dimacs(cnf: CNF) -> str:
    lines = [f"p cnf {cnf.num_vars} {len(cnf.clauses)}"]
    for clause in cnf.clauses:
        lines.append(" ".join(str(l) for l in clause) + " 0")
    return "\n".join(lines) + "\n"


def load_dimacs(path) -> CNF:
    return parse_dimacs_text(Path(path).read_text())


# ---------------------------------------------------------------------------
# perturbation instance JSON


def pf_instance_to_json(inst) -> str:
    payload = {
        "schema": 1,
        "arity": inst.t,
        "p": list(inst.p_values),
        "q": [list(q) for q in inst.q_values],
        "epsilon": inst.epsilon,
        "B": inst.box_bound,
        "origin": inst.origin,
    }
    return json.dumps(payload, sort_keys=True, indent=1) + "\n"


def pf_instance_from_json(text: str):
    from pbflab.perturbation import PerturbationInstance

    payload = json.loads(text)
    return PerturbationInstance(
        t=int(payload["arity"]),
        p_values=tuple(float(v) for v in payload["p"]),
        q_values=tuple(tuple(float(v) for v in q) for q in payload["q"]),
        epsilon=float(payload["epsilon"]),
        box_bound=float(payload["B"]),
        origin=payload.get("origin", "general"),
    )


def load_pf_instance(path):
    return pf_instance_from_json(Path(path).read_text())


def save_pf_instance(inst, path) -> None:
    Path(path).write_text(pf_instance_to_json(inst))
