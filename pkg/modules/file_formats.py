"""
Text formats for generator matrices and point sets.

Matrix file:

    p e modulus k n
    a11 a12 ... a1n
    ...
    ak1 ak2 ... akn

Point-set file:

    PG N q
    x0 x1 ... xN
    ...

Tokens are separated by single spaces, every line ends with one newline and
no line carries trailing whitespace. A repeated point line is a multiplicity.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np

from .errors import FormatError, PreconditionError
from .gf import FieldSpec, field_for_order, make_field
from .linalg import Matrix
from .projgeom import PointSet

PathLike = Union[str, Path]


def _lines(text: str) -> List[str]:
    if not text:
        raise FormatError("file is empty", line=1)
    if not text.endswith("\n"):
        raise FormatError("last line must end with a newline", line=text.count("\n") + 1)
    return text[:-1].split("\n")


def _tokens(line: str, lineno: int, expected: Optional[int] = None) -> List[Tuple[str, int]]:
    """Split on single spaces, returning (token, 1-based column) pairs."""
    if line != line.rstrip():
        raise FormatError("trailing whitespace", line=lineno, column=len(line.rstrip()) + 1)
    tokens = []
    column = 1
    for token in line.split(" "):
        if not token:
            raise FormatError("tokens must be separated by a single space", line=lineno, column=column)
        tokens.append((token, column))
        column += len(token) + 1
    if expected is not None and len(tokens) != expected:
        column = tokens[expected][1] if len(tokens) > expected else len(line) + 1
        raise FormatError(f"expected {expected} entries, found {len(tokens)}", line=lineno, column=column)
    return tokens


def _unsigned(token: str, lineno: int, column: int) -> int:
    if not token.isdigit():
        raise FormatError(f"{token!r} is not an unsigned integer", line=lineno, column=column)
    return int(token)


def _read(path: PathLike) -> str:
    with open(path, "r", encoding="utf-8", newline="") as f:
        return f.read()


def _write(path: PathLike, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    return path


def _entries(lines: List[str], start: int, width: int, q: int) -> np.ndarray:
    rows = []
    for offset, line in enumerate(lines):
        lineno = start + offset
        row = []
        for token, column in _tokens(line, lineno, width):
            value = _unsigned(token, lineno, column)
            if value >= q:
                raise FormatError(f"{value} is not an element of GF({q})", line=lineno, column=column)
            row.append(value)
        rows.append(row)
    return np.array(rows, dtype=np.int64).reshape(len(rows), width)


@dataclass(frozen=True)
class MatrixFile:
    """A generator matrix together with the header it was written with."""

    matrix: Matrix
    modulus: int

    @property
    def field(self) -> FieldSpec:
        return self.matrix.field

    @classmethod
    def from_matrix(cls, matrix: Matrix) -> "MatrixFile":
        return cls(matrix, matrix.field.modulus)

    @classmethod
    def parse(cls, text: str) -> "MatrixFile":
        lines = _lines(text)
        header = _tokens(lines[0], 1, 5)
        p, e, modulus, k, n = (_unsigned(token, 1, column) for token, column in header)
        try:
            field = make_field(p, e)
        except PreconditionError as exc:
            raise FormatError(str(exc), line=1, column=header[0][1]) from exc
        allowed = (0, field.modulus) if e == 1 else (field.modulus,)
        if modulus not in allowed:
            raise FormatError(f"modulus must be {field.modulus} for GF({field.q})", line=1, column=header[2][1])
        if k < 1 or n < 1:
            raise FormatError("k and n must be positive", line=1, column=header[3][1])
        if len(lines) != k + 1:
            raise FormatError(f"expected {k} matrix rows, found {len(lines) - 1}",
                              line=len(lines) + 1 if len(lines) < k + 1 else k + 2)
        return cls(Matrix(field, _entries(lines[1:], 2, n, field.q)), modulus)

    def emit(self) -> str:
        f = self.field
        k, n = self.matrix.shape
        out = [f"{f.p} {f.e} {self.modulus} {k} {n}"]
        out.extend(" ".join(str(int(x)) for x in row) for row in self.matrix.array)
        return "\n".join(out) + "\n"

    @classmethod
    def read(cls, path: PathLike) -> "MatrixFile":
        return cls.parse(_read(path))

    def write(self, path: PathLike) -> Path:
        return _write(path, self.emit())


def parse_pointset(text: str) -> PointSet:
    lines = _lines(text)
    header = _tokens(lines[0], 1, 3)
    if header[0][0] != "PG":
        raise FormatError("header must start with PG", line=1, column=1)
    N, q = (_unsigned(token, 1, column) for token, column in header[1:])
    if N < 1:
        raise FormatError("projective dimension must be at least 1", line=1, column=header[1][1])
    try:
        field = field_for_order(q)
    except PreconditionError as exc:
        raise FormatError(str(exc), line=1, column=header[2][1]) from exc
    points = _entries(lines[1:], 2, N + 1, q)
    for offset, row in enumerate(points):
        if not row.any():
            raise FormatError("the zero vector is not a point", line=offset + 2, column=1)
    return PointSet(field, points, rank=N + 1)


def emit_pointset(points: PointSet) -> str:
    out = [f"PG {points.N} {points.field.q}"]
    for row, m in points:
        out.extend([" ".join(str(x) for x in row)] * m)
    return "\n".join(out) + "\n"


def read_pointset(path: PathLike) -> PointSet:
    return parse_pointset(_read(path))


def write_pointset(points: PointSet, path: PathLike) -> Path:
    return _write(path, emit_pointset(points))
