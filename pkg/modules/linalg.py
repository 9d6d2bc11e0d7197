"""
Dense exact linear algebra over a FieldSpec.

Matrices are immutable value types holding element encodings in a read-only
numpy array. Elimination uses exact field inverses only.
"""
from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import FieldMismatchError, PreconditionError
from .gf import FieldSpec


class Matrix:
    """Dense matrix over a finite field."""

    __slots__ = ("field", "_a")

    def __init__(self, field: FieldSpec, entries, cols: Optional[int] = None):
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, cols or 0)
        if arr.ndim != 2:
            raise PreconditionError("matrix entries must be a two-dimensional array", constraint="shape")
        field.validate(arr)
        arr.setflags(write=False)
        self.field = field
        self._a = arr

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self._a.shape

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self._a.T)

    def row(self, i: int) -> np.ndarray:
        return self._a[i].copy()

    def columns(self, indices: Sequence[int]) -> "Matrix":
        return Matrix(self.field, self._a[:, list(indices)], cols=len(indices))

    def hstack(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        return Matrix(self.field, np.hstack([self._a, other._a]))

    def vstack(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        return Matrix(self.field, np.vstack([self._a, other._a]), cols=self.cols)

    def tolist(self) -> List[List[int]]:
        return self._a.tolist()

    def _same_field(self, other: "Matrix") -> None:
        if other.field != self.field:
            raise FieldMismatchError(f"matrices over {self.field} and {other.field}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        if self.cols != other.rows:
            raise PreconditionError(f"cannot multiply {self.shape} by {other.shape}", constraint="shape")
        return Matrix(self.field, self.field.matmul(self._a, other._a), cols=other.cols)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and other.field == self.field
            and other.shape == self.shape
            and np.array_equal(other._a, self._a)
        )

    def __hash__(self) -> int:
        return hash((self.field, self.shape, self._a.tobytes()))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self._a.tolist())
        return f"Matrix({self.field}, {self.rows}x{self.cols}: {body})"


def rref_array(field: FieldSpec, a: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form of an encoded array and its pivot columns."""
    a = np.array(a, dtype=np.int64)
    rows, cols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nonzero = np.nonzero(a[r:, c])[0]
        if nonzero.size == 0:
            continue
        i = r + int(nonzero[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = field.mul(a[r], field.inv(int(a[r, c])))
        factors = a[:, c].copy()
        factors[r] = 0
        if np.any(factors):
            a = field.sub(a, field.mul(factors[:, None], a[r][None, :]))
        pivots.append(c)
        r += 1
    return a, pivots


def rref(m: Matrix) -> Tuple[Matrix, List[int]]:
    reduced, pivots = rref_array(m.field, m.array)
    return Matrix(m.field, reduced, cols=m.cols), pivots


def rank(m: Matrix) -> int:
    return len(rref_array(m.field, m.array)[1])


def kernel(m: Matrix) -> Matrix:
    """Basis (as rows) of the right null space."""
    reduced, pivots = rref_array(m.field, m.array)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    basis = np.zeros((len(free), m.cols), dtype=np.int64)
    for b, f in enumerate(free):
        basis[b, f] = 1
        for i, pc in enumerate(pivots):
            basis[b, pc] = m.field.neg(int(reduced[i, f]))
    return Matrix(m.field, basis, cols=m.cols)


def left_kernel(m: Matrix) -> Matrix:
    """Basis of {v : v m = 0}."""
    return kernel(m.T)


def same_rowspace(a: Matrix, b: Matrix) -> bool:
    if a.field != b.field:
        raise FieldMismatchError(f"matrices over {a.field} and {b.field}")
    if a.cols != b.cols:
        raise PreconditionError(f"column counts differ: {a.cols} vs {b.cols}", constraint="shape")
    ra, pa = rref_array(a.field, a.array)
    rb, pb = rref_array(b.field, b.array)
    return pa == pb and np.array_equal(ra[: len(pa)], rb[: len(pb)])


def in_rowspace(m: Matrix, v) -> bool:
    v = np.asarray(v, dtype=np.int64).reshape(1, -1)
    return rank(m.vstack(Matrix(m.field, v))) == rank(m)


def inverse(m: Matrix) -> Matrix:
    n = m.rows
    if m.cols != n:
        raise PreconditionError("only square matrices are invertible", constraint="shape")
    reduced, pivots = rref_array(m.field, np.hstack([m.array, np.eye(n, dtype=np.int64)]))
    if pivots[:n] != list(range(n)):
        raise PreconditionError("matrix is singular", constraint="invertible")
    return Matrix(m.field, reduced[:, n:])


def complete_basis(field: FieldSpec, rows: np.ndarray) -> np.ndarray:
    """Extend independent rows to a basis of F_q^n using standard vectors, given rows first."""
    rows = np.atleast_2d(np.asarray(rows, dtype=np.int64))
    n = rows.shape[1]
    basis = rows
    current = len(rref_array(field, basis)[1])
    if current != rows.shape[0]:
        raise PreconditionError("rows are linearly dependent", constraint="independent")
    for j in range(n):
        if current == n:
            break
        e = np.zeros((1, n), dtype=np.int64)
        e[0, j] = 1
        candidate = np.vstack([basis, e])
        r = len(rref_array(field, candidate)[1])
        if r > current:
            basis, current = candidate, r
    return basis


def batch_rank(field: FieldSpec, stack: np.ndarray) -> np.ndarray:
    """Ranks of a stack of equally-shaped matrices, eliminated together."""
    a = np.array(stack, dtype=np.int64)
    if a.ndim != 3:
        raise PreconditionError("batch_rank expects a (batch, rows, cols) array", constraint="shape")
    if a.shape[2] > a.shape[1]:
        a = np.ascontiguousarray(a.transpose(0, 2, 1))
    batch, m, n = a.shape
    ranks = np.zeros(batch, dtype=np.int64)
    rows = np.arange(m)
    for c in range(n):
        candidates = (a[:, :, c] != 0) & (rows[None, :] >= ranks[:, None])
        found = candidates.any(axis=1)
        if not found.any():
            continue
        b = np.nonzero(found)[0]
        src = np.argmax(candidates[b], axis=1)
        dst = ranks[b]
        src_rows = a[b, src, :].copy()
        a[b, src, :] = a[b, dst, :]
        pivot = field.mul(src_rows, field.inv(src_rows[:, c])[:, None])
        a[b, dst, :] = pivot
        factors = np.where(rows[None, :] > dst[:, None], a[b, :, c], 0)
        a[b] = field.sub(a[b], field.mul(factors[:, :, None], pivot[:, None, :]))
        ranks[b] += 1
    return ranks


# --- vector enumeration in lexicographic order ---

def projective_count(q: int, k: int) -> int:
    return (q ** k - 1) // (q - 1)


def projective_block(field: FieldSpec, k: int, start: int, stop: int) -> np.ndarray:
    """Rows start..stop-1 of the lexicographic list of normalized nonzero vectors of F_q^k."""
    q = field.q
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.zeros((idx.size, k), dtype=np.int64)
    offset = 0
    for lead in range(k - 1, -1, -1):
        size = q ** (k - 1 - lead)
        mask = (idx >= offset) & (idx < offset + size)
        if mask.any():
            t = idx[mask] - offset
            block = np.zeros((t.size, k), dtype=np.int64)
            block[:, lead] = 1
            for pos in range(k - 1, lead, -1):
                block[:, pos] = t % q
                t = t // q
            out[mask] = block
        offset += size
    return out


def projective_representatives(field: FieldSpec, k: int) -> np.ndarray:
    return projective_block(field, k, 0, projective_count(field.q, k))


def vector_block(field: FieldSpec, k: int, start: int, stop: int) -> np.ndarray:
    """Rows start..stop-1 of F_q^k in lexicographic order."""
    t = np.arange(start, stop, dtype=np.int64)
    out = np.zeros((t.size, k), dtype=np.int64)
    for pos in range(k - 1, -1, -1):
        out[:, pos] = t % field.q
        t = t // field.q
    return out


def all_vectors(field: FieldSpec, k: int) -> np.ndarray:
    return vector_block(field, k, 0, field.q ** k)


def normalize_rows(field: FieldSpec, a: np.ndarray) -> np.ndarray:
    """Scale each nonzero row so its first nonzero entry is 1."""
    a = np.atleast_2d(np.asarray(a, dtype=np.int64))
    nonzero = a != 0
    has = nonzero.any(axis=1)
    lead_pos = np.argmax(nonzero, axis=1)
    lead = a[np.arange(a.shape[0]), lead_pos]
    scale = np.ones(a.shape[0], dtype=np.int64)
    if has.any():
        scale[has] = field.inv(lead[has])
    return field.mul(a, scale[:, None])
