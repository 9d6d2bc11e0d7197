"""
Projective geometry over GF(q): points, flats, point multisets and the
code <-> projective system correspondence.

A point set of PG(N, q) is stored as the lexicographically sorted distinct
normalized coordinate rows with a multiplicity per row. Flats of codimension
r are scanned through their r x (N+1) equation matrices; for r = 1 these are
the normalized hyperplane normals, in the same order as the points.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import FieldMismatchError, NonSpanningError, PreconditionError
from .gf import FieldSpec
from .linalg import (Matrix, batch_rank, kernel, normalize_rows, projective_block,
                     projective_count, projective_representatives, rank, rref_array)
from .linear_code import LinearCode, is_nondegenerate
from .parallel import ChunkScanner, ScanOptions, resolve_options

Point = Tuple[int, ...]


def normalize_point(field: FieldSpec, v) -> Point:
    """Scale a nonzero vector so its first nonzero coordinate is 1."""
    v = field.validate(v).reshape(-1)
    if not np.any(v):
        raise PreconditionError("the zero vector is not a projective point", constraint="nonzero")
    return tuple(int(x) for x in normalize_rows(field, v[None, :])[0])


class PointSet:
    """A multiset of points of PG(N, q)."""

    def __init__(self, field: FieldSpec, points, multiplicities: Optional[Sequence[int]] = None,
                 rank: Optional[int] = None):
        arr = np.asarray(points, dtype=np.int64)
        if arr.size == 0:
            if rank is None:
                raise PreconditionError("an empty point set needs its ambient rank", constraint="shape")
            arr = arr.reshape(0, rank)
        arr = np.atleast_2d(field.validate(arr))
        if rank is not None and arr.shape[1] != rank:
            raise PreconditionError(f"points must have {rank} coordinates", constraint="shape")
        if arr.shape[0] and not np.all(np.any(arr != 0, axis=1)):
            raise PreconditionError("the zero vector is not a projective point", constraint="nonzero")
        weights = np.ones(arr.shape[0], dtype=np.int64) if multiplicities is None \
            else np.asarray(multiplicities, dtype=np.int64)
        if weights.shape != (arr.shape[0],) or np.any(weights < 1):
            raise PreconditionError("multiplicities must be positive, one per point", constraint="multiplicity")

        self.field = field
        if arr.shape[0] == 0:
            self._points = arr
            self._mult = weights
        else:
            distinct, inverse = np.unique(normalize_rows(field, arr), axis=0, return_inverse=True)
            self._points = distinct
            self._mult = np.bincount(inverse.reshape(-1), weights=weights,
                                     minlength=distinct.shape[0]).astype(np.int64)
        self._points.setflags(write=False)
        self._mult.setflags(write=False)

    @property
    def rank(self) -> int:
        """Length of the coordinate vectors (N + 1)."""
        return self._points.shape[1]

    @property
    def N(self) -> int:
        return self.rank - 1

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def multiplicities(self) -> np.ndarray:
        return self._mult

    @property
    def size(self) -> int:
        """Number of points counted with multiplicity."""
        return int(self._mult.sum())

    @property
    def num_distinct(self) -> int:
        return self._points.shape[0]

    @property
    def is_set(self) -> bool:
        return bool(np.all(self._mult == 1))

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[Tuple[Point, int]]:
        for row, m in zip(self._points.tolist(), self._mult.tolist()):
            yield tuple(row), m

    def __contains__(self, v) -> bool:
        p = np.asarray(normalize_point(self.field, v))
        return bool(np.any(np.all(self._points == p[None, :], axis=1)))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PointSet)
            and other.field == self.field
            and np.array_equal(other._points, self._points)
            and np.array_equal(other._mult, self._mult)
        )

    def __repr__(self) -> str:
        return f"PointSet(PG({self.N},{self.field.q}), {self.size} points)"

    def span_rank(self) -> int:
        if self.num_distinct == 0:
            return 0
        return len(rref_array(self.field, self._points)[1])

    def distinct(self) -> "PointSet":
        return PointSet(self.field, self._points, rank=self.rank)

    def union(self, *others: "PointSet") -> "PointSet":
        """Multiset sum."""
        for other in others:
            if other.field != self.field:
                raise FieldMismatchError(f"point sets over {self.field} and {other.field}")
            if other.rank != self.rank:
                raise PreconditionError("point sets live in different spaces", constraint="shape")
        rows = np.vstack([self._points] + [o._points for o in others])
        mult = np.concatenate([self._mult] + [o._mult for o in others])
        return PointSet(self.field, rows, mult, rank=self.rank)

    def as_columns(self) -> Matrix:
        """(N+1) x n matrix with each point repeated by its multiplicity."""
        expanded = np.repeat(self._points, self._mult, axis=0)
        return Matrix(self.field, expanded.T.reshape(self.rank, -1), cols=expanded.shape[0])

    @classmethod
    def whole_space(cls, field: FieldSpec, rank: int, options: Optional[ScanOptions] = None) -> "PointSet":
        return cls(field, enumerate_points(rank - 1, field, options), rank=rank)


@dataclass(frozen=True)
class Flat:
    """Projectivized row space of `basis`; `equations` cut it out when known."""

    basis: Matrix
    equations: Optional[Matrix] = None

    def __post_init__(self):
        if rank(self.basis) != self.basis.rows:
            raise PreconditionError("flat basis rows must be independent", constraint="independent")

    @classmethod
    def from_equations(cls, field: FieldSpec, equations) -> "Flat":
        eq = Matrix(field, np.atleast_2d(np.asarray(equations, dtype=np.int64)))
        return cls(kernel(eq), eq)

    @property
    def dim(self) -> int:
        return self.basis.rows - 1

    @property
    def normal(self) -> Optional[Point]:
        if self.equations is None or self.equations.rows != 1:
            return None
        return tuple(int(x) for x in self.equations.row(0))

    def points(self) -> np.ndarray:
        """Normalized points of the flat in lexicographic order."""
        fld = self.basis.field
        coords = projective_representatives(fld, self.basis.rows)
        pts = normalize_rows(fld, fld.matmul(coords, self.basis.array))
        return np.unique(pts, axis=0)

    def as_pointset(self) -> PointSet:
        return PointSet(self.basis.field, self.points(), rank=self.basis.cols)

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64).reshape(1, -1)
        return rank(self.basis.vstack(Matrix(self.basis.field, v))) == self.basis.rows


def enumerate_points(N: int, field: FieldSpec, options: Optional[ScanOptions] = None) -> List[Point]:
    """All points of PG(N, q), lexicographic."""
    if N < 0:
        raise PreconditionError("projective dimension must be non-negative", constraint="dimension")
    resolve_options(options).check_limit("projective points", projective_count(field.q, N + 1))
    return [tuple(row) for row in projective_representatives(field, N + 1).tolist()]


def hyperplanes(N: int, field: FieldSpec, options: Optional[ScanOptions] = None) -> List[Flat]:
    """All hyperplanes of PG(N, q), in the order of their normalized normals."""
    if N < 1:
        raise PreconditionError("hyperplanes need N >= 1", constraint="dimension")
    resolve_options(options).check_limit("hyperplanes", projective_count(field.q, N + 1))
    return [Flat.from_equations(field, [u]) for u in projective_representatives(field, N + 1)]


def pointset_from_code(code: LinearCode) -> PointSet:
    if not is_nondegenerate(code):
        raise PreconditionError("a degenerate code has a zero column", constraint="nondegenerate")
    return PointSet(code.field, code.G.array.T, rank=code.k)


def code_from_pointset(points: PointSet) -> LinearCode:
    r = points.span_rank()
    if r != points.rank:
        raise NonSpanningError(r, points.rank)
    return LinearCode(points.as_columns())


# --- flat scanning ---

def gaussian_binomial(n: int, r: int, q: int) -> int:
    """Number of r-dimensional subspaces of F_q^n."""
    if r < 0 or r > n:
        return 0
    num = den = 1
    for i in range(r):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _rref_subspaces(field: FieldSpec, r: int, n: int) -> Iterator[np.ndarray]:
    """Every r-dimensional subspace of F_q^n as its r x n RREF matrix."""
    q = field.q
    for pivots in itertools.combinations(range(n), r):
        slots = [(i, c) for i, p in enumerate(pivots) for c in range(p + 1, n) if c not in pivots]
        for values in itertools.product(range(q), repeat=len(slots)):
            m = np.zeros((r, n), dtype=np.int64)
            for i, p in enumerate(pivots):
                m[i, p] = 1
            for (i, c), v in zip(slots, values):
                m[i, c] = v
            yield m


class _FlatScan:
    """Equation blocks for all flats of codimension r in PG(rank-1, q)."""

    def __init__(self, field: FieldSpec, rank_: int, r: int, options: ScanOptions):
        if not 1 <= r <= rank_ - 1:
            raise PreconditionError(f"codimension must lie in [1, {rank_ - 1}]", constraint="codimension")
        self.field = field
        self.rank = rank_
        self.r = r
        if r == 1:
            self.total = projective_count(field.q, rank_)
            options.check_limit("hyperplanes", self.total)
            self._all = None
        else:
            self.total = gaussian_binomial(rank_, r, field.q)
            options.check_limit(f"flats of codimension {r}", self.total)
            self._all = np.stack(list(_rref_subspaces(field, r, rank_)))

    def block(self, start: int, stop: int) -> np.ndarray:
        if self._all is None:
            return projective_block(self.field, self.rank, start, stop)[:, None, :]
        return self._all[start:stop]

    def incidence(self, equations: np.ndarray, points: np.ndarray) -> np.ndarray:
        """(B, m) mask of points lying on each flat."""
        b, r, n = equations.shape
        values = self.field.matmul(equations.reshape(b * r, n), points.T)
        return np.all(values.reshape(b, r, -1) == 0, axis=1)

    def flat(self, equations: np.ndarray) -> Flat:
        return Flat.from_equations(self.field, equations)


@dataclass(frozen=True)
class CuttingResult:
    """Verdict of a cutting scan; witness is the first flat not spanned by its points."""

    cutting: bool
    flats_checked: int
    witness: Optional[Flat] = None

    def __bool__(self) -> bool:
        return self.cutting


def _require_spanning(points: PointSet) -> None:
    r = points.span_rank()
    if r != points.rank:
        raise NonSpanningError(r, points.rank)


def is_cutting(points: PointSet, r: int = 1, options: Optional[ScanOptions] = None) -> CuttingResult:
    """Every flat of codimension r is spanned by the points it contains."""
    opts = resolve_options(options)
    _require_spanning(points)
    scan = _FlatScan(points.field, points.rank, r, opts)
    P = points.points
    target = points.rank - r

    def task(start: int, stop: int):
        equations = scan.block(start, stop)
        on = scan.incidence(equations, P)
        ranks = batch_rank(points.field, np.where(on[:, :, None], P[None, :, :], 0))
        failing = ranks != target
        if failing.any():
            i = int(np.argmax(failing))
            return start + i, equations[i]
        return None

    hit = ChunkScanner(opts, "cutting").first_hit(task, scan.total)
    if hit is None:
        return CuttingResult(True, scan.total)
    index, equations = hit
    return CuttingResult(False, index + 1, scan.flat(equations))


def _intersection_counts(points: PointSet, r: int, options: Optional[ScanOptions],
                         weighted: bool, label: str) -> np.ndarray:
    opts = resolve_options(options)
    scan = _FlatScan(points.field, points.rank, r, opts)
    weights = points.multiplicities if weighted else np.ones(points.num_distinct, dtype=np.int64)

    def task(start: int, stop: int) -> np.ndarray:
        on = scan.incidence(scan.block(start, stop), points.points)
        return on.astype(np.int64) @ weights

    blocks = ChunkScanner(opts, label).map_blocks(task, scan.total)
    return np.concatenate(blocks) if blocks else np.zeros(0, dtype=np.int64)


def is_tfold_blocking(points: PointSet, t: int, r: int = 1, options: Optional[ScanOptions] = None) -> bool:
    """Every flat of codimension r meets the set in at least t distinct points."""
    if t < 1:
        raise PreconditionError("t must be at least 1", constraint="t")
    counts = _intersection_counts(points, r, options, weighted=False, label="blocking")
    return bool(counts.size == 0 or counts.min() >= t)


def hyperplane_intersection_sizes(points: PointSet, options: Optional[ScanOptions] = None) -> Dict[int, int]:
    """Histogram |H cap P| (with multiplicity) -> number of hyperplanes H."""
    counts = _intersection_counts(points, 1, options, weighted=True, label="hyperplane sizes")
    return dict(sorted(Counter(counts.tolist()).items()))


def geometric_minimum_distance(points: PointSet, options: Optional[ScanOptions] = None) -> int:
    """n minus the largest hyperplane intersection."""
    _require_spanning(points)
    sizes = hyperplane_intersection_sizes(points, options)
    return points.size - max(sizes)


def points_on_flat(points: PointSet, flat: Flat) -> np.ndarray:
    """Distinct points of the set that lie on the flat."""
    mask = np.array([flat.contains(p) for p in points.points], dtype=bool)
    return points.points[mask]


def embed_pointset(points: PointSet, basis: Matrix) -> PointSet:
    """Image of a point set of PG(b-1, q) in the flat spanned by the b rows of `basis`."""
    if basis.field != points.field:
        raise FieldMismatchError(f"point set over {points.field}, basis over {basis.field}")
    if basis.rows != points.rank:
        raise PreconditionError(f"basis must have {points.rank} rows", constraint="shape")
    if rank(basis) != basis.rows:
        raise PreconditionError("flat basis rows must be independent", constraint="independent")
    image = points.field.matmul(points.points, basis.array)
    return PointSet(points.field, image, points.multiplicities, rank=basis.cols)
