"""
Field reduction, Desarguesian spreads and Singer-cycle Baer subplanes.

GF(q^r) is represented inside the r x r matrices over GF(q) through the
companion matrix M of the minimal polynomial of the fixed primitive element
gamma: coords(x * gamma) = coords(x) @ M, and phi(gamma^i) = M^i.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import PreconditionError, VerificationError
from .gf import (FieldPolynomial, FieldSpec, companion_matrix, field_for_order, is_square,
                 make_field, minimal_polynomial)
from .linalg import Matrix, normalize_rows, projective_count, projective_representatives
from .parallel import ScanOptions, resolve_options
from .projgeom import Flat, PointSet

Pair = Tuple[int, int]


class FieldReduction:
    """GF(q^r) acting on GF(q)^r as matrices."""

    def __init__(self, small: FieldSpec, r: int):
        if r < 1:
            raise PreconditionError("extension degree must be at least 1", constraint="degree")
        self.small = small
        self.r = r
        self.big = make_field(small.p, small.e * r)
        self.polynomial: FieldPolynomial = minimal_polynomial(self.big(self.big.primitive), small)
        if self.polynomial.degree != r:
            raise VerificationError(f"primitive element of {self.big} has degree "
                                    f"{self.polynomial.degree} over {small}")
        self.M = companion_matrix(self.polynomial)
        self._powers: Dict[int, np.ndarray] = {0: np.eye(r, dtype=np.int64)}

    @property
    def order(self) -> int:
        """q^r - 1, the multiplicative order of gamma."""
        return self.big.q - 1

    def power(self, i: int) -> np.ndarray:
        """M^i, i taken modulo q^r - 1."""
        i %= self.order
        if i not in self._powers:
            result = np.eye(self.r, dtype=np.int64)
            base = self.M.array
            n = i
            while n:
                if n & 1:
                    result = self.small.matmul(result, base)
                base = self.small.matmul(base, base)
                n >>= 1
            self._powers[i] = result
        return self._powers[i]

    def phi(self, x: int) -> np.ndarray:
        """Matrix of multiplication by x in GF(q^r)."""
        if x == 0:
            return np.zeros((self.r, self.r), dtype=np.int64)
        return self.power(int(self.big.log(x)))

    def phi_vector(self, v: Sequence[int]) -> np.ndarray:
        """(phi(v_1) | ... | phi(v_t)), an r x rt matrix."""
        return np.hstack([self.phi(int(x)) for x in v])


@dataclass(frozen=True)
class SpreadElement:
    """An (r-1)-flat of PG(rt-1, q) given by an r x rt basis."""

    basis: Matrix
    label: str = ""

    def points(self) -> np.ndarray:
        return Flat(self.basis).points()

    def as_pointset(self) -> PointSet:
        return PointSet(self.basis.field, self.points(), rank=self.basis.cols)


def check_partition(elements: Sequence[SpreadElement], field: FieldSpec, rank: int) -> None:
    """Raise unless the elements cover PG(rank-1, q) exactly once."""
    rows = np.vstack([e.points() for e in elements])
    distinct = np.unique(rows, axis=0)
    expected = projective_count(field.q, rank)
    if distinct.shape[0] != rows.shape[0]:
        raise VerificationError("spread elements share a point")
    if rows.shape[0] != expected:
        raise VerificationError(f"spread covers {rows.shape[0]} of {expected} points")


def desarguesian_spread(q: int, r: int, t: int, options: Optional[ScanOptions] = None) -> List[SpreadElement]:
    """The (r-1)-spread of PG(rt-1, q) obtained from the points of PG(t-1, q^r)."""
    if t < 1:
        raise PreconditionError("t must be at least 1", constraint="t")
    field = field_for_order(q)
    resolve_options(options).check_limit("projective points", projective_count(q, r * t))
    reduction = FieldReduction(field, r)
    elements = [
        SpreadElement(Matrix(field, reduction.phi_vector(v)), label=str(tuple(int(x) for x in v)))
        for v in projective_representatives(reduction.big, t)
    ]
    check_partition(elements, field, r * t)
    return elements


def pair_is_valid(q: int, r: int, i: int, j: int) -> bool:
    """Exponents (i, j) in [1, q^r - 1] whose difference avoids (q^s-1)/(q-1) for every divisor s > 1 of r."""
    top = q ** r - 1
    if not (1 <= i <= top and 1 <= j <= top) or (j - i) % top == 0:
        return False
    return all((j - i) % ((q ** s - 1) // (q - 1)) != 0 for s in range(2, r + 1) if r % s == 0)


def default_pair(q: int, r: int) -> Pair:
    """(q^r - 1, 1) when valid, else the first valid pair."""
    top = q ** r - 1
    if pair_is_valid(q, r, top, 1):
        return top, 1
    for i in range(1, top + 1):
        for j in range(i + 1, top + 1):
            if pair_is_valid(q, r, i, j):
                return i, j
    raise PreconditionError(f"no admissible exponent pair for q={q}, r={r}", constraint="pair")


def spread_blocks(field: FieldSpec, r: int, t: int,
                  pairs: Optional[Dict[Pair, Pair]] = None) -> List[SpreadElement]:
    """The t^2 spread elements phi(P_l), phi(Q_{l,m,i}), phi(Q_{l,m,j}) of the spread cutting set."""
    if t < 1:
        raise PreconditionError("t must be at least 1", constraint="t")
    reduction = FieldReduction(field, r)
    q = field.q
    fallback = default_pair(q, r) if t > 1 else None
    eye = np.eye(r, dtype=np.int64)
    zero = np.zeros((r, r), dtype=np.int64)

    def block_row(entries: Dict[int, np.ndarray]) -> Matrix:
        return Matrix(field, np.hstack([entries.get(b, zero) for b in range(t)]))

    elements = [SpreadElement(block_row({ell: eye}), label=f"P{ell + 1}") for ell in range(t)]
    for ell in range(t):
        for m in range(ell + 1, t):
            i, j = (pairs or {}).get((ell, m), fallback)
            if not pair_is_valid(q, r, i, j):
                raise PreconditionError(
                    f"exponent pair ({i}, {j}) for blocks ({ell + 1}, {m + 1}) is not admissible",
                    constraint="pair",
                )
            for e in (i, j):
                elements.append(SpreadElement(
                    block_row({ell: eye, m: reduction.power(e)}),
                    label=f"Q{ell + 1},{m + 1},{e}",
                ))
    return elements


# --- Singer cycle and Baer subplanes ---

def singer_points(q: int) -> np.ndarray:
    """Points of PG(2, q) in Singer-cycle order: row i is [gamma^i] for a primitive gamma of GF(q^3)."""
    field = field_for_order(q)
    reduction = FieldReduction(field, 3)
    count = q * q + q + 1
    rows = np.zeros((count, 3), dtype=np.int64)
    v = np.array([[1, 0, 0]], dtype=np.int64)
    for i in range(count):
        rows[i] = v[0]
        v = field.matmul(v, reduction.M.array)
    points = normalize_rows(field, rows)
    if np.unique(points, axis=0).shape[0] != count:
        raise VerificationError("Singer orbit does not cover PG(2, q)")
    return points


def baer_partition(q: int, options: Optional[ScanOptions] = None) -> List[PointSet]:
    """The q - sqrt(q) + 1 disjoint Baer subplanes given by the cosets of the Singer subgroup of order q + sqrt(q) + 1."""
    if not is_square(q):
        raise PreconditionError(f"Baer subplanes need a square order, got {q}", constraint="square")
    resolve_options(options).check_limit("projective points", q * q + q + 1)
    field = field_for_order(q)
    root = isqrt(q)
    cosets = q - root + 1
    points = singer_points(q)
    return [PointSet(field, points[c::cosets], rank=3) for c in range(cosets)]


def baer_pair(q: int, options: Optional[ScanOptions] = None) -> PointSet:
    """Two disjoint Baer subplanes of PG(2, q)."""
    first, second = baer_partition(q, options)[:2]
    return first.union(second)
