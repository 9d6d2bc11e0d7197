"""
Linear codes: codeword enumeration, weight statistics, minimal and maximal
codewords, and the Pless second-moment identity.

Enumeration runs over projective messages (first nonzero coordinate 1) and
scales counts by q - 1.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import PreconditionError, VerificationError
from .gf import FieldSpec
from .linalg import (Matrix, batch_rank, left_kernel, normalize_rows, projective_block,
                     projective_count, rank, rref_array)
from .parallel import ChunkScanner, ScanOptions, resolve_options

Vector = Tuple[int, ...]


def support(v) -> Tuple[int, ...]:
    """Indices of the nonzero coordinates."""
    return tuple(int(i) for i in np.nonzero(np.asarray(v))[0])


def weight(v) -> int:
    return int(np.count_nonzero(np.asarray(v)))


class LinearCode:
    """An [n, k]_q code given by a full-rank k x n generator matrix."""

    def __init__(self, generator: Matrix):
        if generator.rows < 1:
            raise PreconditionError("a code needs dimension k >= 1", constraint="dimension")
        if rank(generator) != generator.rows:
            raise PreconditionError("generator matrix must have full row rank", constraint="full-rank")
        self.G = generator
        self._cache: Dict[str, object] = {}

    @classmethod
    def from_rows(cls, field: FieldSpec, rows) -> "LinearCode":
        return cls(Matrix(field, rows))

    @property
    def field(self) -> FieldSpec:
        return self.G.field

    @property
    def q(self) -> int:
        return self.G.field.q

    @property
    def n(self) -> int:
        return self.G.cols

    @property
    def k(self) -> int:
        return self.G.rows

    @property
    def num_classes(self) -> int:
        return projective_count(self.q, self.k)

    def message(self, u) -> np.ndarray:
        u = self.field.validate(u).reshape(-1)
        if u.size != self.k:
            raise PreconditionError(f"message must have length {self.k}", constraint="message-length")
        return u

    def codeword(self, u) -> np.ndarray:
        u = self.message(u)
        return self.field.matmul(u[None, :], self.G.array)[0]

    def codewords(self, messages: np.ndarray) -> np.ndarray:
        return self.field.matmul(messages, self.G.array)

    def class_block(self, start: int, stop: int) -> Tuple[np.ndarray, np.ndarray]:
        """Projective messages start..stop-1 and their codewords."""
        messages = projective_block(self.field, self.k, start, stop)
        return messages, self.codewords(messages)

    def __repr__(self) -> str:
        return f"[{self.n},{self.k}]_{self.q} code"


@dataclass(frozen=True)
class WeightProfile:
    """Exact weight distribution and its first two moments."""

    distribution: Dict[int, int]
    d: int
    w_max: int
    mean: Fraction
    variance: Fraction
    num_distinct_nonzero_weights: int

    @property
    def s(self) -> int:
        return self.num_distinct_nonzero_weights

    @property
    def sum_of_squares(self) -> int:
        return sum(w * w * c for w, c in self.distribution.items())

    @property
    def is_constant_weight(self) -> bool:
        return self.num_distinct_nonzero_weights == 1


def weight_profile(code: LinearCode, options: Optional[ScanOptions] = None) -> WeightProfile:
    cached = code._cache.get("profile")
    if cached is not None:
        return cached
    opts = resolve_options(options)
    total = code.num_classes
    opts.check_limit("codeword classes", total)

    def block_histogram(start: int, stop: int) -> np.ndarray:
        _, words = code.class_block(start, stop)
        return np.bincount(np.count_nonzero(words, axis=1), minlength=code.n + 1)

    scanner = ChunkScanner(opts, "weight distribution")
    hist = np.zeros(code.n + 1, dtype=np.int64)
    for block in scanner.map_blocks(block_histogram, total):
        hist += block
    hist *= code.q - 1
    hist[0] += 1

    distribution = {w: int(c) for w, c in enumerate(hist.tolist()) if c}
    nonzero = [w for w in distribution if w > 0]
    count = code.q ** code.k - 1
    first = sum(w * distribution[w] for w in nonzero)
    second = sum(w * w * distribution[w] for w in nonzero)
    mean = Fraction(first, count)
    profile = WeightProfile(
        distribution=distribution,
        d=min(nonzero),
        w_max=max(nonzero),
        mean=mean,
        variance=Fraction(second, count) - mean * mean,
        num_distinct_nonzero_weights=len(nonzero),
    )
    code._cache["profile"] = profile
    return profile


def zero_columns(code: LinearCode) -> int:
    return int(np.count_nonzero(~np.any(code.G.array != 0, axis=0)))


def proportional_pairs(code: LinearCode) -> int:
    """Unordered pairs of proportional nonzero columns."""
    cols = code.G.array.T
    nonzero = cols[np.any(cols != 0, axis=1)]
    if nonzero.size == 0:
        return 0
    _, counts = np.unique(normalize_rows(code.field, nonzero), axis=0, return_counts=True)
    return int(sum(comb(int(m), 2) for m in counts))


def is_nondegenerate(code: LinearCode) -> bool:
    return zero_columns(code) == 0


def is_projective(code: LinearCode) -> bool:
    return is_nondegenerate(code) and proportional_pairs(code) == 0


def _nonzero_message(code: LinearCode, u) -> np.ndarray:
    u = code.message(u)
    if not np.any(u):
        raise PreconditionError("the zero message has no codeword class", constraint="nonzero")
    return u


def is_minimal_codeword(code: LinearCode, u) -> bool:
    """uG is minimal iff G restricted to the zero positions of uG has rank k - 1."""
    u = _nonzero_message(code, u)
    c = code.codeword(u)
    outside = code.G.array[:, c == 0]
    return len(rref_array(code.field, outside)[1]) == code.k - 1


def _smaller_codeword(code: LinearCode, u: np.ndarray) -> np.ndarray:
    """A codeword with support strictly inside sigma(uG), not proportional to it."""
    fld = code.field
    c = code.codeword(u)
    outside = Matrix(fld, code.G.array[:, c == 0], cols=int(np.count_nonzero(c == 0)))
    target = normalize_rows(fld, u[None, :])[0]
    for v in left_kernel(outside).array:
        if np.array_equal(normalize_rows(fld, v[None, :])[0], target):
            continue
        other = code.codeword(v)
        if np.array_equal(other != 0, c != 0):
            i = int(np.nonzero(c)[0][0])
            ratio = fld.div(int(c[i]), int(other[i]))
            other = fld.sub(c, fld.mul(ratio, other))
        return normalize_rows(fld, other[None, :])[0]
    raise VerificationError("rank criterion reported a non-minimal codeword but no smaller support exists")


@dataclass(frozen=True)
class MinimalityResult:
    """Verdict of a minimal-code scan; witness = (smaller, larger) on failure."""

    minimal: bool
    classes_checked: int
    witness: Optional[Tuple[Vector, Vector]] = None
    message: Optional[Vector] = None

    def __bool__(self) -> bool:
        return self.minimal


def is_minimal_code(code: LinearCode, options: Optional[ScanOptions] = None) -> MinimalityResult:
    cached = code._cache.get("minimality")
    if cached is not None:
        return cached
    opts = resolve_options(options)
    total = code.num_classes
    opts.check_limit("codeword classes", total)
    n, k, q = code.n, code.k, code.q
    G = code.G.array
    lock = threading.Lock()
    lightest = [n]

    def scan(start: int, stop: int):
        messages, words = code.class_block(start, stop)
        covered = words != 0
        weights = covered.sum(axis=1)
        ranks = batch_rank(code.field, np.where(covered[:, None, :], 0, G[None, :, :]))
        failing = ranks != k - 1
        if np.any(weights[~failing] > n - k + 1):
            raise VerificationError("a minimal codeword exceeds weight n - k + 1")
        with lock:
            lightest[0] = min(lightest[0], int(weights.min()))
        if failing.any():
            i = int(np.argmax(failing))
            return start + i, messages[i]
        return None

    hit = ChunkScanner(opts, "minimality").first_hit(scan, total)
    if hit is None:
        if lightest[0] < (q - 1) * (k - 1) + 1:
            raise VerificationError("a minimal code has a codeword lighter than (q-1)(k-1)+1")
        result = MinimalityResult(True, total)
    else:
        index, u = hit
        smaller = _smaller_codeword(code, u)
        larger = code.codeword(u)
        result = MinimalityResult(
            False,
            index + 1,
            witness=(tuple(int(x) for x in smaller), tuple(int(x) for x in larger)),
            message=tuple(int(x) for x in u),
        )
    code._cache["minimality"] = result
    return result


def is_minimal_code_bruteforce(code: LinearCode, options: Optional[ScanOptions] = None) -> bool:
    """Definitional check: no two classes with nested supports."""
    opts = resolve_options(options)
    opts.check_limit("codeword classes", code.num_classes)
    _, words = code.class_block(0, code.num_classes)
    inside = (words != 0).astype(np.float64)
    outside = 1.0 - inside
    for start in range(0, inside.shape[0], 512):
        escapes = inside[start:start + 512] @ outside.T
        for offset, row in enumerate(escapes):
            row[start + offset] = 1.0
            if np.any(row == 0):
                return False
    return True


def is_maximal_codeword(code: LinearCode, u, options: Optional[ScanOptions] = None) -> bool:
    """True iff no non-proportional codeword has support containing sigma(uG)."""
    u = _nonzero_message(code, u)
    opts = resolve_options(options)
    total = code.num_classes
    opts.check_limit("codeword classes", total)
    own = code.codeword(u) != 0
    target = normalize_rows(code.field, u[None, :])[0]

    def scan(start: int, stop: int):
        messages, words = code.class_block(start, stop)
        contains = np.all((words != 0) | ~own[None, :], axis=1)
        contains &= np.any(messages != target[None, :], axis=1)
        if contains.any():
            i = int(np.argmax(contains))
            return start + i, messages[i]
        return None

    return ChunkScanner(opts, "maximality").first_hit(scan, total) is None


@dataclass(frozen=True)
class PlessCheck:
    """Both sides of the second-moment identity and the projective lower bound."""

    lhs: int
    rhs: Fraction
    w1_dual: int
    w2_dual: int
    projective_bound: Fraction
    margin: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def pless_second_moment_check(code: LinearCode, options: Optional[ScanOptions] = None) -> PlessCheck:
    n, k, q = code.n, code.k, code.q
    lhs = weight_profile(code, options).sum_of_squares
    zeros = zero_columns(code)
    w1 = (q - 1) * zeros
    w2 = (q - 1) * proportional_pairs(code) + (q - 1) ** 2 * comb(zeros, 2)
    qk1 = Fraction(q) ** (k - 1)
    qk2 = Fraction(q) ** (k - 2)
    rhs = (
        n * qk1 * (q - 1)
        + 2 * qk2 * (q - 1) ** 2 * comb(n, 2)
        - w1 * (qk1 + 2 * qk2 * (q - 1) * (n - 1))
        + 2 * w2 * qk2
    )
    bound = qk2 * n * (q - 1) * (n * (q - 1) + 1)
    return PlessCheck(lhs, rhs, w1, w2, bound, lhs - bound)


@dataclass(frozen=True)
class MomentCheck:
    """Mean and variance against their closed forms in ell = n(q-1)/(q^k-1)."""

    ell: Fraction
    mean_expected: Fraction
    variance_floor: Fraction
    mean_matches: bool
    variance_at_floor: bool
    projective: bool

    @property
    def consistent(self) -> bool:
        return self.mean_matches and (self.variance_at_floor == self.projective)


def moment_formula_check(code: LinearCode, options: Optional[ScanOptions] = None) -> MomentCheck:
    if not is_nondegenerate(code):
        raise PreconditionError("moment formulas need a nondegenerate code", constraint="nondegenerate")
    n, k, q = code.n, code.k, code.q
    profile = weight_profile(code, options)
    ell = Fraction(n * (q - 1), q ** k - 1)
    mean_expected = Fraction(q) ** (k - 1) * ell
    floor = Fraction(q) ** (k - 2) * ell * (1 - ell)
    if profile.variance < floor:
        raise VerificationError("variance below its theoretical floor")
    return MomentCheck(
        ell=ell,
        mean_expected=mean_expected,
        variance_floor=floor,
        mean_matches=profile.mean == mean_expected,
        variance_at_floor=profile.variance == floor,
        projective=is_projective(code),
    )
