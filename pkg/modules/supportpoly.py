"""
Support polynomials of a generator matrix.

p_{G,I}(x) is the product over i in I of the linear forms x . g^(i). Terms are
kept as exponent tuple -> nonzero coefficient. Products are expanded over
packed integer keys; the reduced build folds x^q -> x after every factor so
the term count never exceeds q^k.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import comb, prod
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import PreconditionError
from .gf import FieldElement, FieldSpec
from .linalg import Matrix, all_vectors, complete_basis, inverse, vector_block
from .linear_code import LinearCode, is_maximal_codeword, support
from .parallel import ChunkScanner, ScanOptions, resolve_options

Exponents = Tuple[int, ...]


def _field_sum(field: FieldSpec, values: np.ndarray, groups: np.ndarray, count: int) -> np.ndarray:
    """Field sum of `values` per group label, digit by digit in base p."""
    out = np.zeros(count, dtype=np.int64)
    scale = 1
    for _ in range(field.e):
        digit = (values // scale) % field.p
        summed = np.bincount(groups, weights=digit, minlength=count).astype(np.int64)
        out += (summed % field.p) * scale
        scale *= field.p
    return out


def _collect(field: FieldSpec, keys: np.ndarray, coefs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    if keys.size == 0:
        return keys, coefs
    distinct, groups = np.unique(keys, return_inverse=True)
    summed = _field_sum(field, coefs, groups.reshape(-1), distinct.size)
    keep = summed != 0
    return distinct[keep], summed[keep]


class SupportPolynomial:
    """A polynomial over GF(q) in k variables."""

    def __init__(self, field: FieldSpec, k: int, terms: Mapping[Exponents, int]):
        self.field = field
        self.k = k
        clean: Dict[Exponents, int] = {}
        for exps, c in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != k or min(exps, default=0) < 0:
                raise PreconditionError(f"exponent vectors must have {k} non-negative entries",
                                        constraint="exponents")
            c = int(c)
            if c:
                clean[exps] = int(field.validate(c))
        self.terms = clean

    @classmethod
    def constant(cls, field: FieldSpec, k: int, c: int = 1) -> "SupportPolynomial":
        return cls(field, k, {(0,) * k: c})

    @classmethod
    def monomial(cls, field: FieldSpec, exps: Sequence[int], c: int = 1) -> "SupportPolynomial":
        return cls(field, len(exps), {tuple(exps): c})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    @property
    def is_reduced(self) -> bool:
        return all(e <= self.field.q - 1 for exps in self.terms for e in exps)

    def _check(self, other: "SupportPolynomial") -> None:
        if other.field != self.field or other.k != self.k:
            raise PreconditionError("polynomials over different rings", constraint="same-ring")

    def __add__(self, other: "SupportPolynomial") -> "SupportPolynomial":
        self._check(other)
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            terms[exps] = self.field.add(terms.get(exps, 0), c)
        return SupportPolynomial(self.field, self.k, terms)

    def __neg__(self) -> "SupportPolynomial":
        return SupportPolynomial(self.field, self.k, {e: self.field.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: "SupportPolynomial") -> "SupportPolynomial":
        return self + (-other)

    def __mul__(self, other: "SupportPolynomial") -> "SupportPolynomial":
        self._check(other)
        terms: Dict[Exponents, int] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                terms[e] = self.field.add(terms.get(e, 0), self.field.mul(ca, cb))
        return SupportPolynomial(self.field, self.k, terms)

    def scale(self, c: int) -> "SupportPolynomial":
        return SupportPolynomial(self.field, self.k, {e: self.field.mul(v, c) for e, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SupportPolynomial)
            and other.field == self.field
            and other.k == self.k
            and other.terms == self.terms
        )

    def sorted_terms(self) -> List[Tuple[Exponents, int]]:
        """Terms in graded lexicographic order, highest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __str__(self) -> str:
        parts = []
        for exps, c in self.sorted_terms():
            mono = "*".join(
                f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(exps) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"SupportPolynomial({self.field}, k={self.k}: {self})"


def _reduced_exponent(e: int, q: int) -> int:
    return e if e == 0 else (e - 1) % (q - 1) + 1


def build_support_poly(G: Matrix, indices: Iterable[int], reduce_terms: bool = False,
                       options: Optional[ScanOptions] = None) -> SupportPolynomial:
    """Expand p_{G,I}; with reduce_terms the result is already reduced modulo x_j^q - x_j."""
    fld = G.field
    k, n = G.shape
    I = sorted(set(int(i) for i in indices))
    if any(i < 0 or i >= n for i in I):
        raise PreconditionError(f"column indices must lie in [0, {n})", constraint="index-range")
    opts = resolve_options(options)
    q = fld.q
    if reduce_terms:
        base = q
        opts.check_limit("monomials", q ** k)
    else:
        base = len(I) + 1
        opts.check_limit("monomials", comb(len(I) + k - 1, k - 1))
    if base ** k >= 2 ** 62:
        raise PreconditionError("too many variables for packed exponent keys", constraint="key-range")

    steps = np.array([base ** j for j in range(k)], dtype=np.int64)
    keys = np.zeros(1, dtype=np.int64)
    coefs = np.ones(1, dtype=np.int64)
    for i in I:
        column = G.array[:, i]
        new_keys, new_coefs = [], []
        for j in np.nonzero(column)[0]:
            step = steps[j]
            if reduce_terms:
                # x_j^(q-1) * x_j folds back to x_j
                digit = (keys // step) % base
                shifted = np.where(digit == q - 1, keys - (q - 2) * step, keys + step)
            else:
                shifted = keys + step
            new_keys.append(shifted)
            new_coefs.append(fld.mul(coefs, int(column[j])))
        if not new_keys:
            return SupportPolynomial(fld, k, {})
        keys, coefs = _collect(fld, np.concatenate(new_keys), np.concatenate(new_coefs))

    terms = {}
    for key, c in zip(keys.tolist(), coefs.tolist()):
        exps = []
        for _ in range(k):
            exps.append(key % base)
            key //= base
        terms[tuple(exps)] = c
    return SupportPolynomial(fld, k, terms)


def reduce_mod_Iq(p: SupportPolynomial) -> SupportPolynomial:
    """Remainder modulo (x_1^q - x_1, ..., x_k^q - x_k)."""
    q = p.field.q
    terms: Dict[Exponents, int] = {}
    for exps, c in p.terms.items():
        e = tuple(_reduced_exponent(x, q) for x in exps)
        terms[e] = p.field.add(terms.get(e, 0), c)
    return SupportPolynomial(p.field, p.k, terms)


def coefficient(p: SupportPolynomial, exps: Sequence[int]) -> FieldElement:
    return p.field(p.terms.get(tuple(int(e) for e in exps), 0))


def evaluate_many(p: SupportPolynomial, points: np.ndarray) -> np.ndarray:
    """Values of p at each row of `points`."""
    fld = p.field
    points = np.atleast_2d(np.asarray(points, dtype=np.int64))
    m = points.shape[0]
    if p.is_zero:
        return np.zeros(m, dtype=np.int64)
    exps = np.array(list(p.terms.keys()), dtype=np.int64)
    coefs = np.array(list(p.terms.values()), dtype=np.int64)
    values = np.broadcast_to(coefs[None, :], (m, coefs.size))
    for i in range(p.k):
        values = fld.mul(values, fld.pow(points[:, i][:, None], exps[None, :, i]))
    rows = np.repeat(np.arange(m), coefs.size)
    return _field_sum(fld, np.asarray(values).reshape(-1), rows, m)


def evaluate(p: SupportPolynomial, v) -> FieldElement:
    v = p.field.validate(v).reshape(-1)
    if v.size != p.k:
        raise PreconditionError(f"points must have {p.k} coordinates", constraint="shape")
    return p.field(int(evaluate_many(p, v[None, :])[0]))


def _grid_scan(p: SupportPolynomial, options: Optional[ScanOptions], keep_nonzero: bool) -> np.ndarray:
    opts = resolve_options(options)
    total = p.field.q ** p.k
    opts.check_limit("evaluation points", total)

    def task(start: int, stop: int) -> np.ndarray:
        block = vector_block(p.field, p.k, start, stop)
        nonzero = evaluate_many(p, block) != 0
        return block[nonzero if keep_nonzero else ~nonzero]

    blocks = ChunkScanner(opts, "evaluation").map_blocks(task, total)
    return np.vstack(blocks) if blocks else np.zeros((0, p.k), dtype=np.int64)


def nonzero_set(p: SupportPolynomial, options: Optional[ScanOptions] = None) -> np.ndarray:
    """Vectors of F_q^k where p does not vanish, lexicographic."""
    return _grid_scan(p, options, keep_nonzero=True)


def zero_set(p: SupportPolynomial, options: Optional[ScanOptions] = None) -> np.ndarray:
    return _grid_scan(p, options, keep_nonzero=False)


def covering_messages(G: Matrix, indices: Iterable[int], options: Optional[ScanOptions] = None) -> np.ndarray:
    """Messages u whose codeword uG is nonzero on every index in I."""
    I = sorted(set(int(i) for i in indices))
    if any(i < 0 or i >= G.cols for i in I):
        raise PreconditionError(f"column indices must lie in [0, {G.cols})", constraint="index-range")
    opts = resolve_options(options)
    total = G.field.q ** G.rows
    opts.check_limit("messages", total)
    sub = G.array[:, I]

    def task(start: int, stop: int) -> np.ndarray:
        block = vector_block(G.field, G.rows, start, stop)
        covered = np.all(G.field.matmul(block, sub) != 0, axis=1)
        return block[covered]

    blocks = ChunkScanner(opts, "covering").map_blocks(task, total)
    return np.vstack(blocks) if blocks else np.zeros((0, G.rows), dtype=np.int64)


def alon_furedi_bound(p: SupportPolynomial, grid_sizes: Optional[Sequence[int]] = None) -> int:
    """Lower bound on the number of grid points where p does not vanish."""
    sizes = [p.field.q] * p.k if grid_sizes is None else [int(s) for s in grid_sizes]
    if len(sizes) != p.k:
        raise PreconditionError(f"need {p.k} grid sizes", constraint="shape")
    if any(s < 2 for s in sizes) or any(a < b for a, b in zip(sizes, sizes[1:])):
        raise PreconditionError("grid sizes must be non-increasing and at least 2", constraint="grid")
    if p.is_zero:
        raise PreconditionError("the zero polynomial vanishes everywhere", constraint="nonzero")
    D = p.degree
    if D > sum(s - 1 for s in sizes):
        raise PreconditionError("degree exceeds the grid; reduce the polynomial first", constraint="reduced")
    if D == 0:
        return prod(sizes)
    tail = 0
    for s in range(p.k, 0, -1):
        ell = D - tail
        if 1 <= ell <= sizes[s - 1] - 1:
            return (sizes[s - 1] - ell) * prod(sizes[: s - 1])
        tail += sizes[s - 1] - 1
    raise PreconditionError("degree exceeds the grid; reduce the polynomial first", constraint="reduced")


@dataclass(frozen=True)
class CanonicalForm:
    """p_c together with the basis change A and the reduced support polynomial of G."""

    polynomial: SupportPolynomial
    basis_change: Matrix
    reduced_support: SupportPolynomial
    agrees: bool


def canonical_polynomial(field: FieldSpec, k: int, c) -> SupportPolynomial:
    """(prod c_i) x1^w1 prod_{i>=2} (1 - x_i^(q-1)) for a codeword c."""
    q = field.q
    values = [int(x) for x in np.asarray(c).reshape(-1) if x]
    if not values:
        raise PreconditionError("the zero codeword has no canonical form", constraint="nonzero")
    w1 = (len(values) - 1) % (q - 1) + 1
    lead = reduce(field.mul, values, 1)
    poly = SupportPolynomial.monomial(field, [w1] + [0] * (k - 1), lead)
    one = SupportPolynomial.constant(field, k)
    for i in range(1, k):
        exps = [0] * k
        exps[i] = q - 1
        poly = poly * (one - SupportPolynomial.monomial(field, exps))
    return poly


def canonical_form(code: LinearCode, u, options: Optional[ScanOptions] = None) -> CanonicalForm:
    """Canonical polynomial of the maximal codeword uG, checked pointwise against p_{G, sigma(uG)}."""
    u = code.message(u)
    if not is_maximal_codeword(code, u, options):
        raise PreconditionError("canonical form needs a maximal codeword", constraint="maximal")
    fld = code.field
    c = code.codeword(u)
    p_c = canonical_polynomial(fld, code.k, c)
    change_inv = Matrix(fld, complete_basis(fld, u[None, :]))
    change = inverse(change_inv)
    reduced = build_support_poly(code.G, support(c), reduce_terms=True, options=options)
    resolve_options(options).check_limit("evaluation points", fld.q ** code.k)
    grid = all_vectors(fld, code.k)
    agrees = np.array_equal(evaluate_many(reduced, grid),
                            evaluate_many(p_c, fld.matmul(grid, change.array)))
    return CanonicalForm(p_c, change, reduced, bool(agrees))


# --- overlap witnesses for maximal codewords ---

def is_overlap_witness(c, z, j: int, q: int, k: int) -> bool:
    """z vanishes at j in sigma(c) and shares at least (q-1)(k-1) support positions with c."""
    c = np.asarray(c)
    z = np.asarray(z)
    if not c[j] or z[j]:
        return False
    return int(np.count_nonzero((c != 0) & (z != 0))) >= (q - 1) * (k - 1)


@dataclass(frozen=True)
class OverlapWitness:
    position: int
    message: Tuple[int, ...]
    codeword: Tuple[int, ...]
    indices: Tuple[int, ...]


@dataclass(frozen=True)
class OverlapReport:
    """Per-position witnesses for a maximal codeword; violations must stay empty."""

    required_overlap: int
    witnesses: Dict[int, OverlapWitness]
    violations: Tuple[int, ...]

    @property
    def holds(self) -> bool:
        return not self.violations


def find_overlap_witnesses(code: LinearCode, u, options: Optional[ScanOptions] = None) -> OverlapReport:
    """For each j in sigma(uG), a codeword z with z_j = 0 covering (q-1)(k-1) positions of sigma(uG)."""
    if code.k < 2:
        raise PreconditionError("overlap witnesses need k >= 2", constraint="dimension")
    u = code.message(u)
    if not is_maximal_codeword(code, u, options):
        raise PreconditionError("overlap witnesses need a maximal codeword", constraint="maximal")
    opts = resolve_options(options)
    total = code.num_classes
    opts.check_limit("codeword classes", total)
    messages, words = code.class_block(0, total)
    c = code.codeword(u)
    own = c != 0
    need = (code.q - 1) * (code.k - 1)
    overlap = np.count_nonzero((words != 0) & own[None, :], axis=1)
    order = np.lexsort((np.arange(total), -overlap))
    order = order[overlap[order] >= need]

    witnesses: Dict[int, OverlapWitness] = {}
    violations = []
    for j in support(c):
        free = order[words[order, j] == 0]
        if free.size == 0:
            violations.append(j)
            continue
        i = int(free[0])
        shared = np.nonzero((words[i] != 0) & own)[0][:need]
        witnesses[j] = OverlapWitness(
            position=j,
            message=tuple(int(x) for x in messages[i]),
            codeword=tuple(int(x) for x in words[i]),
            indices=tuple(int(x) for x in shared),
        )
    return OverlapReport(need, witnesses, tuple(violations))
