"""
Exact arithmetic in GF(p^e).

Elements are encoded as integers sum(a_i * p**i), where (a_0, ..., a_{e-1})
are the coordinates in the polynomial basis. The modulus is the
lexicographically smallest monic irreducible polynomial of degree e and the
primitive element is the smallest encoding of multiplicative order q - 1, so
every field (and everything built on it) is reproducible from (p, e) alone.

All FieldSpec operations accept Python integers or numpy integer arrays and
return the same kind.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Tuple, Union

import numpy as np

from config import ADD_TABLE_LIMIT, LOG_TABLE_LIMIT, MAX_FIELD_ORDER
from .errors import FieldMismatchError, PreconditionError, VerificationError

ArrayLike = Union[int, np.ndarray]


def is_prime(n: int) -> bool:
    """Trial-division primality test."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> List[int]:
    """Distinct prime factors of n in increasing order."""
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.append(n)
    return factors


def prime_power(q: int) -> Tuple[int, int]:
    """Split a prime power q into (p, e)."""
    if q < 2:
        raise PreconditionError(f"{q} is not a prime power", constraint="prime-power")
    p = prime_factors(q)[0]
    e, rest = 0, q
    while rest % p == 0:
        rest //= p
        e += 1
    if rest != 1:
        raise PreconditionError(f"{q} is not a prime power", constraint="prime-power")
    return p, e


def is_square(q: int) -> bool:
    return q >= 0 and math.isqrt(q) ** 2 == q


# --- polynomials over GF(p) as digit lists (lowest degree first) ---

def _to_digits(value: int, p: int, length: int) -> List[int]:
    digits = []
    for _ in range(length):
        digits.append(value % p)
        value //= p
    return digits


def _from_digits(digits: List[int], p: int) -> int:
    value = 0
    for d in reversed(digits):
        value = value * p + d
    return value


def _poly_rem(a: List[int], m: List[int], p: int) -> List[int]:
    """Remainder of a modulo the monic polynomial m over GF(p)."""
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    rem = [x % p for x in a[:dm]]
    return rem + [0] * (dm - len(rem))


def is_irreducible(modulus: int, p: int, e: int) -> bool:
    """Exhaustive divisor search for a monic degree-e polynomial over GF(p)."""
    if e == 1:
        return True
    f = _to_digits(modulus, p, e + 1)
    if f[0] == 0:
        return False
    for d in range(1, e // 2 + 1):
        for code in range(p ** d, 2 * p ** d):
            g = _to_digits(code, p, d + 1)
            if not any(_poly_rem(f, g, p)):
                return False
    return True


def smallest_irreducible(p: int, e: int) -> int:
    """Lexicographically smallest monic irreducible polynomial, as an encoding."""
    base = p ** e
    for tail in range(base):
        if is_irreducible(base + tail, p, e):
            return base + tail
    raise VerificationError(f"no irreducible polynomial of degree {e} over GF({p})")


class _Schoolbook:
    """Table-free multiplication by polynomial reduction."""

    def __init__(self, p: int, e: int, modulus: int):
        self.p = p
        self.e = e
        self.modulus = modulus
        self.mod_digits = _to_digits(modulus, p, e + 1)

    def mul(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        if e == 1:
            return a * b % p
        if p == 2:
            result = 0
            while b:
                if b & 1:
                    result ^= a
                b >>= 1
                a <<= 1
                if (a >> e) & 1:
                    a ^= self.modulus
            return result
        da = _to_digits(a, p, e)
        db = _to_digits(b, p, e)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        return _from_digits(_poly_rem(prod, self.mod_digits, p), p)

    def pow(self, a: int, n: int) -> int:
        result = 1
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result


def _find_primitive(arith: _Schoolbook, q: int) -> int:
    order = q - 1
    if order == 1:
        return 1
    cofactors = [order // r for r in prime_factors(order)]
    for g in range(2, q):
        if all(arith.pow(g, c) != 1 for c in cofactors):
            return g
    raise VerificationError(f"no primitive element found in GF({q})")


def _wrap(x) -> ArrayLike:
    return int(x) if np.ndim(x) == 0 else x


@dataclass(frozen=True)
class FieldSpec:
    """A concrete finite field GF(p^e) with its canonical modulus and primitive element."""

    p: int
    e: int
    modulus: int
    primitive: int
    _exp: Optional[np.ndarray] = field(default=None, compare=False, repr=False)
    _log: Optional[np.ndarray] = field(default=None, compare=False, repr=False)
    _add_table: Optional[np.ndarray] = field(default=None, compare=False, repr=False)
    _neg_table: Optional[np.ndarray] = field(default=None, compare=False, repr=False)
    _arith: Optional[_Schoolbook] = field(default=None, compare=False, repr=False)

    @property
    def q(self) -> int:
        return self.p ** self.e

    @property
    def has_log_tables(self) -> bool:
        return self._exp is not None

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(self, int(value))

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def digits(self, value: int) -> List[int]:
        """Polynomial-basis coordinates of an element."""
        return _to_digits(int(value), self.p, self.e)

    def validate(self, values) -> np.ndarray:
        arr = np.asarray(values, dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= self.q):
            raise PreconditionError(f"entries must lie in [0, {self.q})", constraint="encoding")
        return arr

    # --- arithmetic ---

    def add(self, a: ArrayLike, b: ArrayLike) -> ArrayLike:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return _wrap((a + b) % self.p)
        if self.p == 2:
            return _wrap(np.bitwise_xor(a, b))
        if self._add_table is not None:
            return _wrap(self._add_table[a, b])
        return _wrap(self._digitwise_add(a, b))

    def neg(self, a: ArrayLike) -> ArrayLike:
        a = np.asarray(a, dtype=np.int64)
        if self.e == 1:
            return _wrap((-a) % self.p)
        if self.p == 2:
            return _wrap(a.copy())
        return _wrap(self._neg_table[a])

    def sub(self, a: ArrayLike, b: ArrayLike) -> ArrayLike:
        return self.add(a, self.neg(b))

    def mul(self, a: ArrayLike, b: ArrayLike) -> ArrayLike:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return _wrap((a * b) % self.p)
        if self._exp is not None:
            prod = self._exp[self._log[a] + self._log[b]]
            return _wrap(np.where((a == 0) | (b == 0), 0, prod))
        return _wrap(np.vectorize(self._arith.mul, otypes=[np.int64])(a, b))

    def inv(self, a: ArrayLike) -> ArrayLike:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise PreconditionError("inversion of zero", constraint="nonzero")
        if self._exp is not None:
            return _wrap(self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)])
        if self.e == 1:
            return _wrap(np.vectorize(lambda x: pow(int(x), -1, self.p), otypes=[np.int64])(a))
        return _wrap(np.vectorize(lambda x: self._arith.pow(int(x), self.q - 2), otypes=[np.int64])(a))

    def div(self, a: ArrayLike, b: ArrayLike) -> ArrayLike:
        return self.mul(a, self.inv(b))

    def pow(self, a: ArrayLike, n: ArrayLike) -> ArrayLike:
        a = np.asarray(a, dtype=np.int64)
        n = np.asarray(n, dtype=np.int64)
        if np.any((a == 0) & (n < 0)):
            raise PreconditionError("negative power of zero", constraint="nonzero")
        if self._exp is not None:
            powered = self._exp[(self._log[a] * n) % (self.q - 1)]
            return _wrap(np.where(a == 0, np.where(n == 0, 1, 0), powered))
        return _wrap(np.vectorize(self._pow_scalar, otypes=[np.int64])(a, n))

    def _pow_scalar(self, a: int, n: int) -> int:
        a, n = int(a), int(n)
        if a == 0:
            return 1 if n == 0 else 0
        return self._arith.pow(a, n % (self.q - 1))

    def exp(self, i: ArrayLike) -> ArrayLike:
        """gamma**i for the fixed primitive element gamma."""
        if self._exp is not None:
            i = np.asarray(i, dtype=np.int64)
            return _wrap(self._exp[i % (self.q - 1)])
        return self.pow(self.primitive, i)

    def log(self, a: ArrayLike) -> ArrayLike:
        """Discrete logarithm to base gamma, in [0, q-1)."""
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise PreconditionError("logarithm of zero", constraint="nonzero")
        if self._log is not None:
            return _wrap(self._log[a])
        lookup = {}
        x = 1
        for i in range(self.q - 1):
            lookup[x] = i
            x = self._arith.mul(x, self.primitive)
        return _wrap(np.vectorize(lambda v: lookup[int(v)], otypes=[np.int64])(a))

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Matrix product of two encoded arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return (a @ b) % self.p
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for j in range(a.shape[1]):
            out = self.add(out, self.mul(a[:, j, None], b[None, j, :]))
        return out

    def _digitwise_add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        scale = 1
        for _ in range(self.e):
            out += ((a // scale + b // scale) % self.p) * scale
            scale *= self.p
        return out


@dataclass(frozen=True)
class FieldElement:
    """A single element of a FieldSpec; operators refuse mixed fields."""

    field: FieldSpec
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.field.q:
            raise PreconditionError(
                f"{self.value} is not an element encoding of {self.field}", constraint="encoding"
            )

    def _other(self, other) -> int:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected a FieldElement, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatchError(f"cannot combine elements of {self.field} and {other.field}")
        return other.value

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, self.field.add(self.value, self._other(other)))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, self.field.sub(self.value, self._other(other)))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, self.field.mul(self.value, self._other(other)))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field, self.field.div(self.value, self._other(other)))

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, n: int) -> "FieldElement":
        return FieldElement(self.field, self.field.pow(self.value, int(n)))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def order(self) -> int:
        """Multiplicative order."""
        if self.value == 0:
            raise PreconditionError("zero has no multiplicative order", constraint="nonzero")
        n = self.field.q - 1
        for r in prime_factors(n):
            while n % r == 0 and self.field.pow(self.value, n // r) == 1:
                n //= r
        return n

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"{self.field}({self.value})"


@dataclass(frozen=True)
class FieldPolynomial:
    """Univariate polynomial over a FieldSpec, coefficients lowest degree first."""

    field: FieldSpec
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coeffs", coeffs or (0,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if any(self.coeffs) else -1

    @property
    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = self.field.add(self.field.mul(acc, x), c)
        return acc

    def __str__(self) -> str:
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms) if terms else "0"


@lru_cache(maxsize=None)
def make_field(p: int, e: int = 1, max_order: Optional[int] = None) -> FieldSpec:
    """Build (and cache) the canonical GF(p^e)."""
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime", constraint="prime")
    if e < 1:
        raise PreconditionError(f"extension degree must be at least 1, got {e}", constraint="degree")
    limit = MAX_FIELD_ORDER if max_order is None else max_order
    q = p ** e
    if q > limit:
        raise PreconditionError(f"field order {q} exceeds the limit {limit}", constraint="field-order")

    modulus = smallest_irreducible(p, e)
    arith = _Schoolbook(p, e, modulus)
    primitive = _find_primitive(arith, q)

    exp_table = log_table = add_table = neg_table = None
    if q <= LOG_TABLE_LIMIT:
        exp_table = np.zeros(2 * (q - 1), dtype=np.int64)
        log_table = np.zeros(q, dtype=np.int64)
        x = 1
        for i in range(q - 1):
            exp_table[i] = x
            log_table[x] = i
            x = arith.mul(x, primitive)
        exp_table[q - 1:] = exp_table[: q - 1]

    if e > 1 and p > 2:
        values = np.arange(q, dtype=np.int64)
        neg_table = np.zeros(q, dtype=np.int64)
        scale = 1
        for _ in range(e):
            neg_table += ((-(values // scale)) % p) * scale
            scale *= p
        if q <= ADD_TABLE_LIMIT:
            a, b = np.meshgrid(values, values, indexing="ij")
            add_table = np.zeros((q, q), dtype=np.int64)
            scale = 1
            for _ in range(e):
                add_table += ((a // scale + b // scale) % p) * scale
                scale *= p

    return FieldSpec(p, e, modulus, primitive, exp_table, log_table, add_table, neg_table, arith)


def field_for_order(q: int, max_order: Optional[int] = None) -> FieldSpec:
    p, e = prime_power(q)
    return make_field(p, e, max_order)


@lru_cache(maxsize=None)
def _subfield_embedding(small: FieldSpec, big: FieldSpec) -> Tuple[int, ...]:
    """Encodings in `big` of the elements of `small`, via the smallest root of small's modulus."""
    if small == big:
        return tuple(range(small.q))
    if small.e == 1:
        return tuple(range(small.p))
    step = (big.q - 1) // (small.q - 1)
    mod_digits = _to_digits(small.modulus, small.p, small.e + 1)
    roots = []
    for j in range(small.q - 1):
        candidate = big.exp(j * step)
        acc = 0
        for c in reversed(mod_digits):
            acc = big.add(big.mul(acc, candidate), c)
        if acc == 0:
            roots.append(candidate)
    rho = min(roots)
    table = []
    for value in range(small.q):
        acc = 0
        for t, d in enumerate(_to_digits(value, small.p, small.e)):
            if d:
                acc = big.add(acc, big.mul(d, big.pow(rho, t)))
        table.append(acc)
    return tuple(table)


def embed(x: int, small: FieldSpec, big: FieldSpec) -> int:
    """Image of an element of `small` inside the extension `big`."""
    _check_extension(small, big)
    return _subfield_embedding(small, big)[x]


def _check_extension(small: FieldSpec, big: FieldSpec) -> None:
    if small.p != big.p or big.e % small.e != 0:
        raise FieldMismatchError(f"{big} is not an extension of {small}")


def minimal_polynomial(a: FieldElement, over: FieldSpec) -> FieldPolynomial:
    """Minimal polynomial over `over` of an element of an extension field."""
    big = a.field
    _check_extension(over, big)
    back = {v: i for i, v in enumerate(_subfield_embedding(over, big))}

    conjugates = [a.value]
    x = big.pow(a.value, over.q)
    while x != a.value:
        conjugates.append(x)
        x = big.pow(x, over.q)

    poly = [1]
    for root in conjugates:
        shifted = [0] + poly
        scaled = [big.mul(root, c) for c in poly] + [0]
        poly = [big.sub(s, t) for s, t in zip(shifted, scaled)]
    try:
        coeffs = tuple(back[c] for c in poly)
    except KeyError:
        raise VerificationError(f"minimal polynomial of {a} has coefficients outside {over}")
    return FieldPolynomial(over, coeffs)


def companion_matrix(f: FieldPolynomial):
    """Companion matrix M with coords(x * gamma) = coords(x) @ M for a root gamma of f."""
    from .linalg import Matrix

    if f.degree < 1 or not f.is_monic:
        raise PreconditionError("companion matrix needs a monic polynomial of degree >= 1",
                                constraint="monic")
    r = f.degree
    fld = f.field
    rows = np.zeros((r, r), dtype=np.int64)
    for j in range(r - 1):
        rows[j, j + 1] = 1
    rows[r - 1, :] = fld.neg(np.asarray(f.coeffs[:r], dtype=np.int64))
    return Matrix(fld, rows)
