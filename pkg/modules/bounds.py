"""
Parameter bounds for minimal codes.

Every verdict is evaluated in exact integer or Fraction arithmetic. The only
floating-point value is the non-constructive asymptotic length, which is
reported for reference and never used to decide anything.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, isqrt
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .errors import PreconditionError, VerificationError
from .gf import is_square, prime_power

Number = Union[int, Fraction]

LOWER_N = "lower_n"
LOWER_D = "lower_d"
UPPER_D = "upper_d"
CONSTRAINT = "constraint"

FEASIBLE = "feasible-so-far"
INFEASIBLE = "infeasible"

CITATIONS = {
    "basic_length": "codeword supports of a minimal code: n >= (k-1)q + 1",
    "griesmer_length": "Griesmer bound with the minimal-code distance floor",
    "fold_blocking_length": "(k-1)-fold blocking sets when k - 1 <= q",
    "overlap_length": "overlap of a maximal codeword with another codeword: n >= (q+1)(k-1)",
    "overlap_length_strict": "overlap bound is never attained when 3 <= k <= sqrt(q) + 2",
    "planar_two_fold": "size of a 2-fold blocking set of PG(2, q)",
    "stat_quadratic": "weight variance against the Bhatia-Davis ceiling, specialized to w <= n-k+1",
    "max_weight_room": "a non-constant-weight code has maximum weight above the average weight",
    "max_weight_bound": "weights of minimal codewords: w <= n - k + 1",
    "distance_upper": "distance ceiling of a non-constant-weight minimal code",
    "distance_lower": "minimum distance of a minimal code: d >= (q-1)(k-1) + 1",
    "variance_distance": "Bhatia-Davis inequality on the nonzero weights",
    "average_weight_length": "average weight q^(k-1) n (q-1)/(q^k-1) is at most w",
    "constant_weight_length": "constant-weight codes: n >= (q^k-1)/(q-1)",
    "popoviciu": "Popoviciu inequality on the nonzero weights",
    "delsarte": "Delsarte bound for s distinct nonzero weights",
}


@dataclass(frozen=True)
class BoundVerdict:
    """One bound evaluated at a parameter tuple; satisfied is None when the tuple lacks a parameter."""

    name: str
    kind: str
    value: Number
    satisfied: Optional[bool] = None
    citation: str = ""
    scope: str = ""

    @property
    def failed(self) -> bool:
        return self.satisfied is False


@dataclass(frozen=True)
class FeasibilityReport:
    params: Dict[str, Optional[int]]
    verdicts: Tuple[BoundVerdict, ...]
    overall: str
    witness: Tuple[str, ...] = ()

    @property
    def feasible(self) -> bool:
        return self.overall == FEASIBLE

    def verdict(self, name: str) -> Optional[BoundVerdict]:
        for v in self.verdicts:
            if v.name == name:
                return v
        return None


@dataclass(frozen=True)
class VarianceQuadratic:
    """q^(k-2) n^2 - B n + C for a would-be [n, k]_q minimal code."""

    q: int
    n: int
    k: int
    B: int
    C: int
    lhs: int
    room: bool
    constant_weight_length: int

    @property
    def satisfied(self) -> bool:
        return self.lhs >= 0

    @property
    def excludes(self) -> bool:
        """True when no minimal [n, k]_q code exists, constant-weight or not."""
        if self.n >= self.constant_weight_length:
            return False
        return not self.room or not self.satisfied


@dataclass(frozen=True)
class MTableEntry:
    q: int
    k: int
    lower: int
    lower_source: str
    upper: int
    upper_source: str
    exact: Optional[int] = None
    literature_upper: Optional[int] = None
    literature_source: Optional[str] = None
    nonconstructive: Optional[float] = None


@dataclass(frozen=True)
class BoundComparison:
    q: int
    k: int
    overlap: int
    statistical: int

    @property
    def sharper(self) -> str:
        if self.overlap == self.statistical:
            return "equal"
        return "overlap" if self.overlap > self.statistical else "statistical"


def _check_qk(q: int, k: int) -> None:
    prime_power(q)
    if k < 2:
        raise PreconditionError(f"bounds need k >= 2, got {k}", constraint="dimension")


def constant_weight_length(q: int, k: int) -> int:
    """(q^k - 1)/(q - 1), the shortest constant-weight [n, k]_q code."""
    return (q ** k - 1) // (q - 1)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


# --- lengths ---

def griesmer_length(q: int, k: int) -> int:
    d = d_lower_minimal(q, k)
    return d + sum(_ceil_div(d, q ** i) for i in range(1, k))


def planar_two_fold_length(q: int) -> int:
    """Lower bound on the size of a cutting blocking set of PG(2, q)."""
    if q < 9:
        return 3 * q
    if is_square(q):
        return 2 * q + 2 * isqrt(q) + 2
    if q in (11, 13, 17, 19):
        return _ceil_div(5 * q + 7, 2)
    p, e = prime_power(q)
    d = (e - 1) // 2
    return 2 * q + p ** d * _ceil_div(p ** (d + 1) + 1, p ** d + 1) + 2


def _length_bounds(q: int, k: int) -> List[Tuple[str, int, str]]:
    bounds = [
        ("basic_length", (k - 1) * q + 1, ""),
        ("griesmer_length", griesmer_length(q, k), ""),
    ]
    if k - 1 <= q:
        bounds.append(("fold_blocking_length", (q + 1) * (k - 1), "k - 1 <= q"))
    bounds.append(("overlap_length", (q + 1) * (k - 1), ""))
    if 3 <= k and (k - 2) ** 2 <= q and (q, k) != (2, 3):
        bounds.append(("overlap_length_strict", (q + 1) * (k - 1) + 1, "3 <= k <= sqrt(q) + 2"))
    if k == 3:
        bounds.append(("planar_two_fold", planar_two_fold_length(q), "k = 3"))
    return bounds


def length_lower_bounds(q: int, k: int, n: Optional[int] = None) -> List[BoundVerdict]:
    """Every applicable lower bound on the length of a minimal [n, k]_q code."""
    _check_qk(q, k)
    return [
        BoundVerdict(name, LOWER_N, value, None if n is None else n >= value, CITATIONS[name], scope)
        for name, value, scope in _length_bounds(q, k)
    ]


def stat_quadratic(q: int, n: int, k: int) -> VarianceQuadratic:
    """The quadratic in n that a non-constant-weight minimal code must keep non-negative."""
    _check_qk(q, k)
    top = q ** (k - 2)
    B = top + (k - 1) * (2 * q ** (k - 1) - 1) + (q ** (k - 1) - 1) // (q - 1)
    C = (k - 1) ** 2 * (q ** k - 1) + (k - 1) * (q ** k - 1) // (q - 1)
    return VarianceQuadratic(
        q=q, n=n, k=k, B=B, C=C,
        lhs=top * n * n - B * n + C,
        room=max_weight_room(q, n, k),
        constant_weight_length=constant_weight_length(q, k),
    )


def max_weight_room(q: int, n: int, k: int) -> bool:
    """n - k + 1 > n (q^k - q^(k-1)) / (q^k - 1)."""
    return (n - k + 1) * (q ** k - 1) > n * (q ** k - q ** (k - 1))


def min_length_stat(q: int, k: int) -> int:
    """Smallest n not excluded by the variance quadratic (with the constant-weight escape)."""
    _check_qk(q, k)
    ceiling = constant_weight_length(q, k)
    # room holds exactly from this n on
    start = (k - 1) * (q ** k - 1) // (q ** (k - 1) - 1) + 1
    if start >= ceiling:
        return ceiling
    quad = stat_quadratic(q, start, k)
    a, b, c = q ** (k - 2), quad.B, quad.C

    def f(n: int) -> int:
        return a * n * n - b * n + c

    if f(start) >= 0:
        return start
    n = max(start, (b + isqrt(b * b - 4 * a * c)) // (2 * a))
    while f(n) < 0:
        n += 1
    return min(n, ceiling)


def average_weight_length(q: int, n: int, k: int, w: int) -> int:
    """ceil((n - w)(q^k - 1)/(q^(k-1) - 1)), a lower bound on n given the maximum weight w."""
    _check_qk(q, k)
    return _ceil_div((n - w) * (q ** k - 1), q ** (k - 1) - 1)


# --- distances ---

def d_lower_minimal(q: int, k: int) -> int:
    return (q - 1) * (k - 1) + 1


def d_upper_minimal(q: int, n: int, k: int) -> Optional[int]:
    """Distance ceiling of a non-constant-weight minimal [n, k]_q code, None when not applicable."""
    _check_qk(q, k)
    denominator = n * (q ** (k - 1) - 1) - (k - 1) * (q ** k - 1)
    if denominator <= 0:
        return None
    numerator = n * (q - 1) * q ** (k - 2) * (n - 1 - q * (k - 1))
    return numerator // denominator


def _mean_weight(q: int, n: int, k: int) -> Tuple[Fraction, Fraction]:
    ell = Fraction(n * (q - 1), q ** k - 1)
    return ell, q ** (k - 1) * ell


def variance_distance_bound(q: int, n: int, k: int, w: int) -> Optional[int]:
    """Largest d a nondegenerate [n, k]_q code with maximum weight w > d can have; None if w <= mean."""
    ell, mean = _mean_weight(q, n, k)
    if w <= mean:
        return None
    return math.floor(mean - q ** (k - 2) * ell * (1 - ell) / (w - mean))


def bhatia_davis_window(q: int, k: int, d: int, w: int) -> Optional[Tuple[int, int]]:
    """Smallest and largest n compatible with minimum distance d and maximum weight w > d."""
    _check_qk(q, k)
    if d >= w:
        raise PreconditionError(
            f"d = {d} >= w = {w}: constant-weight codes are bounded by n >= {constant_weight_length(q, k)}",
            constraint="constant-weight",
        )
    allowed = []
    n = w
    # w > mean forces n < w (q^k - 1)/(q^k - q^(k-1))
    while n * (q ** k - q ** (k - 1)) < w * (q ** k - 1):
        bound = variance_distance_bound(q, n, k, w)
        if bound is not None and d <= bound:
            allowed.append(n)
        n += 1
    if not allowed:
        return None
    return allowed[0], allowed[-1]


def popoviciu_check(q: int, n: int, k: int, d: int, w: int) -> bool:
    """1/n <= (q-1)/(q^k-1) + (1/4)((w-d)/n)^2 (q^k-1)/(q^(k-2)(q-1))."""
    if n < 1:
        raise PreconditionError("n must be positive", constraint="length")
    rhs = Fraction(q - 1, q ** k - 1) + Fraction(1, 4) * Fraction(w - d, n) ** 2 * Fraction(
        q ** k - 1, q ** (k - 2) * (q - 1))
    return Fraction(1, n) <= rhs


def delsarte_sum(q: int, n: int, s: int) -> int:
    return sum(comb(n, i) * (q - 1) ** i for i in range(s + 1))


def delsarte_check(q: int, n: int, k: int, s: int) -> bool:
    """q^k <= sum_{i <= s} C(n, i)(q - 1)^i for a code with s distinct nonzero weights."""
    if s < 1:
        raise PreconditionError("s must be at least 1", constraint="weights")
    return q ** k <= delsarte_sum(q, n, s)


def delsarte_min_length(q: int, k: int, s: int) -> int:
    if s < 1:
        raise PreconditionError("s must be at least 1", constraint="weights")
    hi = 1
    while not delsarte_check(q, hi, k, s):
        hi *= 2
    lo = hi // 2 + 1 if hi > 1 else 1
    while lo < hi:
        mid = (lo + hi) // 2
        if delsarte_check(q, mid, k, s):
            hi = mid
        else:
            lo = mid + 1
    return lo


# --- aggregation ---

def feasibility(q: int, k: int, n: Optional[int] = None, d: Optional[int] = None,
                w: Optional[int] = None, s: Optional[int] = None) -> FeasibilityReport:
    """Run every bound the given parameters allow; infeasible iff one of them fails."""
    _check_qk(q, k)
    if n is not None and n < k:
        raise PreconditionError(f"n = {n} is smaller than k = {k}", constraint="length")
    if d is not None and w is not None and d > w:
        raise PreconditionError(f"d = {d} exceeds w = {w}", constraint="weights")
    if w is not None and n is not None and w > n:
        raise PreconditionError(f"w = {w} exceeds n = {n}", constraint="weights")

    verdicts: List[BoundVerdict] = list(length_lower_bounds(q, k, n))
    constant = d is not None and w is not None and d == w
    ceiling = constant_weight_length(q, k)

    if n is not None:
        quad = stat_quadratic(q, n, k)
        verdicts.append(BoundVerdict(
            "stat_quadratic", CONSTRAINT, quad.lhs, not quad.excludes, CITATIONS["stat_quadratic"],
            f"non-constant-weight codes; constant-weight codes need n >= {ceiling}",
        ))
        verdicts.append(BoundVerdict(
            "max_weight_room", CONSTRAINT, n - k + 1, quad.room or n >= ceiling, CITATIONS["max_weight_room"],
            "non-constant-weight codes",
        ))
        upper = d_upper_minimal(q, n, k)
        if upper is not None:
            ok = None
            if d is not None:
                ok = d <= upper or constant or (w is None and n >= ceiling)
            verdicts.append(BoundVerdict("distance_upper", UPPER_D, upper, ok, CITATIONS["distance_upper"],
                                         "non-constant-weight codes"))
    verdicts.append(BoundVerdict("distance_lower", LOWER_D, d_lower_minimal(q, k),
                                 None if d is None else d >= d_lower_minimal(q, k), CITATIONS["distance_lower"]))
    if w is not None and n is not None:
        verdicts.append(BoundVerdict("max_weight_bound", CONSTRAINT, n - k + 1, w <= n - k + 1,
                                     CITATIONS["max_weight_bound"]))
        bound = average_weight_length(q, n, k, w)
        verdicts.append(BoundVerdict("average_weight_length", LOWER_N, bound, n >= bound,
                                     CITATIONS["average_weight_length"], "nondegenerate codes"))
    if constant:
        verdicts.append(BoundVerdict("constant_weight_length", LOWER_N, ceiling,
                                     None if n is None else n >= ceiling, CITATIONS["constant_weight_length"]))
    elif d is not None and w is not None and n is not None:
        bound = variance_distance_bound(q, n, k, w)
        if bound is None:
            # w at or below the average weight
            verdicts.append(BoundVerdict("variance_distance", UPPER_D, _mean_weight(q, n, k)[1], False,
                                         CITATIONS["variance_distance"], "w must exceed the average weight"))
        else:
            verdicts.append(BoundVerdict("variance_distance", UPPER_D, bound, d <= bound,
                                         CITATIONS["variance_distance"], "w > d"))
        verdicts.append(BoundVerdict("popoviciu", CONSTRAINT, w - d, popoviciu_check(q, n, k, d, w),
                                     CITATIONS["popoviciu"]))
    if s is not None and n is not None:
        verdicts.append(BoundVerdict("delsarte", CONSTRAINT, delsarte_sum(q, n, s), delsarte_check(q, n, k, s),
                                     CITATIONS["delsarte"], f"s = {s} distinct nonzero weights"))

    failed = tuple(v.name for v in verdicts if v.failed)
    return FeasibilityReport(
        params=dict(q=q, n=n, k=k, d=d, w=w, s=s),
        verdicts=tuple(verdicts),
        overall=INFEASIBLE if failed else FEASIBLE,
        witness=failed,
    )


def length_bound_comparison(q: int, k: int) -> BoundComparison:
    _check_qk(q, k)
    return BoundComparison(q, k, (q + 1) * (k - 1), min_length_stat(q, k))


def overlap_dominates_griesmer(q_max: int = 64, k_max: int = 20) -> List[Tuple[int, int]]:
    """Pairs (q, k) where (q+1)(k-1) falls below the Griesmer-type length; empty when the inequality holds."""
    failures = []
    for q in range(2, q_max + 1):
        try:
            prime_power(q)
        except PreconditionError:
            continue
        for k in range(2, k_max + 1):
            if (q + 1) * (k - 1) < griesmer_length(q, k):
                failures.append((q, k))
    return failures


def nonconstructive_length(q: int, k: int) -> float:
    """2k / log_q(q^2/(q^2 - q + 1)), informational only."""
    return 2 * k * math.log(q) / math.log(q * q / (q * q - q + 1))


def _cube_root(q: int) -> Optional[int]:
    p, e = prime_power(q)
    return p ** (e // 3) if e % 3 == 0 else None


def literature_upper(q: int, k: int) -> Tuple[Optional[int], Optional[str]]:
    """Lengths of constructions quoted from other work; never used as the constructive upper bound."""
    if k == 5:
        return 8 * q - 3, "[8q-3, 5]_q construction from the literature"
    if k == 6:
        return 7 * (q + 1), "seven lines of PG(5, q)"
    root = _cube_root(q) if k == 4 else None
    if root is not None:
        return 3 * (q + root * root + root + 1), "three disjoint subgeometries of PG(3, q)"
    return None, None


Candidate = Tuple[int, str]


def _upper_candidates(q: int, k: int, upper: Dict[int, Candidate]) -> List[Candidate]:
    out: List[Candidate] = []
    if k == 2:
        out.append((q + 1, "line"))
    if k >= 4 and k % 2 == 0:
        out.append(((q + 1) * k * k // 4, "even-lines"))
    if k % 3 == 0 and is_square(q):
        out.append((2 * (k // 3) ** 2 * (q + isqrt(q) + 1), "baer"))
    out.append(((q - 1) * comb(k, 2) + k, "tetrahedron"))
    for a in range(2, k // 2 + 1):
        if k % a == 0:
            b = k // a
            value, source = upper[b]
            out.append((a * a * value, f"product:{a}:{source}"))
    if k >= 3:
        value, source = upper[k - 1]
        out.append((value + (q - 1) * (k - 1) + 1, f"lift:{source}"))
    return out


def _best(candidates: Sequence[Candidate], better: Callable[[int, int], bool]) -> Candidate:
    best = candidates[0]
    for c in candidates[1:]:
        if better(c[0], best[0]):
            best = c
    return best


def m_table(q: int, k_max: int) -> List[MTableEntry]:
    """Best known interval for m(k, q), the shortest minimal code of dimension k, for 2 <= k <= k_max."""
    _check_qk(q, 2)
    if k_max < 2:
        raise PreconditionError("k_max must be at least 2", constraint="dimension")
    upper: Dict[int, Candidate] = {}
    rows = []
    for k in range(2, k_max + 1):
        upper[k] = _best(_upper_candidates(q, k, upper), lambda a, b: a < b)
        lowers = [(value, name) for name, value, _ in _length_bounds(q, k)]
        lowers.append((min_length_stat(q, k), "stat_quadratic"))
        lower = _best(lowers, lambda a, b: a > b)
        if lower[0] > upper[k][0]:
            raise VerificationError(f"m({k},{q}): lower bound {lower[0]} exceeds upper bound {upper[k][0]}")
        literature, source = literature_upper(q, k)
        rows.append(MTableEntry(
            q=q, k=k,
            lower=lower[0], lower_source=lower[1],
            upper=upper[k][0], upper_source=upper[k][1],
            exact=lower[0] if lower[0] == upper[k][0] else None,
            literature_upper=literature, literature_source=source,
            nonconstructive=nonconstructive_length(q, k),
        ))
    return rows
