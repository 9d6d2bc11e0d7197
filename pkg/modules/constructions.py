"""
Explicit cutting blocking sets and the minimal codes they define.

Every builder returns a ConstructionReport that has been re-verified: the
point set is checked to be cutting and the code's minimum distance is
measured, then compared with the formula values.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, isqrt
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import NonSpanningError, PreconditionError, VerificationError
from .gf import FieldSpec, field_for_order, is_square
from .linalg import Matrix, rref_array
from .linear_code import LinearCode, weight_profile
from .parallel import ScanOptions
from .projgeom import Flat, PointSet, code_from_pointset, embed_pointset, is_cutting
from .spreads import SpreadElement, baer_pair, spread_blocks

StatusCallback = Callable[[str, str], None]


@dataclass(frozen=True)
class ConstructionReport:
    """A verified cutting blocking set with its code and the expected parameters."""

    name: str
    q: int
    k: int
    pointset: PointSet
    code: LinearCode
    expected_n: int
    expected_d: Optional[int]
    expected_d_exact: bool
    verified_minimal: bool
    verified_d: int
    blocks: Tuple[Matrix, ...] = ()
    notes: Tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return self.pointset.size


def lift_size_floor(inner_size: int, q: int, k: int) -> int:
    """Smallest cutting set in PG(k, q) containing a copy of a cutting set of PG(k-1, q) with inner_size points."""
    return inner_size + (q - 1) * k + 1


def _release(name: str, q: int, k: int, points: PointSet, expected_n: int,
             expected_d: Optional[int] = None, exact: bool = False,
             blocks: Sequence[Matrix] = (), notes: Sequence[str] = (),
             options: Optional[ScanOptions] = None,
             status_callback: Optional[StatusCallback] = None) -> ConstructionReport:
    """Re-verify a constructed set and wrap it in a report."""
    if status_callback:
        status_callback("verify", f"{name}: checking {points.size} points in PG({k - 1},{q})")
    if points.size != expected_n:
        raise VerificationError(f"{name}: built {points.size} points, expected {expected_n}")
    result = is_cutting(points, options=options)
    if not result.cutting:
        raise VerificationError(f"{name}: not a cutting blocking set (hyperplane {result.witness.normal})")
    code = code_from_pointset(points)
    d = weight_profile(code, options).d
    if d < (q - 1) * (k - 1) + 1:
        raise VerificationError(f"{name}: minimum distance {d} below (q-1)(k-1)+1")
    if expected_d is not None:
        if exact and d != expected_d:
            raise VerificationError(f"{name}: minimum distance {d}, expected exactly {expected_d}")
        if not exact and d < expected_d:
            raise VerificationError(f"{name}: minimum distance {d}, expected at least {expected_d}")
    if status_callback:
        status_callback("verify", f"{name}: cutting, d = {d}")
    return ConstructionReport(
        name=name, q=q, k=k, pointset=points, code=code,
        expected_n=expected_n, expected_d=expected_d, expected_d_exact=exact,
        verified_minimal=True, verified_d=d,
        blocks=tuple(blocks), notes=tuple(notes),
    )


def _require(condition: bool, message: str, constraint: str) -> None:
    if not condition:
        raise PreconditionError(message, constraint=constraint)


def _unit(rank: int, i: int) -> np.ndarray:
    e = np.zeros(rank, dtype=np.int64)
    e[i] = 1
    return e


# --- lines and low dimensions ---

def projective_line(q: int, options: Optional[ScanOptions] = None,
                    status_callback: Optional[StatusCallback] = None) -> ConstructionReport:
    """All q+1 points of PG(1, q)."""
    fld = field_for_order(q)
    points = PointSet.whole_space(fld, 2, options)
    return _release("line", q, 2, points, q + 1, q, exact=True,
                    options=options, status_callback=status_callback)


def tetrahedron(q: int, k: int, options: Optional[ScanOptions] = None,
                status_callback: Optional[StatusCallback] = None) -> ConstructionReport:
    """Union of the lines joining the k standard basis points."""
    _require(k >= 2, "the tetrahedron needs k >= 2", "dimension")
    fld = field_for_order(q)
    lines = [Matrix(fld, [_unit(k, i), _unit(k, j)]) for i in range(k) for j in range(i + 1, k)]
    rows = np.vstack([Flat(line).points() for line in lines])
    points = PointSet(fld, rows, rank=k).distinct()
    return _release("tetrahedron", q, k, points, (q - 1) * comb(k, 2) + k,
                    (q - 1) * (k - 1) + 1, exact=True, blocks=lines,
                    options=options, status_callback=status_callback)


def rational_normal_tangent(q: int, k: int, options: Optional[ScanOptions] = None,
                            status_callback: Optional[StatusCallback] = None) -> ConstructionReport:
    """Tangent lines of the rational normal curve at the first 2k-3 field elements, as a multiset."""
    fld = field_for_order(q)
    _require(k >= 2, "the tangent set needs k >= 2", "dimension")
    _require(q >= 2 * k - 3, f"rnt requires q ≥ 2k-3, got q = {q} < {2 * k - 3}", "field-size")
    _require(fld.p >= k, f"rnt requires characteristic ≥ k, got {fld.p} < {k}", "characteristic")
    lines = []
    for t in range(2 * k - 3):
        curve = np.array([fld.pow(t, i) for i in range(k)], dtype=np.int64)
        tangent = np.zeros(k, dtype=np.int64)
        for i in range(1, k):
            tangent[i] = fld.mul(i % fld.p, fld.pow(t, i - 1))
        lines.append(Matrix(fld, [curve, tangent]))
    rows = np.vstack([Flat(line).points() for line in lines])
    points = PointSet(fld, rows, rank=k)
    notes = []
    if not points.is_set:
        notes.append("tangent lines meet; shared points are kept with multiplicity")
    return _release("rnt", q, k, points, (2 * k - 3) * (q + 1), blocks=lines, notes=notes,
                    options=options, status_callback=status_callback)


# --- spreads ---

def _block_points(elements: Sequence[SpreadElement]) -> np.ndarray:
    rows = np.vstack([e.points() for e in elements])
    if np.unique(rows, axis=0).shape[0] != rows.shape[0]:
        raise VerificationError("selected spread elements are not pairwise disjoint")
    return rows


def spread_cutting_set(q: int, r: int, t: int, pairs: Optional[Dict[Tuple[int, int], Tuple[int, int]]] = None,
                       options: Optional[ScanOptions] = None,
                       status_callback: Optional[StatusCallback] = None) -> ConstructionReport:
    """t^2 elements of the Desarguesian (r-1)-spread of PG(rt-1, q) forming a cutting set."""
    _require(t >= 2, "the spread construction needs t >= 2", "t")
    _require(r >= 2, "the spread construction needs r >= 2", "r")
    fld = field_for_order(q)
    elements = spread_blocks(fld, r, t, pairs)
    points = PointSet(fld, _block_points(elements), rank=r * t)
    expected = t * t * (q ** r - 1) // (q - 1)
    return _release(f"spread:{r}", q, r * t, points, expected,
                    blocks=[e.basis for e in elements],
                    options=options, status_callback=status_callback)


def even_lines_code(q: int, k: int, options: Optional[ScanOptions] = None,
                    status_callback: Optional[StatusCallback] = None) -> ConstructionReport:
    """k^2/4 disjoint lines of a linespread of PG(k-1, q)."""
    _require(k >= 4 and k % 2 == 0, f"even-lines needs an even k >= 4, got {k}", "even-dimension")
    fld = field_for_order(q)
    elements = spread_blocks(fld, 2, k // 2)
    points = PointSet(fld, _block_points(elements), rank=k)
    return _release("even-lines", q, k, points, (q + 1) * k * k // 4, q * (k - 1), exact=True,
                    blocks=[e.basis for e in elements],
                    options=options, status_callback=status_callback)


def substitute_blocks(blocks: Sequence[Matrix], inner: Union[PointSet, Sequence[PointSet]]) -> PointSet:
    """Replace each block flat by an isomorphic copy of a point set of PG(b-1, q)."""
    if not blocks:
        raise PreconditionError("no blocks to substitute", constraint="blocks")
    inners = [inner] * len(blocks) if isinstance(inner, PointSet) else list(inner)
    if len(inners) != len(blocks):
        raise PreconditionError("one inner set per block is required", constraint="blocks")
    images = []
    for basis, points in zip(blocks, inners):
        if points.span_rank() != points.rank:
            raise NonSpanningError(points.span_rank(), points.rank)
        images.append(embed_pointset(points, basis))
    return images[0].union(*images[1:])


def baer_code(q: int, k: int, options: Optional[ScanOptions] = None,
              status_callback: Optional[StatusCallback] = None) -> ConstructionReport:
    """k^2/9 planes of a plane spread, each replaced by two disjoint Baer subplanes."""
    _require(k >= 3 and k % 3 == 0, f"baer needs k divisible by 3, got {k}", "dimension-mod-3")
    _require(is_square(q), f"baer needs a square q, got {q}", "square")
    fld = field_for_order(q)
    pair = baer_pair(q, options)
    t = k // 3
    if t == 1:
        blocks = [Matrix.identity(fld, 3)]
        points = pair
    else:
        blocks = [e.basis for e in spread_blocks(fld, 3, t)]
        points = substitute_blocks(blocks, pair)
    expected = 2 * t * t * (q + isqrt(q) + 1)
    return _release("baer", q, k, points, expected, q * (4 * t - 2), blocks=blocks,
                    options=options, status_callback=status_callback)


def spread_product(q: int, a: int, inner: ConstructionReport, options: Optional[ScanOptions] = None,
                   status_callback: Optional[StatusCallback] = None) -> ConstructionReport:
    """a^2 spread flats of PG(ab-1, q), each carrying a copy of a cutting set of PG(b-1, q)."""
    _require(a >= 2, "the product needs a >= 2", "factor")
    _require(inner.q == q, "inner construction is over another field", "same-field")
    b = inner.k
    _require(b >= 2, "the inner set must live in PG(b-1, q) with b >= 2", "dimension")
    fld = field_for_order(q)
    blocks = [e.basis for e in spread_blocks(fld, b, a)]
    points = substitute_blocks(blocks, inner.pointset)
    return _release(f"product:{a}:{inner.name}", q, a * b, points, a * a * inner.n, blocks=blocks,
                    options=options, status_callback=status_callback)


# --- lifting ---

def _spanning_points(points: np.ndarray, field_: FieldSpec, k: int) -> np.ndarray:
    """The lexicographically first k points that span."""
    chosen: List[np.ndarray] = []
    current = 0
    for p in points:
        candidate = np.vstack(chosen + [p])
        r = len(rref_array(field_, candidate)[1])
        if r > current:
            chosen.append(p)
            current = r
            if current == k:
                break
    if current != k:
        raise PreconditionError("inner set does not span its space", constraint="spanning")
    return np.vstack(chosen)


def lift(inner: ConstructionReport, options: Optional[ScanOptions] = None,
         status_callback: Optional[StatusCallback] = None) -> ConstructionReport:
    """Cutting set of PG(k, q) from one of PG(k-1, q) by adding k lines through an external point."""
    q, k = inner.q, inner.k
    fld = inner.pointset.field
    base = inner.pointset
    embedded = np.hstack([base.points, np.zeros((base.num_distinct, 1), dtype=np.int64)])
    apex = _unit(k + 1, k)
    spanning = np.hstack([_spanning_points(base.points, fld, k), np.zeros((k, 1), dtype=np.int64)])
    scalars = np.arange(1, q, dtype=np.int64)
    new_rows = [apex[None, :]]
    for p in spanning:
        new_rows.append(fld.add(p[None, :], fld.mul(scalars[:, None], apex[None, :])))
    added = PointSet(fld, np.vstack(new_rows), rank=k + 1)
    points = PointSet(fld, embedded, base.multiplicities, rank=k + 1).union(added)
    expected = lift_size_floor(inner.n, q, k)
    return _release(f"lift:{inner.name}", q, k + 1, points, expected, (q - 1) * k + 1, exact=True,
                    notes=[f"lifted from {inner.name} ({inner.n} points)"],
                    options=options, status_callback=status_callback)


# --- planning and dispatch ---

def _spread_rank(name: str, rest: str, k: int) -> int:
    _require(rest.isdigit(), f"malformed spread name {name!r}, expected spread:<r>", "construction-name")
    r = int(rest)
    _require(r >= 2 and k % r == 0 and k // r >= 2, f"spread:{r} needs k a multiple of {r} with k/{r} >= 2", "factor")
    return r


def expected_length(name: str, q: int, k: int) -> int:
    """Size of the named construction, without building it."""
    head, _, rest = name.partition(":")
    if head == "line":
        _require(k == 2, "line needs k = 2", "dimension")
        return q + 1
    if head == "tetrahedron":
        _require(k >= 2, "the tetrahedron needs k >= 2", "dimension")
        return (q - 1) * comb(k, 2) + k
    if head == "rnt":
        return (2 * k - 3) * (q + 1)
    if head == "even-lines":
        _require(k >= 4 and k % 2 == 0, f"even-lines needs an even k >= 4, got {k}", "even-dimension")
        return (q + 1) * k * k // 4
    if head == "spread":
        r = _spread_rank(name, rest, k)
        return (k // r) ** 2 * (q ** r - 1) // (q - 1)
    if head == "baer":
        _require(k % 3 == 0 and is_square(q), "baer needs 3 | k and a square q", "dimension-mod-3")
        return 2 * (k // 3) ** 2 * (q + isqrt(q) + 1)
    if head == "lift":
        _require(bool(rest), "lift needs an inner construction name", "construction-name")
        return lift_size_floor(expected_length(rest, q, k - 1), q, k - 1)
    if head == "product":
        a_text, _, inner = rest.partition(":")
        _require(a_text.isdigit() and bool(inner), f"malformed product name {name!r}", "construction-name")
        a = int(a_text)
        _require(a >= 2 and k % a == 0, f"{a} does not divide k = {k}", "factor")
        return a * a * expected_length(inner, q, k // a)
    if head == "best":
        return expected_length(best_known_plan(q, k), q, k)
    raise PreconditionError(f"unknown construction {name!r}", constraint="construction-name")


def best_known_plan(q: int, k: int) -> str:
    """Name of the shortest construction among the explicit families for (q, k)."""
    _require(k >= 2, "best-known needs k >= 2", "dimension")
    if k == 2:
        return "line"
    square = is_square(q)
    if k == 3:
        options = ["tetrahedron"] + (["baer"] if square else [])
    else:
        options = []
        if k % 2 == 0:
            options.append("even-lines")
        if k % 3 == 0 and square:
            options.append("baer")
        if k % 3 == 1 and square:
            options.append("lift:baer")
        if not options:
            options.append("lift:even-lines")
    return min(options, key=lambda name: expected_length(name, q, k))


def build_named(name: str, q: int, k: int, options: Optional[ScanOptions] = None,
                status_callback: Optional[StatusCallback] = None) -> ConstructionReport:
    """Build a construction from its name: line, tetrahedron, rnt, even-lines, spread:<r>, baer, best, lift:<inner>, product:<a>:<inner>."""
    kwargs = dict(options=options, status_callback=status_callback)
    head, _, rest = name.partition(":")
    if head == "line":
        _require(k == 2, "line needs k = 2", "dimension")
        return projective_line(q, **kwargs)
    if head == "tetrahedron":
        return tetrahedron(q, k, **kwargs)
    if head == "rnt":
        return rational_normal_tangent(q, k, **kwargs)
    if head == "even-lines":
        return even_lines_code(q, k, **kwargs)
    if head == "spread":
        r = _spread_rank(name, rest, k)
        return spread_cutting_set(q, r, k // r, **kwargs)
    if head == "baer":
        return baer_code(q, k, **kwargs)
    if head == "best":
        return best_known(q, k, **kwargs)
    if head == "lift":
        _require(bool(rest), "lift needs an inner construction name", "construction-name")
        _require(k >= 3, "lift needs a target k >= 3", "dimension")
        return lift(build_named(rest, q, k - 1, **kwargs), **kwargs)
    if head == "product":
        a_text, _, inner = rest.partition(":")
        _require(a_text.isdigit() and bool(inner), f"malformed product name {name!r}", "construction-name")
        a = int(a_text)
        _require(a >= 2 and k % a == 0, f"{a} does not divide k = {k}", "factor")
        return spread_product(q, a, build_named(inner, q, k // a, **kwargs), **kwargs)
    raise PreconditionError(f"unknown construction {name!r}", constraint="construction-name")


def best_known(q: int, k: int, options: Optional[ScanOptions] = None,
               status_callback: Optional[StatusCallback] = None) -> ConstructionReport:
    """Shortest explicit family for (q, k), built and verified."""
    plan = best_known_plan(q, k)
    if status_callback:
        status_callback("plan", f"best known for q={q}, k={k}: {plan} ({expected_length(plan, q, k)} points)")
    return build_named(plan, q, k, options, status_callback)


def from_pointset(points: PointSet, name: str = "points", options: Optional[ScanOptions] = None,
                  status_callback: Optional[StatusCallback] = None) -> ConstructionReport:
    """Check a given point set; unlike the builders, a non-cutting set is reported rather than raised."""
    q, k = points.field.q, points.rank
    if status_callback:
        status_callback("verify", f"{name}: checking {points.size} points in PG({k - 1},{q})")
    result = is_cutting(points, options=options)
    code = code_from_pointset(points)
    d = weight_profile(code, options).d
    notes = () if result.cutting else (f"hyperplane {result.witness.normal} meets the set in a non-spanning subset",)
    return ConstructionReport(
        name=name, q=q, k=k, pointset=points, code=code,
        expected_n=points.size, expected_d=None, expected_d_exact=False,
        verified_minimal=result.cutting, verified_d=d, notes=notes,
    )
