from functools import reduce

import numpy as np
import pytest

from modules.errors import PreconditionError
from modules.gf import field_for_order
from modules.linalg import Matrix, all_vectors, in_rowspace, rank
from modules.linear_code import LinearCode, support
from modules.supportpoly import (SupportPolynomial, alon_furedi_bound, build_support_poly, canonical_form,
                                 canonical_polynomial, coefficient, covering_messages, evaluate, evaluate_many,
                                 find_overlap_witnesses, is_overlap_witness, nonzero_set, reduce_mod_Iq,
                                 zero_set)

GRID_SHAPES = [(2, 3), (2, 4), (2, 5), (3, 3), (3, 4), (3, 5), (4, 3), (5, 3), (7, 2), (9, 2)]

# codewords avoiding position j (1-based 8..14) of the weight-7 codeword (1,0,0,0)G
OVERLAP_WITNESSES = {
    7: (0, 0, 0, 0, 2, 1, 2, 0, 1, 1, 1, 1, 1, 2),
    8: (0, 1, 2, 1, 2, 0, 1, 2, 0, 1, 1, 1, 2, 2),
    9: (1, 2, 0, 1, 2, 0, 1, 1, 1, 0, 1, 2, 1, 2),
    10: (2, 1, 0, 2, 2, 2, 0, 1, 2, 1, 0, 2, 2, 1),  # last entry 1, not 2: the value with 2 is not a codeword
    11: (1, 2, 0, 1, 1, 1, 0, 1, 2, 1, 2, 0, 2, 1),
    12: (0, 2, 1, 2, 2, 2, 0, 1, 2, 1, 1, 1, 0, 2),
    13: (0, 1, 2, 1, 1, 1, 0, 1, 2, 1, 1, 1, 1, 0),
}


def test_identity_columns_give_a_monomial(gf3):
    p = build_support_poly(Matrix.identity(gf3, 2), [0, 1])
    assert p.terms == {(1, 1): 1}
    assert str(p) == "x1*x2"


def test_polynomial_arithmetic(gf2, gf3):
    x1 = SupportPolynomial.monomial(gf2, [1, 0])
    x2 = SupportPolynomial.monomial(gf2, [0, 1])
    s = x1 + x2
    assert (s * s).terms == {(2, 0): 1, (0, 2): 1}
    assert (s - s).is_zero
    p = SupportPolynomial(gf3, 2, {(2, 1): 2, (0, 0): 1})
    assert str(p) == "2*x1^2*x2 + 1"
    assert p.degree == 3
    assert int(coefficient(p, (2, 1))) == 2
    assert int(coefficient(p, (1, 1))) == 0
    with pytest.raises(PreconditionError):
        SupportPolynomial(gf3, 2, {(1,): 1})


def test_reduction(gf3):
    p = SupportPolynomial(gf3, 2, {(3, 0): 1, (1, 0): 2, (4, 2): 2})
    reduced = reduce_mod_Iq(p)
    assert reduced.terms == {(2, 2): 2}
    assert reduced.is_reduced and not p.is_reduced


def test_evaluation_is_the_product_of_codeword_entries(ternary_code, rng):
    fld = ternary_code.field
    indices = (0, 4, 7, 12, 13)
    p = build_support_poly(ternary_code.G, indices)
    assert p.degree == len(indices)
    for _ in range(10):
        u = rng.integers(0, 3, size=4)
        c = ternary_code.codeword(u)
        expected = reduce(fld.mul, [int(c[i]) for i in indices], 1)
        assert int(evaluate(p, u)) == expected
    with pytest.raises(PreconditionError):
        evaluate(p, [1, 2])


def test_reduced_build_matches_reduction(ternary_code):
    indices = support(ternary_code.codeword((1, 0, 0, 0)))
    full = build_support_poly(ternary_code.G, indices)
    folded = build_support_poly(ternary_code.G, indices, reduce_terms=True)
    assert folded == reduce_mod_Iq(full)
    assert folded.is_reduced


def _invertible(field, k, rng):
    while True:
        A = Matrix(field, rng.integers(0, field.q, size=(k, k)))
        if rank(A) == k:
            return A


def _random_instances(rng, count):
    """(field, G, I) triples over small fields whose whole grid F_q^k can be evaluated."""
    for _ in range(count):
        q, k = GRID_SHAPES[rng.integers(len(GRID_SHAPES))]
        field = field_for_order(q)
        n = int(rng.integers(k, k + 4))
        G = Matrix(field, rng.integers(0, q, size=(k, n)))
        size = int(rng.integers(1, min(n, 5) + 1))
        indices = tuple(int(i) for i in rng.choice(n, size=size, replace=False))
        yield field, G, indices


def test_change_of_basis_substitutes_xA(rng):
    for field, G, indices in _random_instances(rng, 500):
        A = _invertible(field, G.rows, rng)
        grid = all_vectors(field, G.rows)
        moved = evaluate_many(build_support_poly(A @ G, indices), grid)
        substituted = evaluate_many(build_support_poly(G, indices), field.matmul(grid, A.array))
        assert np.array_equal(moved, substituted)


def test_column_permutation_relabels_indices(rng):
    for _, G, indices in _random_instances(rng, 500):
        perm = rng.permutation(G.cols)
        permuted = build_support_poly(G.columns(perm), indices)
        assert permuted == build_support_poly(G, [perm[i] for i in indices])


def test_column_scaling_scales_the_polynomial(rng):
    for field, G, indices in _random_instances(rng, 500):
        v = rng.integers(1, field.q, size=G.cols)
        scaled = Matrix(field, field.mul(G.array, v[None, :]))
        factor = reduce(field.mul, [int(v[i]) for i in indices], 1)
        assert build_support_poly(scaled, indices) == build_support_poly(G, indices).scale(factor)


@pytest.mark.parametrize("q,k", GRID_SHAPES)
def test_reduction_preserves_values_on_the_whole_grid(q, k, rng):
    field = field_for_order(q)
    grid = all_vectors(field, k)
    for _ in range(10):
        terms = {tuple(int(x) for x in rng.integers(0, 2 * q + 1, size=k)): int(rng.integers(1, q))
                 for _ in range(6)}
        p = SupportPolynomial(field, k, terms)
        assert np.array_equal(evaluate_many(p, grid), evaluate_many(reduce_mod_Iq(p), grid))
    G = Matrix(field, rng.integers(0, q, size=(k, k + 3)))
    p = build_support_poly(G, range(k + 3))
    assert np.array_equal(evaluate_many(p, grid), evaluate_many(reduce_mod_Iq(p), grid))


def test_reduced_support_polynomial_has_product_form(ternary_code):
    fld = ternary_code.field
    one = SupportPolynomial.constant(fld, 4)
    x = [SupportPolynomial.monomial(fld, row) for row in np.eye(4, dtype=int).tolist()]
    expected = x[0] * (one - x[1] * x[1]) * (one - x[2] * x[2]) * (one - x[3] * x[3])
    indices = support(ternary_code.codeword((1, 0, 0, 0)))
    assert reduce_mod_Iq(build_support_poly(ternary_code.G, indices)) == expected
    assert len(expected.terms) == 8


def test_nonzero_set_of_a_maximal_codeword(ternary_code, small_chunks):
    indices = support(ternary_code.codeword((1, 0, 0, 0)))
    assert indices == tuple(range(7, 14))
    reduced = build_support_poly(ternary_code.G, indices, reduce_terms=True)
    nonzero = nonzero_set(reduced, small_chunks)
    assert nonzero.tolist() == [[1, 0, 0, 0], [2, 0, 0, 0]]
    assert np.array_equal(nonzero, covering_messages(ternary_code.G, indices, small_chunks))
    assert zero_set(reduced).shape[0] == 81 - 2
    assert reduced.degree == 7
    assert alon_furedi_bound(reduced) == 2


def test_alon_furedi_bound(gf3):
    x1 = SupportPolynomial.monomial(gf3, [1, 0])
    assert alon_furedi_bound(x1) == 6
    assert nonzero_set(x1).shape[0] == 6
    assert alon_furedi_bound(SupportPolynomial.constant(gf3, 2)) == 9
    assert alon_furedi_bound(x1, grid_sizes=[3, 2]) == 3
    with pytest.raises(PreconditionError):
        alon_furedi_bound(SupportPolynomial(gf3, 2, {}))
    with pytest.raises(PreconditionError):
        alon_furedi_bound(SupportPolynomial.monomial(gf3, [3, 3]))


def test_canonical_polynomial(gf3):
    p = canonical_polynomial(gf3, 2, [1, 2])
    assert p.terms == {(2, 0): 2, (2, 2): 1}
    with pytest.raises(PreconditionError):
        canonical_polynomial(gf3, 2, [0, 0])


def test_canonical_form_agrees(ternary_code):
    form = canonical_form(ternary_code, (1, 0, 0, 0))
    assert form.agrees
    assert form.polynomial.degree == 7
    assert form.basis_change.shape == (4, 4)


def test_canonical_form_needs_a_maximal_codeword(gf2):
    code = LinearCode.from_rows(gf2, [[1, 0, 0], [0, 1, 1]])
    with pytest.raises(PreconditionError) as info:
        canonical_form(code, (1, 0))
    assert info.value.constraint == "maximal"


def test_known_overlap_witnesses(ternary_code):
    c = ternary_code.codeword((1, 0, 0, 0))
    for j, z in OVERLAP_WITNESSES.items():
        assert in_rowspace(ternary_code.G, z)
        assert is_overlap_witness(c, z, j, 3, 4)
    assert not is_overlap_witness(c, OVERLAP_WITNESSES[7], 8, 3, 4)
    assert not in_rowspace(ternary_code.G, OVERLAP_WITNESSES[10][:-1] + (2,))
    weights = {j: int(np.count_nonzero(z)) for j, z in OVERLAP_WITNESSES.items()}
    assert weights == {7: 9, 8: 11, 9: 11, 10: 11, 11: 11, 12: 11, 13: 11}


def test_overlap_witnesses_found(ternary_code, small_chunks):
    report = find_overlap_witnesses(ternary_code, (1, 0, 0, 0), small_chunks)
    assert report.holds
    assert report.required_overlap == 6
    assert sorted(report.witnesses) == list(range(7, 14))
    c = ternary_code.codeword((1, 0, 0, 0))
    for j, witness in report.witnesses.items():
        assert witness.codeword[j] == 0
        assert len(witness.indices) == 6
        assert is_overlap_witness(c, witness.codeword, j, 3, 4)

