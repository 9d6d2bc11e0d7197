from fractions import Fraction

import numpy as np
import pytest

from modules.errors import EnumerationLimitError, PreconditionError
from modules.gf import field_for_order
from modules.linalg import Matrix, rank
from modules.linear_code import (LinearCode, is_maximal_codeword, is_minimal_code, is_minimal_code_bruteforce,
                                 is_minimal_codeword, is_nondegenerate, is_projective, moment_formula_check,
                                 pless_second_moment_check, support, weight, weight_profile)
from modules.parallel import ScanOptions
from modules.projgeom import is_cutting, pointset_from_code

SIMPLEX_7_3 = [
    [0, 0, 0, 1, 1, 1, 1],
    [0, 1, 1, 0, 0, 1, 1],
    [1, 0, 1, 0, 1, 0, 1],
]

RANDOM_SHAPES = [(2, 3, 6), (2, 4, 8), (2, 5, 9), (3, 3, 6), (3, 4, 8), (4, 2, 5), (4, 3, 6), (5, 3, 7)]


def _random_code(field, k, n, rng):
    while True:
        G = Matrix(field, rng.integers(0, field.q, size=(k, n)))
        if rank(G) == k:
            return LinearCode(G)


def test_support_and_weight():
    assert support([0, 2, 0, 1]) == (1, 3)
    assert weight(np.array([0, 2, 0, 1])) == 2


def test_code_needs_full_rank(gf3):
    with pytest.raises(PreconditionError) as info:
        LinearCode.from_rows(gf3, [[1, 2, 0], [2, 1, 0]])
    assert info.value.constraint == "full-rank"


def test_simplex_is_constant_weight(gf2):
    code = LinearCode.from_rows(gf2, SIMPLEX_7_3)
    profile = weight_profile(code)
    assert profile.distribution == {0: 1, 4: 7}
    assert profile.is_constant_weight and profile.s == 1
    assert profile.mean == 4 and profile.variance == 0
    assert is_minimal_code(code).minimal
    assert is_projective(code)


def test_ternary_example_parameters(ternary_code, small_chunks):
    profile = weight_profile(ternary_code, small_chunks)
    assert (ternary_code.n, ternary_code.k, ternary_code.q) == (14, 4, 3)
    assert profile.d == 7
    assert profile.w_max == 11
    assert sum(profile.distribution.values()) == 81
    result = is_minimal_code(ternary_code, small_chunks)
    assert result.minimal and result.classes_checked == 40
    assert is_minimal_codeword(ternary_code, (1, 0, 0, 0))
    assert is_maximal_codeword(ternary_code, (1, 0, 0, 0), small_chunks)


def test_binary_example_parameters(binary_code):
    profile = weight_profile(binary_code)
    assert (binary_code.n, binary_code.k) == (27, 6)
    assert profile.d == 10
    assert is_minimal_code(binary_code).minimal
    assert is_minimal_code_bruteforce(binary_code)


def test_non_minimal_witness(gf2):
    code = LinearCode.from_rows(gf2, [[1, 0, 0], [0, 1, 1]])
    result = is_minimal_code(code)
    assert not result
    assert result.message == (1, 1)
    assert result.classes_checked == 3
    smaller, larger = result.witness
    assert larger == (1, 1, 1)
    assert smaller == (1, 0, 0)
    assert set(support(smaller)) < set(support(larger))
    assert not is_minimal_codeword(code, (1, 1))
    assert not is_minimal_code_bruteforce(code)


def test_zero_message_is_refused(ternary_code):
    with pytest.raises(PreconditionError) as info:
        is_minimal_codeword(ternary_code, (0, 0, 0, 0))
    assert info.value.constraint == "nonzero"


@pytest.mark.parametrize("q,k,n", RANDOM_SHAPES)
def test_rank_criterion_matches_definition(q, k, n, rng):
    field = field_for_order(q)
    options = ScanOptions(threads=3, chunk_size=5)
    for _ in range(25):
        code = _random_code(field, k, n, rng)
        minimal = is_minimal_code(code, options).minimal
        assert minimal == is_minimal_code_bruteforce(code)
        assert pless_second_moment_check(code, options).holds
        if is_nondegenerate(code):
            assert is_cutting(pointset_from_code(code), options=options).cutting == minimal


def test_enumeration_limit(binary_code):
    with pytest.raises(EnumerationLimitError) as info:
        weight_profile(binary_code, ScanOptions(max_enum=10))
    assert info.value.count == 63 and info.value.limit == 10


def test_pless_identity(ternary_code, binary_code, gf3):
    for code in (ternary_code, binary_code):
        check = pless_second_moment_check(code)
        assert check.holds
        assert check.margin >= 0
    degenerate = LinearCode.from_rows(gf3, [[1, 0, 1, 0, 1], [0, 1, 1, 0, 1]])
    check = pless_second_moment_check(degenerate)
    assert check.w1_dual == 2
    assert check.holds


def test_moment_formulas(ternary_code, gf2):
    check = moment_formula_check(ternary_code)
    assert check.ell == Fraction(28, 80)
    assert check.mean_matches and check.variance_at_floor
    assert check.consistent
    repeated = LinearCode.from_rows(gf2, [[1, 1, 0, 1], [0, 0, 1, 1]])
    assert is_nondegenerate(repeated) and not is_projective(repeated)
    check = moment_formula_check(repeated)
    assert check.mean_matches and not check.variance_at_floor and check.consistent
    with pytest.raises(PreconditionError):
        moment_formula_check(LinearCode.from_rows(gf2, [[1, 0, 0], [0, 1, 0]]))


@pytest.mark.parametrize("q,k,n", RANDOM_SHAPES[:4])
def test_moment_formulas_on_random_codes(q, k, n, rng):
    field = field_for_order(q)
    checked = 0
    while checked < 25:
        code = _random_code(field, k, n, rng)
        if not is_nondegenerate(code):
            continue
        check = moment_formula_check(code)
        assert check.mean_matches
        assert check.variance_at_floor == check.projective
        checked += 1
