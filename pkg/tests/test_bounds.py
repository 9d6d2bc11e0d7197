from fractions import Fraction

import pytest

from modules.bounds import (FEASIBLE, INFEASIBLE, average_weight_length, bhatia_davis_window,
                            constant_weight_length, d_lower_minimal, d_upper_minimal, delsarte_check,
                            delsarte_min_length, feasibility, griesmer_length, length_bound_comparison,
                            length_lower_bounds, literature_upper, m_table, max_weight_room,
                            min_length_stat, nonconstructive_length, overlap_dominates_griesmer,
                            planar_two_fold_length, popoviciu_check, stat_quadratic, variance_distance_bound)
from modules.errors import PreconditionError

# (q, n, k) excluded by the overlap length bound, by the variance quadratic, or by both
EXCLUDED_BY_BOTH = [(2, 8, 4), (3, 15, 5), (4, 24, 6), (5, 35, 7), (7, 63, 9)]
EXCLUDED_BY_OVERLAP_ONLY = [(2, 17, 7), (3, 31, 9), (4, 44, 10), (4, 99, 21), (5, 65, 12)]
EXCLUDED_BY_VARIANCE_ONLY = [(3, 16, 5), (4, 16, 4), (4, 25, 6), (5, 36, 7), (7, 26, 4)]


def _overlap_excludes(q, n, k):
    return n < (q + 1) * (k - 1)


@pytest.mark.parametrize("q,n,k", EXCLUDED_BY_BOTH)
def test_excluded_by_both(q, n, k):
    assert _overlap_excludes(q, n, k)
    assert stat_quadratic(q, n, k).excludes


@pytest.mark.parametrize("q,n,k", EXCLUDED_BY_OVERLAP_ONLY)
def test_excluded_by_overlap_only(q, n, k):
    assert _overlap_excludes(q, n, k)
    assert not stat_quadratic(q, n, k).excludes


@pytest.mark.parametrize("q,n,k", EXCLUDED_BY_VARIANCE_ONLY)
def test_excluded_by_variance_only(q, n, k):
    assert not _overlap_excludes(q, n, k)
    assert stat_quadratic(q, n, k).excludes


def test_stat_quadratic_values():
    assert stat_quadratic(4, 16, 4).lhs == -42
    quad = stat_quadratic(4, 17, 4)
    assert (quad.B, quad.C, quad.lhs) == (418, 2550, 68)
    assert not quad.excludes
    quad = stat_quadratic(2, 17, 7)
    assert (quad.B, quad.C, quad.lhs) == (857, 5334, 13)
    assert stat_quadratic(4, 25, 6).lhs == -1600
    assert stat_quadratic(2, 8, 4).lhs == -12


def test_constant_weight_escape():
    # the simplex length is never excluded
    assert not stat_quadratic(2, 7, 3).excludes
    assert not stat_quadratic(3, 13, 3).excludes
    assert constant_weight_length(3, 3) == 13


def test_max_weight_room():
    assert max_weight_room(4, 16, 4)
    assert not max_weight_room(2, 6, 4)
    assert stat_quadratic(2, 6, 4).excludes


@pytest.mark.parametrize("q,k,n", [(4, 4, 17), (2, 7, 17), (9, 3, 23), (4, 3, 12), (4, 6, 26)])
def test_min_length_stat(q, k, n):
    assert min_length_stat(q, k) == n
    assert not stat_quadratic(q, n, k).excludes
    assert stat_quadratic(q, n - 1, k).excludes


def test_length_bounds():
    assert griesmer_length(2, 8) == 19
    assert griesmer_length(4, 4) == 15
    assert planar_two_fold_length(4) == 12
    assert planar_two_fold_length(9) == 26
    assert planar_two_fold_length(11) == 31
    names = [v.name for v in length_lower_bounds(4, 4)]
    assert names == ["basic_length", "griesmer_length", "fold_blocking_length", "overlap_length",
                     "overlap_length_strict"]
    by_name = {v.name: v for v in length_lower_bounds(4, 4, n=15)}
    assert by_name["overlap_length"].satisfied
    assert not by_name["overlap_length_strict"].satisfied
    assert all(v.satisfied is None for v in length_lower_bounds(2, 3))
    assert "overlap_length_strict" not in [v.name for v in length_lower_bounds(2, 3)]


def test_overlap_bound_dominates_griesmer():
    assert overlap_dominates_griesmer() == []


def test_distance_bounds():
    assert d_lower_minimal(4, 4) == 10
    assert d_upper_minimal(4, 17, 4) == 10
    assert d_upper_minimal(4, 12, 4) is None


def test_seventeen_four_over_four_has_distance_exactly_ten():
    excluded = feasibility(4, 4, n=17, d=11)
    assert excluded.overall == INFEASIBLE
    assert excluded.witness == ("distance_upper",)
    allowed = feasibility(4, 4, n=17, d=10)
    assert allowed.overall == FEASIBLE
    assert feasibility(4, 4, n=17, d=9).witness == ("distance_lower",)


def test_feasibility_without_length():
    report = feasibility(3, 4)
    assert report.feasible
    assert report.verdict("stat_quadratic") is None
    assert report.verdict("distance_lower").satisfied is None


def test_feasibility_of_short_lengths():
    report = feasibility(4, 4, n=16)
    assert not report.feasible
    assert "stat_quadratic" in report.witness
    assert report.verdict("stat_quadratic").value == -42


def test_feasibility_of_constant_weight_codes():
    report = feasibility(2, 3, n=7, d=4, w=4, s=1)
    assert report.feasible
    assert report.verdict("constant_weight_length").satisfied
    assert report.verdict("variance_distance") is None
    short = feasibility(2, 4, n=10, d=4, w=4)
    assert "constant_weight_length" in short.witness


def test_feasibility_rejects_inconsistent_parameters():
    with pytest.raises(PreconditionError):
        feasibility(4, 4, n=3)
    with pytest.raises(PreconditionError):
        feasibility(4, 4, n=20, d=12, w=10)
    with pytest.raises(PreconditionError):
        feasibility(4, 4, n=20, w=21)
    with pytest.raises(PreconditionError):
        feasibility(6, 4)
    with pytest.raises(PreconditionError):
        feasibility(4, 1)


def test_ternary_example_is_feasible():
    report = feasibility(3, 4, n=14, d=7, w=11, s=5)
    assert report.feasible, report.witness


def test_average_weight_and_max_weight():
    assert average_weight_length(2, 27, 6, 16) == 23
    report = feasibility(2, 6, n=27, d=10, w=23)
    assert "max_weight_bound" in report.witness


def test_variance_distance_bound():
    assert variance_distance_bound(2, 45, 8, 24) == 16
    assert variance_distance_bound(2, 34, 8, 24) == 16
    assert variance_distance_bound(2, 45, 8, 20) is None


def test_bhatia_davis_window():
    assert bhatia_davis_window(2, 8, 16, 24) == (34, 45)
    assert bhatia_davis_window(2, 8, 23, 24) is None
    with pytest.raises(PreconditionError) as info:
        bhatia_davis_window(2, 8, 24, 24)
    assert info.value.constraint == "constant-weight"


def test_popoviciu():
    assert popoviciu_check(2, 7, 3, 4, 4)
    assert not popoviciu_check(2, 6, 3, 4, 4)
    with pytest.raises(PreconditionError):
        popoviciu_check(2, 0, 3, 1, 2)


def test_delsarte():
    assert delsarte_min_length(2, 8, 2) == 23
    assert not delsarte_check(2, 22, 8, 2)
    assert delsarte_check(2, 23, 8, 2)
    assert delsarte_min_length(2, 3, 1) == 7
    with pytest.raises(PreconditionError):
        delsarte_min_length(2, 3, 0)


def test_length_bound_comparison():
    assert length_bound_comparison(4, 4).sharper == "statistical"
    assert length_bound_comparison(2, 7).sharper == "overlap"
    comparison = length_bound_comparison(4, 3)
    assert (comparison.overlap, comparison.statistical) == (10, 12)


def test_literature_upper():
    assert literature_upper(5, 5)[0] == 37
    assert literature_upper(3, 6)[0] == 28
    assert literature_upper(8, 4)[0] == 45
    assert literature_upper(4, 4) == (None, None)


def test_nonconstructive_length_is_positive():
    value = nonconstructive_length(4, 10)
    assert isinstance(value, float) and value > 0


def test_m_table_for_q4():
    rows = m_table(4, 6)
    assert [r.k for r in rows] == [2, 3, 4, 5, 6]
    line, plane, k4, k5, k6 = rows
    assert (line.lower, line.upper, line.exact, line.upper_source) == (5, 5, 5, "line")
    assert (plane.exact, plane.lower_source, plane.upper_source) == (12, "planar_two_fold", "tetrahedron")
    assert (k4.upper, k4.upper_source) == (20, "even-lines")
    assert k4.lower == 17 and k4.lower_source == "stat_quadratic"
    assert (k5.upper, k5.upper_source) == (33, "lift:even-lines")
    assert (k6.lower, k6.lower_source) == (26, "stat_quadratic")
    assert (k6.upper, k6.upper_source) == (45, "even-lines")
    assert k6.literature_upper == 35
    assert all(r.lower <= r.upper for r in rows)


def test_m_table_for_q9():
    plane = m_table(9, 3)[-1]
    assert plane.exact == 26
    assert plane.upper_source == "baer"


def test_m_table_rejects_small_kmax():
    with pytest.raises(PreconditionError):
        m_table(4, 1)


def test_fractions_stay_exact():
    report = feasibility(2, 8, n=40, d=16, w=24)
    verdict = report.verdict("variance_distance")
    assert isinstance(verdict.value, int)
    below = feasibility(2, 8, n=45, d=19, w=20)
    assert isinstance(below.verdict("variance_distance").value, Fraction)
    assert not below.verdict("variance_distance").satisfied
