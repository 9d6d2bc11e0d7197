import numpy as np
import pytest

from modules.constructions import (baer_code, best_known, best_known_plan, build_named, even_lines_code,
                                   expected_length, from_pointset, lift, lift_size_floor, projective_line,
                                   rational_normal_tangent, spread_cutting_set, spread_product,
                                   substitute_blocks, tetrahedron)
from modules.errors import NonSpanningError, PreconditionError
from modules.linalg import Matrix
from modules.linear_code import is_minimal_code, weight_profile
from modules.projgeom import PointSet, is_cutting


def test_projective_line():
    report = projective_line(5)
    assert (report.n, report.k, report.verified_d) == (6, 2, 5)
    assert report.verified_minimal


@pytest.mark.parametrize("q,k,n,d", [(2, 3, 6, 3), (3, 3, 9, 5), (2, 4, 10, 4), (4, 3, 12, 7)])
def test_tetrahedron(q, k, n, d):
    report = tetrahedron(q, k)
    assert report.n == n
    assert report.verified_d == d
    assert report.pointset.is_set
    assert is_minimal_code(report.code).minimal


def test_rational_normal_tangent():
    report = rational_normal_tangent(5, 3)
    assert report.n == 18
    assert report.verified_d >= 5
    with pytest.raises(PreconditionError) as info:
        rational_normal_tangent(4, 3)
    assert info.value.constraint == "characteristic"
    with pytest.raises(PreconditionError) as info:
        rational_normal_tangent(3, 4)
    assert info.value.constraint == "field-size"
    assert "2k-3" in str(info.value)
    with pytest.raises(PreconditionError) as info:
        rational_normal_tangent(5, 5)
    assert info.value.constraint == "field-size"


def test_even_lines():
    report = even_lines_code(2, 4)
    assert (report.n, report.verified_d) == (12, 6)
    assert len(report.blocks) == 4
    with pytest.raises(PreconditionError):
        even_lines_code(2, 5)


def test_spread_cutting_set():
    report = spread_cutting_set(2, 3, 2)
    assert report.n == 4 * 7
    assert report.k == 6
    assert report.name == "spread:3"
    assert expected_length("spread:3", 2, 6) == 28
    assert build_named("spread:2", 2, 4).n == 12
    with pytest.raises(PreconditionError):
        build_named("spread:4", 2, 6)
    with pytest.raises(PreconditionError):
        spread_cutting_set(2, 1, 2)


def test_baer_in_the_plane():
    report = baer_code(4, 3)
    assert report.n == 14
    assert report.verified_d >= 8
    with pytest.raises(PreconditionError):
        baer_code(8, 3)


def test_lift_adds_k_lines_through_an_apex():
    inner = projective_line(2)
    lifted = lift(inner)
    assert lifted.k == 3
    assert lifted.n == lift_size_floor(3, 2, 2) == 6
    assert lifted.verified_d == 3
    assert "lifted from line" in lifted.notes[0]


def test_spread_product_of_lines():
    report = spread_product(2, 2, projective_line(2))
    assert (report.n, report.k) == (12, 4)
    assert report.name == "product:2:line"
    assert is_cutting(report.pointset).cutting


def test_substitute_blocks_requires_spanning_inner(gf2):
    blocks = [Matrix(gf2, [[1, 0, 0], [0, 1, 0]])]
    flat_pair = PointSet(gf2, [[1, 0], [1, 0]])
    with pytest.raises(NonSpanningError):
        substitute_blocks(blocks, flat_pair)


def test_expected_lengths():
    assert expected_length("tetrahedron", 4, 3) == 12
    assert expected_length("even-lines", 4, 6) == 45
    assert expected_length("baer", 9, 3) == 26
    assert expected_length("product:2:line", 2, 4) == 12
    assert expected_length("lift:even-lines", 2, 5) == 17
    assert expected_length("rnt", 7, 4) == 40
    with pytest.raises(PreconditionError):
        expected_length("product:3:line", 2, 4)
    with pytest.raises(PreconditionError) as info:
        expected_length("hexagon", 2, 4)
    assert info.value.constraint == "construction-name"


def test_best_known_plan():
    assert best_known_plan(5, 2) == "line"
    assert best_known_plan(4, 3) == "tetrahedron"
    assert best_known_plan(9, 3) == "baer"
    assert best_known_plan(4, 4) == "even-lines"
    assert best_known_plan(2, 5) == "lift:even-lines"


def test_best_known_builds_the_plan():
    messages = []
    report = best_known(9, 3, status_callback=lambda stage, msg: messages.append(stage))
    assert report.name == "baer"
    assert report.n == 26
    assert messages[0] == "plan"


def test_build_named_dispatch():
    report = build_named("lift:line", 3, 3)
    assert report.name == "lift:line"
    assert report.n == 4 + 2 * 2 + 1
    with pytest.raises(PreconditionError):
        build_named("line", 3, 3)
    with pytest.raises(PreconditionError):
        build_named("product:x:line", 2, 4)


def test_from_pointset_reports_non_cutting_sets(gf2):
    triangle = PointSet(gf2, np.eye(3, dtype=np.int64))
    report = from_pointset(triangle, name="triangle")
    assert not report.verified_minimal
    assert report.verified_d == 1
    assert "(0, 1, 1)" in report.notes[0]
    plane = from_pointset(PointSet.whole_space(gf2, 3))
    assert plane.verified_minimal
    assert plane.verified_d == weight_profile(plane.code).d == 4


@pytest.mark.parametrize("q", [2, 3, 4, pytest.param(5, marks=pytest.mark.slow)])
@pytest.mark.parametrize("k", [3, 4, 5])
def test_tetrahedron_family(q, k):
    report = tetrahedron(q, k)
    assert report.verified_minimal
    assert report.verified_d == (q - 1) * (k - 1) + 1


@pytest.mark.parametrize("q,k", [(2, 4), (2, 6), (3, 4), (4, 4), pytest.param(4, 6, marks=pytest.mark.slow)])
def test_even_lines_family(q, k):
    report = even_lines_code(q, k)
    assert report.n == (q + 1) * k * k // 4
    assert report.verified_minimal
    assert report.verified_d == q * (k - 1)


@pytest.mark.slow
def test_baer_code_in_dimension_six():
    report = baer_code(4, 6)
    assert (report.n, report.k) == (56, 6)
    assert report.verified_minimal
    assert is_minimal_code(report.code).minimal


def test_lift_chain_from_the_binary_line():
    report = projective_line(2)
    sizes = [report.n]
    for _ in range(3):
        report = lift(report)
        assert report.verified_minimal
        assert is_cutting(report.pointset).cutting
        sizes.append(report.n)
    assert sizes == [3, 6, 10, 15]
    assert report.name == "lift:lift:lift:line"
