import numpy as np
import pytest

from modules.core_processor import CoreProcessor
from modules.errors import EnumerationLimitError, FormatError, PreconditionError
from modules.file_formats import MatrixFile, write_pointset
from modules.linear_code import LinearCode, is_maximal_codeword, weight_profile
from modules.parallel import ScanOptions
from modules.projgeom import PointSet


@pytest.fixture
def processor(small_chunks):
    return CoreProcessor(small_chunks)


def test_construct_checks_bounds(small_chunks):
    stages = []
    processor = CoreProcessor(small_chunks, status_callback=lambda stage, msg: stages.append((stage, msg)))
    report = processor.construct("tetrahedron", 3, 3)
    assert (report.n, report.verified_d) == (9, 5)
    assert ("bounds", "tetrahedron: [9,3,5]_3 respects all bounds") in stages
    with pytest.raises(PreconditionError):
        processor.construct("hexagon", 3, 3)


def test_construct_from_points(tmp_path, processor, gf2):
    path = write_pointset(PointSet(gf2, np.eye(3, dtype=np.int64)), tmp_path / "triangle.pts")
    report = processor.construct_from_points(path)
    assert report.name == "triangle"
    assert not report.verified_minimal


def test_analyze_ternary_code(processor, ternary_code):
    results = processor.analyze_code(ternary_code)
    assert (results["n"], results["k"], results["d"], results["w_max"]) == (14, 4, 7, 11)
    assert results["minimal"] and results["projective"]
    assert results["feasibility"] == "feasible-so-far"
    assert results["geometric_d"] == 7
    assert "witness" not in results
    assert all(results["checks"].values()), results["checks"]


def test_support_polynomial_and_overlap(processor, ternary_code):
    results = processor.analyze_code(ternary_code, message=(1, 0, 0, 0), support_poly=True, overlap=True)
    poly = results["support_polynomial"]
    assert poly["support"] == list(range(7, 14))
    assert (poly["nonzero_count"], poly["alon_furedi_bound"]) == (2, 2)
    assert poly["maximal"] and poly["canonical_agrees"]
    overlap = results["overlap"]
    assert overlap["required_overlap"] == 6
    assert [w["position"] for w in overlap["witnesses"]] == list(range(7, 14))
    assert overlap["violations"] == []
    assert results["checks"]["overlap_witnesses"]


def test_default_message_is_a_maximal_codeword(processor, binary_code):
    u = processor.default_message(binary_code)
    assert is_maximal_codeword(binary_code, u)
    weight = int(np.count_nonzero(binary_code.codeword(u)))
    assert weight >= weight_profile(binary_code).d == 10
    results = processor.analyze_code(binary_code, overlap=True)
    assert results["overlap"]["message"] == list(u)
    assert results["overlap"]["holds"]


def test_analyze_reports_non_minimal_codes(processor, gf2):
    results = processor.analyze_code(LinearCode.from_rows(gf2, [[1, 0, 0], [0, 1, 1]]))
    assert not results["minimal"]
    assert results["witness"]["smaller"] == [1, 0, 0]
    assert "feasibility" not in results


def test_analysis_queue(tmp_path, processor, ternary_code):
    good = MatrixFile.from_matrix(ternary_code.G).write(tmp_path / "good.mat")
    bad = tmp_path / "bad.mat"
    bad.write_text("3 1 3 1 2\n1 2", encoding="utf-8")
    queued = processor.scan_inputs([good, bad])
    assert [item["status"] for item in queued] == ["Pending", "Pending"]

    progress = []
    results = processor.analyze_queue(progress_callback=lambda msg, pct: progress.append(pct))
    assert [r["status"] for r in results] == ["Completed", "Error"]
    assert results[0]["results"]["d"] == 7
    assert isinstance(results[1]["exception"], FormatError)
    assert [item["status"] for item in processor.get_queue()] == ["Completed", "Error"]
    assert progress[-1] == 100.0

    processor.clear_queue()
    with pytest.raises(PreconditionError):
        processor.analyze_queue()


def test_bounds_extras(small_chunks):
    messages = []
    processor = CoreProcessor(small_chunks, status_callback=lambda stage, msg: messages.append(msg))
    report, extras = processor.bounds(2, 8, n=50, d=16, w=24, s=2)
    assert extras["n_window"] == [34, 45]
    assert extras["delsarte_min_length"] == 23
    assert extras["length_comparison"]["overlap"] == 21
    assert "n = 50 lies outside the window [34, 45]" in messages
    report, extras = processor.bounds(4, 4, n=16)
    assert not report.feasible
    assert "n_window" not in extras
    assert extras["length_comparison"]["sharper"] == "statistical"


def test_scan_limits_apply(ternary_code):
    processor = CoreProcessor(ScanOptions(max_enum=10))
    with pytest.raises(EnumerationLimitError):
        processor.analyze_code(ternary_code)
