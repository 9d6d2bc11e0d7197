import csv
import io
import json
from fractions import Fraction

import numpy as np
import pytest

from modules.bounds import feasibility, m_table
from modules.constructions import tetrahedron
from modules.errors import PreconditionError
from modules.reporting import (MTABLE_COLUMNS, build_report, construction_report, dumps, encode,
                               feasibility_report, meta_path, mtable_csv, mtable_report, summary_lines,
                               write_mtable_csv, write_report)


def test_report_key_order():
    report = build_report("analysis", {"file": "a.mat"}, {"d": 3})
    assert list(report) == ["schema_version", "kind", "params", "results", "citations"]
    assert list(json.loads(dumps(report))) == list(report)
    with pytest.raises(PreconditionError):
        build_report("poster", {}, {})


def test_encode_is_exact():
    encoded = encode({"mean": Fraction(384, 17), "whole": Fraction(4), "flags": np.array([True, False]),
                      3: (np.int64(7), 1.5)})
    assert encoded == {"mean": {"num": 384, "den": 17}, "whole": {"num": 4, "den": 1},
                       "flags": [True, False], "3": [7, 1.5]}
    json.dumps(encoded)


def test_dumps_is_deterministic():
    report = mtable_report(4, 3, m_table(4, 3))
    assert dumps(report) == dumps(mtable_report(4, 3, m_table(4, 3)))
    assert dumps(report).endswith("}\n")


def test_write_report_with_sidecar(tmp_path):
    report = build_report("mtable", {"q": 2, "k_max": 3}, [])
    path = write_report(report, tmp_path / "out" / "m.json", meta=True)
    assert json.loads(path.read_text(encoding="utf-8")) == report
    sidecar = json.loads(meta_path(path).read_text(encoding="utf-8"))
    assert meta_path(path).name == "m.meta.json"
    assert sidecar["report"] == "m.json"
    assert "created" in sidecar and "created" not in report
    plain = write_report(report, tmp_path / "plain.json")
    assert not meta_path(plain).exists()


def test_construction_report():
    report = construction_report(tetrahedron(2, 3), matrix_path="out/tetra.mat")
    results = report["results"]
    assert report["params"] == {"name": "tetrahedron", "q": 2, "k": 3}
    assert (results["n"], results["k"], results["d"], results["w_max"], results["s"]) == (6, 3, 3, 4, 2)
    assert results["verified_minimal"] is True
    assert results["matrix_file"] == "tetra.mat"
    assert summary_lines(report) == ["tetrahedron: [6,3,3]_2 minimal=yes"]


def test_feasibility_report():
    report = feasibility_report(feasibility(4, 4, n=16), {"n_window": None})
    results = report["results"]
    assert results["overall"] == "infeasible"
    assert "stat_quadratic" in results["witness"]
    assert set(report["citations"]) == {v["name"] for v in results["verdicts"]}
    lines = summary_lines(report)
    assert lines[0] == "q=4 k=4 n=16 d=None w=None: infeasible"
    assert any(line.strip().startswith("FAIL stat_quadratic = -42") for line in lines)


def test_feasibility_report_encodes_rationals():
    report = feasibility_report(feasibility(2, 8, n=45, d=19, w=20))
    verdict = next(v for v in report["results"]["verdicts"] if v["name"] == "variance_distance")
    assert verdict["value"] == {"num": 384, "den": 17}
    assert any("384/17" in line for line in summary_lines(report))


def test_mtable_csv(tmp_path):
    rows = m_table(4, 4)
    text = mtable_csv(rows)
    assert text.splitlines()[0] == ",".join(MTABLE_COLUMNS)
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert [r["k"] for r in parsed] == ["2", "3", "4"]
    assert parsed[1]["exact"] == "12"
    assert parsed[2]["exact"] == ""
    assert parsed[2]["upper_source"] == "even-lines"
    path = write_mtable_csv(rows, tmp_path / "m.csv")
    assert path.read_text(encoding="utf-8") == text


def test_mtable_summary():
    lines = summary_lines(mtable_report(4, 3, m_table(4, 3)))
    assert lines[0].split() == ["k", "lower", "upper", "source"]
    assert lines[-1].split() == ["3", "12", "12", "tetrahedron", "(exact)"]
