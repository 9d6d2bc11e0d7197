"""
JSON report files and CSV m-tables.

A report is a JSON object with the keys schema_version, kind, params,
results and citations, in that order. Integers are JSON numbers and
rationals are {"num": ..., "den": ...}. Timestamps never enter the report
itself; write_report can add a <report>.meta.json sidecar instead.
"""
import csv
import io
import json
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from config import REPORT_SCHEMA_VERSION
from . import __version__
from .bounds import FeasibilityReport, MTableEntry
from .constructions import ConstructionReport
from .errors import PreconditionError
from .linear_code import weight_profile

KINDS = ("construction", "analysis", "feasibility", "mtable")

MTABLE_COLUMNS = ["q", "k", "lower", "lower_source", "upper", "upper_source", "exact",
                  "literature_upper", "nonconstructive"]

CONSTRUCTION_CITATIONS = {
    "minimality": "a code is minimal iff its projective system is a cutting blocking set",
    "distance": "minimum distance = n minus the largest hyperplane intersection",
    "distance_floor": "minimal codes have d >= (q-1)(k-1) + 1",
}

ANALYSIS_CITATIONS = {
    "minimality": "uG is minimal iff the columns of G outside its support have rank k - 1",
    "pless": "second Pless power moment, with the weight-1 and weight-2 dual counts",
    "moments": "average weight q^(k-1) ell and variance >= q^(k-2) ell (1 - ell), ell = n(q-1)/(q^k-1)",
    "support_polynomial": "nonzero set of the support polynomial = messages covering the support",
    "overlap": "each position of a maximal codeword is avoided by a codeword sharing (q-1)(k-1) positions",
}


def encode(value: Any) -> Any:
    """Convert results into JSON-ready values with exact rationals."""
    if isinstance(value, Fraction):
        return {"num": value.numerator, "den": value.denominator}
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, np.ndarray):
        return encode(value.tolist())
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    return value


def build_report(kind: str, params: Dict, results: Any, citations: Optional[Dict[str, str]] = None) -> Dict:
    if kind not in KINDS:
        raise PreconditionError(f"unknown report kind {kind!r}", constraint="report-kind")
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "kind": kind,
        "params": encode(params),
        "results": encode(results),
        "citations": dict(citations or {}),
    }


def dumps(report: Dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def meta_path(path: Path) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}.meta.json")


def write_report(report: Dict, path: Path, meta: bool = False) -> Path:
    """Write a report; with meta=True also write the timestamp sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(dumps(report))
    if meta:
        sidecar = {
            "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "tool_version": __version__,
            "report": path.name,
        }
        with open(meta_path(path), "w", encoding="utf-8", newline="\n") as f:
            json.dump(sidecar, f, indent=2, ensure_ascii=False)
            f.write("\n")
    return path


# --- payloads ---

def construction_report(report: ConstructionReport, matrix_path: Optional[Path] = None) -> Dict:
    profile = weight_profile(report.code)
    results = {
        "n": report.n,
        "k": report.k,
        "d": report.verified_d,
        "w_max": profile.w_max,
        "s": profile.s,
        "expected_n": report.expected_n,
        "expected_d": report.expected_d,
        "expected_d_exact": report.expected_d_exact,
        "verified_minimal": report.verified_minimal,
        "distinct_points": report.pointset.num_distinct,
        "multiset": not report.pointset.is_set,
        "blocks": len(report.blocks),
        "notes": list(report.notes),
    }
    if matrix_path is not None:
        results["matrix_file"] = Path(matrix_path).name
    return build_report("construction", {"name": report.name, "q": report.q, "k": report.k}, results,
                        CONSTRUCTION_CITATIONS)


def analysis_report(source: Path, results: Dict) -> Dict:
    optional = ("moments", "support_polynomial", "overlap")
    citations = {key: text for key, text in ANALYSIS_CITATIONS.items() if key not in optional or key in results}
    return build_report("analysis", {"file": Path(source).name}, results, citations)


def feasibility_report(report: FeasibilityReport, extras: Optional[Dict] = None) -> Dict:
    results = {
        "overall": report.overall,
        "witness": list(report.witness),
        "verdicts": [
            {"name": v.name, "kind": v.kind, "value": v.value, "satisfied": v.satisfied, "scope": v.scope}
            for v in report.verdicts
        ],
    }
    results.update(extras or {})
    citations = {v.name: v.citation for v in report.verdicts}
    return build_report("feasibility", report.params, results, citations)


def _mtable_row(entry: MTableEntry) -> Dict:
    return {
        "q": entry.q, "k": entry.k,
        "lower": entry.lower, "lower_source": entry.lower_source,
        "upper": entry.upper, "upper_source": entry.upper_source,
        "exact": entry.exact,
        "literature_upper": entry.literature_upper,
        "nonconstructive": None if entry.nonconstructive is None else round(entry.nonconstructive, 6),
    }


def mtable_report(q: int, k_max: int, rows: Sequence[MTableEntry]) -> Dict:
    citations = {
        "lower": "largest applicable length lower bound, including the smallest n passing the variance quadratic",
        "upper": "shortest explicit construction: lines, tetrahedron, spread products, lifts",
        "literature_upper": "constructions from other work, listed for comparison only",
        "nonconstructive": "2k / log_q(q^2/(q^2-q+1)), not backed by a construction",
    }
    sources = sorted({e.literature_source for e in rows if e.literature_source})
    if sources:
        citations["literature_sources"] = "; ".join(sources)
    return build_report("mtable", {"q": q, "k_max": k_max}, [_mtable_row(e) for e in rows], citations)


def mtable_csv(rows: Sequence[MTableEntry]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=MTABLE_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for entry in rows:
        row = _mtable_row(entry)
        writer.writerow({key: "" if row[key] is None else row[key] for key in MTABLE_COLUMNS})
    return buffer.getvalue()


def write_mtable_csv(rows: Sequence[MTableEntry], path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(mtable_csv(rows))
    return path


def summary_lines(report: Dict) -> List[str]:
    """Short human-readable summary of a report."""
    kind, params, results = report["kind"], report["params"], report["results"]
    if kind == "construction":
        r = results
        return [f"{params['name']}: [{r['n']},{r['k']},{r['d']}]_{params['q']} "
                f"minimal={'yes' if r['verified_minimal'] else 'no'}"]
    if kind == "analysis":
        r = results
        lines = [f"{params['file']}: [{r['n']},{r['k']},{r['d']}]_{r['q']} w_max={r['w_max']} s={r['s']} "
                 f"minimal={'yes' if r['minimal'] else 'no'}"]
        if "witness" in r:
            lines.append(f"  witness: {r['witness']['smaller']} inside {r['witness']['larger']}")
        return lines
    if kind == "feasibility":
        lines = [f"q={params['q']} k={params['k']} n={params['n']} d={params['d']} w={params['w']}: "
                 f"{results['overall']}"]
        for v in results["verdicts"]:
            mark = {True: "ok", False: "FAIL", None: "--"}[v["satisfied"]]
            value = v["value"]
            if isinstance(value, dict):
                value = f"{value['num']}/{value['den']}"
            lines.append(f"  {mark:4} {v['name']} = {value}")
        if results.get("n_window") is not None:
            lo, hi = results["n_window"]
            lines.append(f"  n window [{lo}, {hi}]")
        return lines
    lines = [f"{'k':>3} {'lower':>7} {'upper':>7}  source"]
    for row in results:
        lines.append(f"{row['k']:>3} {row['lower']:>7} {row['upper']:>7}  {row['upper_source']}"
                     + ("  (exact)" if row["exact"] is not None else ""))
    return lines
