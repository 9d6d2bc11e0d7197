"""
Core orchestration of constructions, code analysis and bound evaluation.

The CLI drives everything through CoreProcessor; library modules stay free
of printing and report through the status and progress callbacks.
"""
import threading
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .bounds import (BoundComparison, FeasibilityReport, MTableEntry, bhatia_davis_window, delsarte_min_length,
                     feasibility, length_bound_comparison, m_table)
from .constructions import ConstructionReport, build_named, from_pointset
from .errors import MinimalCodesError, PreconditionError, VerificationError
from .file_formats import MatrixFile, read_pointset
from .linear_code import (LinearCode, is_maximal_codeword, is_minimal_code, is_nondegenerate, is_projective,
                          moment_formula_check, pless_second_moment_check, support, weight_profile)
from .parallel import ScanOptions, resolve_options
from .projgeom import geometric_minimum_distance, pointset_from_code
from .supportpoly import (alon_furedi_bound, build_support_poly, canonical_form, covering_messages,
                          find_overlap_witnesses, nonzero_set, reduce_mod_Iq)

StatusCallback = Callable[[str, str], None]
ProgressCallback = Callable[[str, float], None]

Message = Tuple[int, ...]


def _ints(v) -> List[int]:
    return [int(x) for x in np.asarray(v).reshape(-1)]


class CoreProcessor:
    """Runs constructions, analyses and bound evaluations under one set of scan limits."""

    def __init__(self, options: Optional[ScanOptions] = None,
                 status_callback: Optional[StatusCallback] = None):
        self.options = resolve_options(options)
        self.status_callback = status_callback
        self.analysis_queue: List[Dict] = []
        self.queue_lock = threading.Lock()

    def _status(self, stage: str, message: str):
        if self.status_callback:
            self.status_callback(stage, message)

    # --- constructions ---

    def construct(self, name: str, q: int, k: int) -> ConstructionReport:
        """Build a named construction and check it against every length bound."""
        report = build_named(name, q, k, self.options, self.status_callback)
        self._check_bounds(report)
        return report

    def construct_from_points(self, path: Path) -> ConstructionReport:
        points = read_pointset(path)
        report = from_pointset(points, name=Path(path).stem, options=self.options,
                               status_callback=self.status_callback)
        if report.verified_minimal:
            self._check_bounds(report)
        return report

    def _check_bounds(self, report: ConstructionReport):
        if report.k < 2:
            return
        profile = weight_profile(report.code, self.options)
        verdict = feasibility(report.q, report.k, report.n, profile.d, profile.w_max, profile.s)
        if not verdict.feasible:
            raise VerificationError(f"{report.name}: verified code violates {', '.join(verdict.witness)}")
        self._status("bounds", f"{report.name}: [{report.n},{report.k},{profile.d}]_{report.q} respects all bounds")

    # --- analysis queue ---

    def scan_inputs(self, paths: Sequence[Path]) -> List[Dict]:
        """Queue matrix files for analysis."""
        with self.queue_lock:
            self.analysis_queue = [{"path": Path(p), "status": "Pending"} for p in paths]
            return list(self.analysis_queue)

    def get_queue(self) -> List[Dict]:
        with self.queue_lock:
            return list(self.analysis_queue)

    def update_item_status(self, path: Path, status: str):
        with self.queue_lock:
            for item in self.analysis_queue:
                if item["path"] == path:
                    item["status"] = status
                    break

    def clear_queue(self):
        with self.queue_lock:
            self.analysis_queue.clear()

    def analyze_queue(self, message: Optional[Message] = None, support_poly: bool = False,
                      overlap: bool = False, progress_callback: Optional[ProgressCallback] = None) -> List[Dict]:
        """Analyze every queued file; per-file failures are recorded, not raised."""
        if not self.analysis_queue:
            raise PreconditionError("nothing to analyze", constraint="input")
        results = []
        total = len(self.analysis_queue)
        for i, item in enumerate(self.get_queue()):
            path = item["path"]
            self.update_item_status(path, "Analyzing")
            if progress_callback:
                progress_callback(f"Analyzing {path.name} ({i + 1}/{total})", 100.0 * i / total)
            try:
                source = MatrixFile.read(path)
                code = LinearCode(source.matrix)
                analysis = self.analyze_code(code, message, support_poly, overlap)
                self.update_item_status(path, "Completed")
                results.append({"path": path, "status": "Completed", "results": analysis})
            except MinimalCodesError as e:
                self.update_item_status(path, "Error")
                results.append({"path": path, "status": "Error", "error": str(e), "exception": e})
                self._status(path.name, f"analysis failed: {e}")
        if progress_callback:
            progress_callback("Analysis completed", 100.0)
        return results

    # --- analysis ---

    def default_message(self, code: LinearCode) -> Message:
        """First minimum-weight codeword class (in projective order) that is maximal."""
        total = code.num_classes
        self.options.check_limit("codeword classes", total)
        messages, words = code.class_block(0, total)
        weights = np.count_nonzero(words, axis=1)
        for i in np.argsort(weights, kind="stable"):
            if is_maximal_codeword(code, messages[i], self.options):
                return tuple(_ints(messages[i]))
        raise VerificationError("no maximal codeword found")

    def analyze_code(self, code: LinearCode, message: Optional[Message] = None,
                     support_poly: bool = False, overlap: bool = False) -> Dict:
        """Parameters, minimality, weight statistics and consistency checks of a code."""
        opts = self.options
        self._status("analyze", f"[{code.n},{code.k}]_{code.q}: weight distribution")
        profile = weight_profile(code, opts)
        self._status("analyze", f"[{code.n},{code.k},{profile.d}]_{code.q}: minimality")
        minimality = is_minimal_code(code, opts)
        nondegenerate = is_nondegenerate(code)
        pless = pless_second_moment_check(code, opts)
        checks: Dict[str, bool] = {"pless_identity": pless.holds}

        results: Dict = {
            "n": code.n, "k": code.k, "q": code.q,
            "d": profile.d, "w_max": profile.w_max, "s": profile.s,
            "mean": profile.mean, "variance": profile.variance,
            "weight_distribution": {str(w): c for w, c in sorted(profile.distribution.items())},
            "nondegenerate": nondegenerate,
            "projective": is_projective(code),
            "minimal": minimality.minimal,
            "classes_checked": minimality.classes_checked,
        }
        if not minimality.minimal:
            smaller, larger = minimality.witness
            results["witness"] = {"message": list(minimality.message), "smaller": list(smaller),
                                  "larger": list(larger)}
        results["pless"] = {
            "sum_of_squares": pless.lhs, "identity": pless.rhs,
            "dual_weight_1": pless.w1_dual, "dual_weight_2": pless.w2_dual,
            "projective_bound": pless.projective_bound, "holds": pless.holds,
        }
        if nondegenerate:
            moments = moment_formula_check(code, opts)
            results["moments"] = {
                "ell": moments.ell, "mean_expected": moments.mean_expected,
                "variance_floor": moments.variance_floor, "variance_at_floor": moments.variance_at_floor,
                "consistent": moments.consistent,
            }
            checks["moments"] = moments.consistent
            geometric = geometric_minimum_distance(pointset_from_code(code), opts)
            results["geometric_d"] = geometric
            checks["geometric_distance"] = geometric == profile.d
        if minimality.minimal and code.k >= 2:
            verdict = feasibility(code.q, code.k, code.n, profile.d, profile.w_max, profile.s)
            results["feasibility"] = verdict.overall
            checks["bounds"] = verdict.feasible

        if support_poly or overlap:
            u = tuple(message) if message is not None else self.default_message(code)
            if support_poly:
                results["support_polynomial"] = self._support_polynomial(code, u, checks)
            if overlap:
                results["overlap"] = self._overlap(code, u, checks)

        results["checks"] = checks
        return results

    def _support_polynomial(self, code: LinearCode, u: Message, checks: Dict[str, bool]) -> Dict:
        opts = self.options
        c = code.codeword(u)
        indices = support(c)
        self._status("support-poly", f"codeword {_ints(c)}: support of size {len(indices)}")
        poly = build_support_poly(code.G, indices, options=opts)
        reduced = reduce_mod_Iq(poly)
        nonzero = nonzero_set(reduced, opts)
        covering = covering_messages(code.G, indices, opts)
        bound = alon_furedi_bound(reduced)
        checks["nonzero_set"] = nonzero.shape[0] == covering.shape[0]
        checks["alon_furedi"] = nonzero.shape[0] >= bound
        out = {
            "message": list(u), "codeword": _ints(c), "support": list(indices),
            "degree": poly.degree, "terms": len(poly.terms),
            "reduced": str(reduced), "reduced_degree": reduced.degree,
            "nonzero_count": int(nonzero.shape[0]), "alon_furedi_bound": bound,
            "maximal": is_maximal_codeword(code, u, opts),
        }
        if out["maximal"]:
            form = canonical_form(code, u, opts)
            out["canonical"] = str(form.polynomial)
            out["basis_change"] = form.basis_change.array.tolist()
            out["canonical_agrees"] = form.agrees
            checks["canonical_form"] = form.agrees
        return out

    def _overlap(self, code: LinearCode, u: Message, checks: Dict[str, bool]) -> Dict:
        report = find_overlap_witnesses(code, u, self.options)
        checks["overlap_witnesses"] = report.holds
        return {
            "message": list(u),
            "required_overlap": report.required_overlap,
            "witnesses": [
                {"position": w.position, "message": list(w.message), "codeword": list(w.codeword),
                 "indices": list(w.indices)}
                for _, w in sorted(report.witnesses.items())
            ],
            "violations": list(report.violations),
            "holds": report.holds,
        }

    # --- bounds ---

    def bounds(self, q: int, k: int, n: Optional[int] = None, d: Optional[int] = None,
               w: Optional[int] = None, s: Optional[int] = None) -> Tuple[FeasibilityReport, Dict]:
        """Feasibility verdicts plus the derived length windows the parameters allow."""
        report = feasibility(q, k, n, d, w, s)
        extras: Dict = {}
        if d is not None and w is not None and d < w:
            window = bhatia_davis_window(q, k, d, w)
            extras["n_window"] = list(window) if window else None
            if n is not None and window is not None and not window[0] <= n <= window[1]:
                self._status("bounds", f"n = {n} lies outside the window [{window[0]}, {window[1]}]")
        if s is not None:
            extras["delsarte_min_length"] = delsarte_min_length(q, k, s)
        comparison: BoundComparison = length_bound_comparison(q, k)
        extras["length_comparison"] = {"overlap": comparison.overlap, "statistical": comparison.statistical,
                                       "sharper": comparison.sharper}
        return report, extras

    def mtable(self, q: int, k_max: int) -> List[MTableEntry]:
        return m_table(q, k_max)
