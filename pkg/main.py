"""
Command-line tool for minimal linear codes and cutting blocking sets.

Exit codes: 0 success, 1 usage or precondition error, 2 failed internal
verification, 3 infeasible parameters (bounds).
"""
import sys
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import click
from tqdm import tqdm

from config import MATRIX_FILE_SUFFIX, REPORT_FILE_SUFFIX
from modules.core_processor import CoreProcessor
from modules.errors import MinimalCodesError, PreconditionError, VerificationError
from modules.file_formats import MatrixFile, write_pointset
from modules.gf import prime_power
from modules.reporting import (analysis_report, construction_report, dumps, feasibility_report, mtable_csv,
                               mtable_report, summary_lines, write_mtable_csv, write_report)
from modules.settings_manager import SettingsManager

EXIT_OK = 0
EXIT_PRECONDITION = 1
EXIT_VERIFICATION = 2
EXIT_INFEASIBLE = 3


def exit_code_for(error: Exception) -> int:
    if isinstance(error, VerificationError):
        return EXIT_VERIFICATION
    return EXIT_PRECONDITION


def error_message(error: Exception) -> str:
    if isinstance(error, PreconditionError) and error.constraint:
        return f"{error} (constraint: {error.constraint})"
    if isinstance(error, ZeroDivisionError):
        return "division by zero in the field (constraint: nonzero)"
    return str(error)


class ProgressReporter:
    """tqdm bar for long scans and status lines on stderr."""

    def __init__(self, quiet: bool = False):
        self.quiet = quiet
        self.bar: Optional[tqdm] = None
        self.label: Optional[str] = None

    def progress(self, label: str, percent: float):
        if self.quiet:
            return
        if self.bar is None or label != self.label:
            self.close()
            self.bar = tqdm(total=100, desc=label, file=sys.stderr, leave=False,
                            bar_format="{desc}: {percentage:3.0f}%|{bar}|")
            self.label = label
        self.bar.n = min(100.0, percent)
        self.bar.refresh()
        if percent >= 100:
            self.close()

    def status(self, stage: str, message: str):
        if not self.quiet:
            self.close()
            click.echo(f"  {stage}: {message}", err=True)

    def ok(self, message: str):
        if not self.quiet:
            click.echo(f"[OK] {message}", err=True)

    def warn(self, message: str):
        click.echo(f"! {message}", err=True)

    def error(self, message: str):
        self.close()
        click.echo(f"[ERROR] {message}", err=True)

    def close(self):
        if self.bar is not None:
            self.bar.close()
            self.bar = None
            self.label = None


class CodesGroup(click.Group):
    """Click group whose usage errors exit with code 1."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            rv = super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
        except click.UsageError as e:
            e.show()
            rv = EXIT_PRECONDITION
        except click.ClickException as e:
            e.show()
            rv = EXIT_PRECONDITION
        except click.Abort:
            click.echo("Aborted!", err=True)
            rv = EXIT_PRECONDITION
        code = rv if isinstance(rv, int) else EXIT_OK
        if not standalone_mode:
            return code
        sys.exit(code)


def _state(ctx: click.Context) -> Dict:
    return ctx.obj


def _processor(ctx: click.Context) -> CoreProcessor:
    state = _state(ctx)
    reporter: ProgressReporter = state["reporter"]
    options = state["settings"].scan_options(state["max_enum"], state["threads"], reporter.progress)
    return CoreProcessor(options, reporter.status)


def _fail(ctx: click.Context, error: Exception):
    _state(ctx)["reporter"].error(error_message(error))
    ctx.exit(exit_code_for(error))


def _check_field_order(ctx: click.Context, q: int):
    prime_power(q)
    limit = int(_state(ctx)["settings"].get("limits.max_field_order"))
    if q > limit:
        raise PreconditionError(f"field order {q} exceeds the configured limit {limit}", constraint="field-order")


def _emit(ctx: click.Context, report: Dict):
    """JSON on stdout with --json, a readable summary otherwise."""
    if _state(ctx)["json"]:
        click.echo(dumps(report), nl=False)
    else:
        for line in summary_lines(report):
            click.echo(line)


def _save(ctx: click.Context, report: Dict, path: Path) -> Path:
    state = _state(ctx)
    written = write_report(report, path, meta=state["meta"])
    state["settings"].add_recent_output(str(written))
    state["reporter"].ok(f"report written to {written}")
    return written


def _parse_message(value: Optional[str]) -> Optional[Tuple[int, ...]]:
    if value is None:
        return None
    try:
        return tuple(int(part) for part in value.split(","))
    except ValueError:
        raise click.BadParameter(f"{value!r} is not a comma-separated list of integers", param_hint="--message")


@click.group(cls=CodesGroup)
@click.option('--json', 'as_json', is_flag=True, help='Print machine-readable JSON on stdout')
@click.option('--threads', type=int, default=None, help='Worker threads for exhaustive scans (default: all cores)')
@click.option('--max-enum', type=int, default=None, help='Refuse scans larger than this many classes or flats')
@click.option('--quiet', '-q', is_flag=True, help='No progress bars or status lines')
@click.option('--meta', is_flag=True, help='Write a timestamp sidecar next to every report')
@click.pass_context
def cli(ctx, as_json, threads, max_enum, quiet, meta):
    """Minimal linear codes and cutting blocking sets over finite fields."""
    settings = SettingsManager()
    reporter = ProgressReporter(quiet)
    if settings.last_error:
        reporter.warn(settings.last_error)
    ctx.obj = {
        "settings": settings,
        "json": as_json or bool(settings.get("output.json")),
        "threads": threads,
        "max_enum": max_enum,
        "quiet": quiet,
        "meta": meta,
        "reporter": reporter,
    }


@cli.command()
@click.argument('name', required=False)
@click.option('--q', 'q', type=int, help='Field order')
@click.option('--k', 'k', type=int, help='Code dimension')
@click.option('--points', 'points_file', type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help='Check a point set file (PG N q) instead of building a named construction')
@click.option('--out', type=click.Path(dir_okay=False, path_type=Path), help='Generator matrix output file')
@click.option('--points-out', type=click.Path(dir_okay=False, path_type=Path), help='Also write the point set')
@click.pass_context
def construct(ctx, name, q, k, points_file, out, points_out):
    """Build and verify a construction: line, tetrahedron, rnt, even-lines, spread:<r>, baer, best, lift:<inner>, product:<a>:<inner>."""
    state = _state(ctx)
    if points_file is None and (name is None or q is None or k is None):
        raise click.UsageError("give a construction NAME with --q and --k, or --points FILE")
    if points_file is not None and name is not None:
        raise click.UsageError("NAME and --points are mutually exclusive")
    processor = _processor(ctx)
    try:
        if points_file is not None:
            report = processor.construct_from_points(points_file)
        else:
            _check_field_order(ctx, q)
            report = processor.construct(name, q, k)
    except (MinimalCodesError, ZeroDivisionError) as e:
        _fail(ctx, e)
    finally:
        state["reporter"].close()

    stem = report.name.replace(":", "-") if points_file else f"{report.name.replace(':', '-')}_q{report.q}_k{report.k}"
    matrix_path = out or Path(state["settings"].get("output.directory")) / f"{stem}{MATRIX_FILE_SUFFIX}"
    MatrixFile.from_matrix(report.code.G).write(matrix_path)
    state["reporter"].ok(f"generator matrix written to {matrix_path}")
    if points_out:
        write_pointset(report.pointset, points_out)
        state["reporter"].ok(f"point set written to {points_out}")
    payload = construction_report(report, matrix_path)
    _save(ctx, payload, matrix_path.with_suffix(REPORT_FILE_SUFFIX))
    _emit(ctx, payload)
    if not report.verified_minimal:
        state["reporter"].error(f"{report.name} is not a cutting blocking set: {'; '.join(report.notes)}")
        ctx.exit(EXIT_VERIFICATION)


@cli.command()
@click.argument('files', nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option('--message', help='Message u (comma-separated) selecting the codeword uG for --support-poly/--overlap')
@click.option('--support-poly', is_flag=True, help='Support polynomial, its reduction and canonical form')
@click.option('--overlap', is_flag=True, help='Overlap witnesses for every support position of a maximal codeword')
@click.option('--out-dir', type=click.Path(file_okay=False, path_type=Path), help='Write one JSON report per file')
@click.pass_context
def analyze(ctx, files, message, support_poly, overlap, out_dir):
    """Analyze generator matrix files: parameters, minimality, weight statistics and checks."""
    state = _state(ctx)
    reporter: ProgressReporter = state["reporter"]
    u = _parse_message(message)
    processor = _processor(ctx)
    processor.scan_inputs(list(files))
    try:
        items = processor.analyze_queue(u, support_poly, overlap, progress_callback=reporter.progress)
    finally:
        reporter.close()

    code = EXIT_OK
    reports: List[Dict] = []
    for item in items:
        path = item["path"]
        if item["status"] != "Completed":
            reporter.error(f"{path.name}: {error_message(item['exception'])}")
            code = max(code, exit_code_for(item["exception"]))
            continue
        results = item["results"]
        payload = analysis_report(path, results)
        reports.append(payload)
        failed = [name for name, ok in results["checks"].items() if not ok]
        if failed:
            reporter.error(f"{path.name}: consistency checks failed: {', '.join(failed)}")
            code = max(code, EXIT_VERIFICATION)
        else:
            reporter.ok(f"{path.name}: all consistency checks passed")
        if out_dir:
            _save(ctx, payload, Path(out_dir) / f"{path.stem}_analysis{REPORT_FILE_SUFFIX}")

    if state["json"]:
        if len(files) == 1 and reports:
            click.echo(dumps(reports[0]), nl=False)
        elif reports:
            click.echo(dumps(reports).rstrip("\n") + "\n", nl=False)
    else:
        for payload in reports:
            for line in summary_lines(payload):
                click.echo(line)
    if code:
        ctx.exit(code)


@cli.command()
@click.option('--q', 'q', type=int, required=True, help='Field order')
@click.option('--k', 'k', type=int, required=True, help='Code dimension')
@click.option('--n', 'n', type=int, default=None, help='Code length')
@click.option('--d', 'd', type=int, default=None, help='Minimum distance')
@click.option('--w', 'w', type=int, default=None, help='Maximum weight')
@click.option('--s', 's', type=int, default=None, help='Number of distinct nonzero weights')
@click.option('--out', type=click.Path(dir_okay=False, path_type=Path), help='Write the JSON report')
@click.pass_context
def bounds(ctx, q, k, n, d, w, s, out):
    """Evaluate every bound for (q, k[, n, d, w, s]); exit 3 when the parameters are infeasible."""
    state = _state(ctx)
    processor = _processor(ctx)
    try:
        _check_field_order(ctx, q)
        report, extras = processor.bounds(q, k, n, d, w, s)
    except MinimalCodesError as e:
        _fail(ctx, e)
    payload = feasibility_report(report, extras)
    if out:
        _save(ctx, payload, out)
    _emit(ctx, payload)
    if not report.feasible:
        state["reporter"].error(f"infeasible: {', '.join(report.witness)}")
        ctx.exit(EXIT_INFEASIBLE)
    state["reporter"].ok("no bound excludes these parameters")


@cli.command()
@click.option('--q', 'q', type=int, required=True, help='Field order')
@click.option('--kmax', 'k_max', type=int, required=True, help='Largest dimension in the table')
@click.option('--csv', 'as_csv', is_flag=True, help='Print CSV on stdout')
@click.option('--out', type=click.Path(dir_okay=False, path_type=Path), help='Write the table (.csv or .json)')
@click.pass_context
def mtable(ctx, q, k_max, as_csv, out):
    """Best known interval for m(k, q), the shortest minimal code of dimension k."""
    state = _state(ctx)
    processor = _processor(ctx)
    try:
        _check_field_order(ctx, q)
        rows = processor.mtable(q, k_max)
    except MinimalCodesError as e:
        _fail(ctx, e)
    payload = mtable_report(q, k_max, rows)
    if out:
        if out.suffix.lower() == ".csv":
            write_mtable_csv(rows, out)
            state["settings"].add_recent_output(str(out))
            state["reporter"].ok(f"table written to {out}")
        else:
            _save(ctx, payload, out)
    if as_csv:
        click.echo(mtable_csv(rows), nl=False)
    else:
        _emit(ctx, payload)


@cli.group()
def settings():
    """Show or change persisted settings."""


@settings.command('show')
@click.option('--recent', is_flag=True, help='List the most recently written reports, newest first')
@click.pass_context
def settings_show(ctx, recent):
    manager: SettingsManager = _state(ctx)["settings"]
    if recent:
        for path in manager.get_recent_outputs():
            click.echo(path)
        return
    click.echo(dumps(manager.settings), nl=False)


@settings.command('set')
@click.argument('key')
@click.argument('value')
@click.pass_context
def settings_set(ctx, key, value):
    manager: SettingsManager = _state(ctx)["settings"]
    reporter: ProgressReporter = _state(ctx)["reporter"]
    try:
        saved = manager.set(key, value)
    except (KeyError, ValueError) as e:
        reporter.error(str(e.args[0]))
        ctx.exit(EXIT_PRECONDITION)
    if not saved:
        reporter.error(manager.last_error or "could not save settings")
        ctx.exit(EXIT_PRECONDITION)
    reporter.ok(f"{key} = {manager.get(key)!r}")


@settings.command('reset')
@click.pass_context
def settings_reset(ctx):
    manager: SettingsManager = _state(ctx)["settings"]
    if not manager.reset_to_defaults():
        _state(ctx)["reporter"].error(manager.last_error or "could not save settings")
        ctx.exit(EXIT_PRECONDITION)
    _state(ctx)["reporter"].ok("settings reset to defaults")


if __name__ == "__main__":
    cli()
