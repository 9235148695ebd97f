"""Command-line driver: `python -m ordpde {solve,compare,check} <problem-file>`.

Exit codes: 0 success, 2 band/trace or oracle failure, 3 parse/config error,
4 δ-search exhaustion, 5 F not quasilinear (compare only).
"""
from __future__ import annotations

import argparse
import asyncio
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import List, Optional, Tuple

from dotenv import load_dotenv
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from ordpde.app.config.solver_settings import SolverSettings, load_solver_settings
from ordpde.app.core.geometry import SampleGrid
from ordpde.app.dsl import ExprError, to_text
from ordpde.app.export.csv_export import write_decay_csv, write_grid_csv, write_grid_function_csv
from ordpde.app.export.report_text import (
    append_text,
    render_oracle_section,
    render_report,
    summary_payload,
    write_summary_json,
    write_text,
)
from ordpde.app.oracles.characteristics import (
    CharacteristicsBlowUpError,
    NotQuasilinearError,
    characteristics_solve,
    recognize_quasilinear,
)
from ordpde.app.oracles.consistency import consistency_check
from ordpde.app.solver.convergence import (
    ApproxSequence,
    CauchyDiagnostic,
    build_sequence_async,
    cauchy_diagnostic,
    decay_rows,
    residual_ae_verdict,
)
from ordpde.app.utils.cli_utils import apply_log_level_override, create_solver_argument_parser
from ordpde.app.utils.logging_config import init_logging
from ordpde.utils.problem_utils import (
    CompiledProblem,
    ProblemSpec,
    ProblemSpecError,
    compile_problem,
    effective_settings,
    load_problem_spec,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED_CHECK = 2
EXIT_CONFIG = 3
EXIT_EXHAUSTED = 4
EXIT_NOT_QUASILINEAR = 5

console = Console(stderr=True)


class ConfigurationError(ValueError):
    pass


def _load(spec_path: str) -> Tuple[ProblemSpec, CompiledProblem, SolverSettings]:
    try:
        settings = load_solver_settings()
        spec = load_problem_spec(spec_path)
        problem = compile_problem(spec)
        settings = effective_settings(spec, settings)
    except ExprError as exc:
        raise ConfigurationError(f"{spec_path}: {exc}") from exc
    except (ProblemSpecError, ValueError) as exc:
        raise ConfigurationError(str(exc)) from exc
    return spec, problem, settings


def _exit_code_for(seq: ApproxSequence, diagnostic: Optional[CauchyDiagnostic]) -> int:
    if any(f.kind == "evaluation" for f in seq.failures):
        return EXIT_CONFIG
    if any(f.kind == "exhausted" for f in seq.failures):
        return EXIT_EXHAUSTED
    if any(not t.report.band_ok(t.epsilon) or not t.report.trace_ok() for t in seq.terms):
        return EXIT_FAILED_CHECK
    if diagnostic is not None and not diagnostic.passed:
        return EXIT_FAILED_CHECK
    return EXIT_OK


def _summary_table(seq: ApproxSequence) -> Table:
    table = Table(title=f"F = {to_text(seq.problem.F)},  f = {to_text(seq.problem.f)}")
    table.add_column("n", justify="right", style="cyan")
    table.add_column("delta", justify="right")
    table.add_column("tiles", justify="right")
    table.add_column("residual min", justify="right")
    table.add_column("residual max", justify="right")
    table.add_column("trace err", justify="right")
    table.add_column("band")
    rows = {t.n: t for t in seq.terms}
    failures = {f.n: f for f in seq.failures}
    for n in sorted(set(rows) | set(failures)):
        if n in rows:
            t = rows[n]
            ok = t.report.band_ok(t.epsilon)
            table.add_row(
                str(n), f"{t.delta:.4g}", str(len(t.u.tiling.tiles)), f"{t.report.overall_min:.6g}",
                f"{t.report.overall_max:.3g}", f"{t.report.trace_error_max:.2g}",
                "[green]PASS[/green]" if ok else "[red]FAIL[/red]",
            )
        else:
            table.add_row(str(n), "-", "-", "-", "-", "-", f"[red]{failures[n].kind}[/red]")
    return table


def run_solve(args: argparse.Namespace) -> int:
    spec, problem, settings = _load(args.spec)
    if args.grid:
        settings = replace(settings, grid_nx=args.grid[0], grid_ny=args.grid[1])
    if args.svg:
        settings = replace(settings, write_svg=True)
    out_dir = Path(args.out_dir or spec.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    grid = SampleGrid(problem.domain, settings.grid_nx, settings.grid_ny)

    seq = asyncio.run(build_sequence_async(problem, spec.N, settings, grid))

    X, Y = grid.mesh
    for t in seq.terms:
        write_grid_csv(out_dir / f"u_{t.n}.csv", grid, t.u.evaluate_many(X, Y))
        write_grid_function_csv(out_dir / f"residual_{t.n}.csv", t.residual)
        write_text(out_dir / f"tiling_{t.n}.txt", t.u.tiling.to_text())
    diagnostic = cauchy_diagnostic(seq) if len(seq.terms) >= 2 else None
    verdict = residual_ae_verdict(seq) if seq.terms else None
    write_decay_csv(out_dir / "decay.csv", diagnostic.rows if diagnostic else decay_rows(seq.terms))
    write_text(out_dir / "report.txt", render_report(seq, diagnostic, verdict))

    if settings.write_svg and seq.terms:
        from ordpde.app.export.svg_plots import plot_decay, plot_heatmap

        last = seq.terms[-1]
        plot_heatmap(out_dir / f"u_{last.n}.svg", last.u, grid, last.n)
        plot_decay(out_dir / "decay.svg", diagnostic.rows if diagnostic else decay_rows(seq.terms))

    code = _exit_code_for(seq, diagnostic)
    write_summary_json(out_dir / "summary.json", summary_payload(seq, diagnostic, code))
    console.print(_summary_table(seq))
    for f in seq.failures:
        console.print(f"[red]n={f.n}: {escape(f.message)}[/red]")
    logger.info("solve finished with exit code %d; artifacts in %s", code, out_dir)
    return code


def run_compare(args: argparse.Namespace) -> int:
    spec, problem, settings = _load(args.spec)
    try:
        form = recognize_quasilinear(problem.F)
    except NotQuasilinearError as exc:
        console.print(f"[red]{escape(str(exc))}[/red]", soft_wrap=True)
        return EXIT_NOT_QUASILINEAR
    ny = settings.grid_ny + (settings.grid_ny % 2)
    grid = SampleGrid(problem.domain, settings.grid_nx, ny)
    out_dir = Path(args.out_dir or spec.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        result = characteristics_solve(form, problem.f, grid, problem.domain.b)
    except CharacteristicsBlowUpError as exc:
        append_text(out_dir / "report.txt", f"\nOracle: method of characteristics\nerror     {exc}\n")
        console.print(f"[red]{escape(str(exc))}[/red]", soft_wrap=True)
        return EXIT_FAILED_CHECK
    report = consistency_check(result.field, problem, grid, valid=result.valid)
    write_grid_function_csv(out_dir / "oracle_u.csv", result.field)
    append_text(out_dir / "report.txt", render_oracle_section(form, result, report))
    if result.shock:
        console.print(f"[yellow]characteristics cross at y = {result.shock_y:.6g}; later rows were not compared[/yellow]")
    console.print(
        f"oracle residual {report.residual_max_abs:.3g} (tol {report.tolerance:.3g}), "
        f"trace {report.trace_error:.3g}: {'[green]PASS[/green]' if report.passed else '[red]FAIL[/red]'}"
    )
    return EXIT_OK if report.passed else EXIT_FAILED_CHECK


def run_check(args: argparse.Namespace) -> int:
    spec, problem, settings = _load(args.spec)
    console.print(
        f"[green]OK[/green] F = {to_text(problem.F)}, f = {to_text(problem.f)}, f' = {to_text(problem.fprime)}, "
        f"domain a={spec.a:g} b={spec.b:g}, N={spec.N}, grid {settings.grid_nx}x{settings.grid_ny}"
    )
    return EXIT_OK


COMMANDS = {"solve": run_solve, "compare": run_compare, "check": run_check}


def main(argv: Optional[List[str]] = None) -> int:
    parser = create_solver_argument_parser()
    args = parser.parse_args(argv)
    load_dotenv()
    apply_log_level_override(args.log_level)
    init_logging(force=bool(args.log_level))
    try:
        return COMMANDS[args.command](args)
    except ConfigurationError as exc:
        console.print(f"[red]error:[/red] {escape(str(exc))}", highlight=False, soft_wrap=True)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
