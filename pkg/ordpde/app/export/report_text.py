"""Plain-text and JSON run summaries (report.txt, summary.json)."""
from __future__ import annotations

from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import orjson

from ordpde.app.dsl import to_text
from ordpde.app.oracles.characteristics import CharacteristicsResult, QuasilinearForm
from ordpde.app.oracles.consistency import ConsistencyReport
from ordpde.app.solver.convergence import AEVerdict, ApproxSequence, CauchyDiagnostic


def _status(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def band_lines(seq: ApproxSequence) -> List[str]:
    lines = []
    for t in seq.terms:
        r = t.report
        lines.append(
            f"n={t.n:<3d} band -eps_n < residual <= 0  eps_n={t.epsilon:.6g}  "
            f"residual=[{r.overall_min:.12g}, {r.overall_max:.12g}]  {_status(r.band_ok(t.epsilon))}"
        )
    for fail in seq.failures:
        lines.append(f"n={fail.n:<3d} band -eps_n < residual <= 0  eps_n={fail.epsilon:.6g}  FAIL ({fail.kind}: {fail.message})")
    return sorted(lines, key=lambda s: int(s.split()[0][2:]))


def render_report(
    seq: ApproxSequence,
    diagnostic: Optional[CauchyDiagnostic] = None,
    verdict: Optional[AEVerdict] = None,
) -> str:
    p = seq.problem
    out = [
        "ordpde report",
        f"problem   D_y u + F(x,y,u,D_x u) = 0,  F = {to_text(p.F)}",
        f"initial   u(x,0) = f(x) = {to_text(p.f)},  f'(x) = {to_text(p.fprime)}",
        f"domain    (-{p.domain.a:g},{p.domain.a:g}) x (-{p.domain.b:g},{p.domain.b:g})",
        f"grid      {seq.grid.nx} x {seq.grid.ny}",
        "",
        "Residual band per term",
    ]
    out.extend(band_lines(seq))
    out.append("")
    out.append("Decay table (n, epsilon, delta, sup_residual, min_residual, trace_error, gamma_fraction)")
    for t in seq.terms:
        r = t.report
        out.append(
            f"{t.n}\t{t.epsilon:.6g}\t{t.delta:.6g}\t{r.sup_residual:.6g}\t{r.overall_min:.6g}\t"
            f"{r.trace_error_max:.3g}\t{r.gamma_node_fraction:.4f}"
        )
    if diagnostic is not None:
        out.append("")
        out.append(
            f"Cauchy diagnostic: band {_status(diagnostic.band_ok)}, trace {_status(diagnostic.trace_ok)}, "
            f"decay {_status(diagnostic.decay_ok)}"
        )
        out.extend(f"  - {msg}" for msg in diagnostic.failures)
    if verdict is not None:
        out.append(
            f"a.e. convergence of residuals to 0: {_status(verdict.converges)} "
            f"(exceptional fraction {verdict.exceptional_fraction:.4f} <= {verdict.null_fraction_bound:.4f})"
        )
    out.append("")
    out.append("Representative u_N is labelled as such; the sequence, not a pointwise limit, is the solution.")
    return "\n".join(out) + "\n"


def render_oracle_section(
    form: QuasilinearForm, result: CharacteristicsResult, report: Optional[ConsistencyReport]
) -> str:
    out = ["", "Oracle: method of characteristics", f"form      {form.describe()}", f"y_max     {result.y_max:g}"]
    if result.shock:
        out.append(f"shock     characteristics cross at y = {result.shock_y:.6g}; rows at and beyond it are not compared")
    else:
        out.append("shock     none within the strip")
    if report is not None:
        out.append(
            f"residual  max |D_y u + F| = {report.residual_max_abs:.6g} over {report.checked_nodes} nodes "
            f"(tol {report.tolerance:.3g})  {_status(report.residual_ok)}"
        )
        out.append(f"trace     max |u(x,0) - f(x)| = {report.trace_error:.3g}  {_status(report.trace_ok)}")
        out.append(f"verdict   {_status(report.passed)}")
    return "\n".join(out) + "\n"


def summary_payload(seq: ApproxSequence, diagnostic: Optional[CauchyDiagnostic], exit_code: int) -> Dict[str, Any]:
    return {
        "F": to_text(seq.problem.F),
        "f": to_text(seq.problem.f),
        "a": seq.problem.domain.a,
        "b": seq.problem.domain.b,
        "grid": [seq.grid.nx, seq.grid.ny],
        "terms": [
            {
                "n": t.n,
                "epsilon": t.epsilon,
                "delta": t.delta,
                "tiles": len(t.u.tiling.tiles),
                "halvings": t.halvings,
                "residual_min": t.report.overall_min,
                "residual_max": t.report.overall_max,
                "sup_residual": t.report.sup_residual,
                "trace_error": t.report.trace_error_max,
                "gamma_fraction": t.report.gamma_node_fraction,
                "band_ok": t.report.band_ok(t.epsilon),
            }
            for t in seq.terms
        ],
        "failures": [{"n": f.n, "kind": f.kind, "message": f.message} for f in seq.failures],
        "cauchy_passed": None if diagnostic is None else diagnostic.passed,
        "exit_code": exit_code,
    }


def write_text(path: Union[str, Path], text: str) -> Path:
    p = Path(path)
    p.write_text(text, encoding="utf-8")
    return p


def append_text(path: Union[str, Path], text: str) -> Path:
    p = Path(path)
    with p.open("a", encoding="utf-8") as fh:
        fh.write(text)
    return p


def write_summary_json(path: Union[str, Path], payload: Dict[str, Any]) -> Path:
    p = Path(path)
    p.write_bytes(orjson.dumps(payload, option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS))
    return p


__all__ = [
    "band_lines",
    "render_report",
    "render_oracle_section",
    "summary_payload",
    "write_text",
    "append_text",
    "write_summary_json",
]
