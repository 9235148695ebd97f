"""Finite-difference check that a classical grid solution maps to (0, f) under T₀."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ordpde.app.baire.operators import GridFunction
from ordpde.app.core.geometry import SampleGrid
from ordpde.app.dsl import evaluate
from ordpde.utils.problem_utils import CompiledProblem

logger = logging.getLogger(__name__)

TRACE_TOL = 1e-9
FD_TOL_FACTOR = 10.0


@dataclass(frozen=True)
class ConsistencyReport:
    residual_max_abs: float
    trace_error: float
    tolerance: float
    checked_nodes: int
    residual_ok: bool
    trace_ok: bool

    @property
    def passed(self) -> bool:
        return self.residual_ok and self.trace_ok


def fd_tolerance(grid: SampleGrid) -> float:
    return FD_TOL_FACTOR * (grid.hx + grid.hy)


def consistency_check(
    u_classical: GridFunction,
    problem: CompiledProblem,
    grid: SampleGrid,
    valid: Optional[np.ndarray] = None,
    tol: Optional[float] = None,
) -> ConsistencyReport:
    """Central-difference residual D_y u + F(x, y, u, D_x u) on interior nodes plus the trace error.

    Only nodes whose four neighbours are `valid` enter the residual; pass the oracle's
    validity mask to stay clear of post-shock rows.
    """
    if not u_classical.grid.same_as(grid):
        raise ValueError("classical field and grid differ")
    if grid.ny % 2:
        raise ValueError("consistency_check needs an even ny so that y = 0 is a grid row")
    tol = fd_tolerance(grid) if tol is None else tol
    v = u_classical.values
    ok = np.ones(grid.shape, dtype=bool) if valid is None else np.asarray(valid, dtype=bool)

    inner = np.zeros(grid.shape, dtype=bool)
    inner[1:-1, 1:-1] = ok[1:-1, 1:-1] & ok[2:, 1:-1] & ok[:-2, 1:-1] & ok[1:-1, 2:] & ok[1:-1, :-2]
    X, Y = grid.mesh
    uy = (v[2:, 1:-1] - v[:-2, 1:-1]) / (2.0 * grid.hy)
    ux = (v[1:-1, 2:] - v[1:-1, :-2]) / (2.0 * grid.hx)
    core = (slice(1, -1), slice(1, -1))
    Fv = evaluate(problem.F, {"x": X[core], "y": Y[core], "u": v[core], "p": ux})
    residual = uy + np.broadcast_to(np.asarray(Fv, dtype=float), uy.shape)
    sel = inner[core]
    residual_max = float(np.max(np.abs(residual[sel]))) if sel.any() else 0.0

    j0 = grid.ny // 2
    fx = np.broadcast_to(np.asarray(evaluate(problem.f, {"x": grid.xs}), dtype=float), grid.xs.shape)
    row_ok = ok[j0]
    trace_err = float(np.max(np.abs(v[j0, row_ok] - fx[row_ok]))) if row_ok.any() else np.inf

    report = ConsistencyReport(
        residual_max_abs=residual_max,
        trace_error=trace_err,
        tolerance=tol,
        checked_nodes=int(sel.sum()),
        residual_ok=residual_max <= tol,
        trace_ok=trace_err <= TRACE_TOL,
    )
    logger.info(
        "Consistency: residual %.3g (tol %.3g) over %d nodes, trace error %.3g",
        report.residual_max_abs, tol, report.checked_nodes, report.trace_error,
    )
    return report


__all__ = ["ConsistencyReport", "consistency_check", "fd_tolerance", "TRACE_TOL"]
