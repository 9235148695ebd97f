"""The ε_n = 1/n approximating sequence and its convergence diagnostics.

Terms are built concurrently (one worker thread per term, capped by a semaphore) and
joined in n order. Each term runs a global δ-search: halve δ until every tile
certifies and the assembled u_n keeps its residual in the band on the evaluation grid.
"""
from __future__ import annotations

import asyncio
import logging
import time
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

import numpy as np
import orjson

from ordpde.app.baire.operators import GridFunction
from ordpde.app.config.solver_settings import SolverSettings
from ordpde.app.core.geometry import SampleGrid, gamma_proximity_mask
from ordpde.app.core.tiled_function import TiledFunction
from ordpde.app.dsl import ExprEvaluationError, to_text
from ordpde.app.tiling.fiad import Tiling, build_fiad_tiling, tile_counts
from ordpde.utils.problem_utils import CompiledProblem

from .assembly import ResidualReport, assemble, build_report, regularized_residual
from .local_approx import CalibrationError, calibrate_tiling

logger = logging.getLogger(__name__)

AE_TOLERANCE = 1e-9
NULL_SET_PERIMETER_FACTOR = 5


class GridMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class SequenceTerm:
    n: int
    epsilon: float
    delta: float
    u: TiledFunction
    report: ResidualReport
    residual: GridFunction
    halvings: int


@dataclass(frozen=True)
class TermFailure:
    n: int
    epsilon: float
    kind: str  # exhausted | evaluation
    message: str
    halvings: int
    last_delta: float


@dataclass(frozen=True)
class ApproxSequence:
    problem: CompiledProblem
    grid: SampleGrid
    terms: Tuple[SequenceTerm, ...]
    failures: Tuple[TermFailure, ...] = ()

    def __post_init__(self) -> None:
        eps = [t.epsilon for t in self.terms]
        if any(b >= a for a, b in zip(eps, eps[1:])):
            raise ValueError("sequence epsilons must be strictly decreasing")

    @property
    def complete(self) -> bool:
        return not self.failures

    @property
    def last(self) -> Optional[SequenceTerm]:
        return self.terms[-1] if self.terms else None


# -------------------- Construction --------------------
def _log_event(event: str, **fields: Any) -> None:
    payload: Dict[str, Any] = {"event": event, **fields}
    logger.info(orjson.dumps(payload, option=orjson.OPT_SERIALIZE_NUMPY).decode())


def report_grid(problem: CompiledProblem, settings: SolverSettings) -> SampleGrid:
    return SampleGrid(problem.domain, settings.grid_nx, settings.grid_ny)


def build_term(problem: CompiledProblem, n: int, settings: SolverSettings, grid: SampleGrid) -> Union[SequenceTerm, TermFailure]:
    """Search δ for ε = 1/n, assemble u_n and attach its report."""
    eps = 1.0 / n
    delta0 = settings.starting_delta(problem.domain.a, problem.domain.b)
    delta = delta0
    start = time.perf_counter()
    for halvings in range(settings.max_halvings + 1):
        delta = delta0 / (2**halvings)
        n_cols, n_rows = tile_counts(problem.domain, delta)
        if n_cols * n_rows > settings.max_tiles:
            msg = f"tiling for delta={delta:g} needs {n_cols * n_rows} tiles (cap {settings.max_tiles})"
            _log_event("term_exhausted", n=n, delta=delta, halvings=halvings, reason="max_tiles")
            return TermFailure(n, eps, "exhausted", msg, halvings, delta)
        if grid.hx >= 2.0 * problem.domain.a / n_cols or grid.hy >= 2.0 * problem.domain.b / n_rows:
            msg = f"evaluation grid {grid.nx}x{grid.ny} cannot resolve tiles at delta={delta:g}"
            _log_event("term_exhausted", n=n, delta=delta, halvings=halvings, reason="grid_resolution")
            return TermFailure(n, eps, "exhausted", msg, halvings, delta)
        tiling = build_fiad_tiling(problem.domain, delta)
        try:
            cal = calibrate_tiling(
                tiling, problem.F, problem.f, problem.fprime, eps, settings.lattice_n, settings.samples_per_tile
            )
            if not cal.certified:
                d = cal.demands[0]
                _log_event(
                    "shrink", n=n, delta=delta, halvings=halvings, tile=d.tile,
                    residual_min=d.residual_min, residual_max=d.residual_max, reason=d.reason,
                )
                continue
            u = assemble(tiling, cal.pieces)
            residual = regularized_residual(u, problem.F, grid)
            report = build_report(u, problem.F, problem.f, grid, residual=residual)
        except (ExprEvaluationError, CalibrationError) as exc:
            _log_event("term_failed", n=n, delta=delta, halvings=halvings, error=str(exc))
            return TermFailure(n, eps, "evaluation", str(exc), halvings, delta)
        if not report.band_ok(eps):
            _log_event(
                "shrink", n=n, delta=delta, halvings=halvings, reason="band violated on evaluation grid",
                residual_min=report.overall_min, residual_max=report.overall_max,
            )
            continue
        _log_event(
            "term_accepted", n=n, epsilon=eps, delta=delta, halvings=halvings, tiles=len(tiling.tiles),
            residual_min=report.overall_min, residual_max=report.overall_max,
            trace_error=report.trace_error_max, seconds=round(time.perf_counter() - start, 3),
        )
        return SequenceTerm(n, eps, delta, u, report, residual, halvings)
    msg = f"no certified tiling after {settings.max_halvings} halvings (last delta={delta:g})"
    _log_event("term_exhausted", n=n, delta=delta, halvings=settings.max_halvings, reason="max_halvings")
    return TermFailure(n, eps, "exhausted", msg, settings.max_halvings, delta)


async def build_sequence_async(
    problem: CompiledProblem, N: int, settings: Optional[SolverSettings] = None, grid: Optional[SampleGrid] = None
) -> ApproxSequence:
    if N < 1:
        raise ValueError(f"sequence length N must be >= 1, got {N}")
    settings = settings or SolverSettings()
    grid = grid or report_grid(problem, settings)
    sem = asyncio.Semaphore(settings.worker_count())
    _log_event("sequence_start", F=to_text(problem.F), f=to_text(problem.f), N=N, workers=settings.worker_count())

    async def _one(n: int) -> Union[SequenceTerm, TermFailure]:
        async with sem:
            return await asyncio.to_thread(build_term, problem, n, settings, grid)

    results = await asyncio.gather(*(_one(n) for n in range(1, N + 1)))
    terms = tuple(r for r in results if isinstance(r, SequenceTerm))
    failures = tuple(r for r in results if isinstance(r, TermFailure))
    _log_event("sequence_done", terms=len(terms), failures=[f.n for f in failures])
    return ApproxSequence(problem, grid, terms, failures)


def build_sequence(
    problem: CompiledProblem, N: int, settings: Optional[SolverSettings] = None, grid: Optional[SampleGrid] = None
) -> ApproxSequence:
    """Synchronous entry point; terms are still built concurrently."""
    return asyncio.run(build_sequence_async(problem, N, settings, grid))


# -------------------- a.e. convergence --------------------
@dataclass(frozen=True)
class AEVerdict:
    converges: bool
    exceptional_fraction: float
    max_off_exceptional_deviation: Tuple[float, ...]
    exceptional: np.ndarray
    null_fraction_bound: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.exceptional_fraction <= 1.0:
            raise ValueError("exceptional_fraction must lie in [0, 1]")


def default_null_fraction_bound(grid: SampleGrid) -> float:
    perimeter = 2 * (grid.nx + grid.ny)
    return min(1.0, NULL_SET_PERIMETER_FACTOR * perimeter / grid.node_count)


def skeleton_null_fraction_bound(grid: SampleGrid, tilings: Iterable[Tiling]) -> float:
    """Share of the grid covered by a two-node band along every distinct skeleton line.

    Only the tile boundaries enter; which nodes actually failed to converge does not.
    """
    xs: Set[float] = set()
    ys: Set[float] = set()
    for t in tilings:
        xs.update(np.round(t.bounds[:, :2].ravel(), 12).tolist())
        ys.update(np.round(t.bounds[:, 2:].ravel(), 12).tolist())
    band = 2 * (len(xs) * (grid.ny + 1) + len(ys) * (grid.nx + 1))
    return min(1.0, band / grid.node_count)


def _exceptional_mask(grid: SampleGrid, exceptional: Union[np.ndarray, Iterable[Tuple[int, int]], None]) -> np.ndarray:
    if exceptional is None:
        return np.zeros(grid.shape, dtype=bool)
    if isinstance(exceptional, np.ndarray) and exceptional.dtype == bool:
        if exceptional.shape != grid.shape:
            raise GridMismatchError(f"exceptional mask shape {exceptional.shape} != grid {grid.shape}")
        return exceptional.copy()
    mask = np.zeros(grid.shape, dtype=bool)
    for j, i in exceptional:
        mask[j, i] = True
    return mask


def _deviation(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    with np.errstate(invalid="ignore"):
        d = np.abs(a - b)
    d[a == b] = 0.0
    return np.nan_to_num(d, nan=np.inf)


def check_ae_convergence(
    terms: Sequence[GridFunction],
    limit: GridFunction,
    exceptional: Union[np.ndarray, Iterable[Tuple[int, int]], None] = None,
    *,
    tolerance: float = AE_TOLERANCE,
    envelope: Optional[Sequence[float]] = None,
    null_fraction_bound: Optional[float] = None,
) -> AEVerdict:
    """Pointwise convergence of `terms` to `limit` off a small exceptional node set.

    A node converges when its last deviation is <= tolerance and, over the final half
    of the sequence, its deviations are nonincreasing or stay under `envelope`. Nodes
    that do not converge join the exceptional set; the verdict holds iff that set's
    share of the grid is within the null-set bound.
    """
    if not terms:
        raise ValueError("check_ae_convergence needs at least one term")
    grid = limit.grid
    for k, t in enumerate(terms):
        if not t.grid.same_as(grid):
            raise GridMismatchError(f"term {k} lives on a {t.grid.nx}x{t.grid.ny} grid, limit on {grid.nx}x{grid.ny}")
    if envelope is not None and len(envelope) != len(terms):
        raise ValueError("envelope must have one entry per term")

    dev = np.stack([_deviation(t.values, limit.values) for t in terms])
    tail_start = len(terms) // 2 if len(terms) > 1 else 0
    tail = dev[tail_start:]
    ok = dev[-1] <= tolerance
    monotone = np.all(np.diff(tail, axis=0) <= 0.0, axis=0)
    if envelope is not None:
        env = np.asarray(envelope, dtype=float)[tail_start:, None, None]
        monotone |= np.all(tail <= env + tolerance, axis=0)
    ok &= monotone

    marked = _exceptional_mask(grid, exceptional) | ~ok
    fraction = float(marked.mean())
    bound = default_null_fraction_bound(grid) if null_fraction_bound is None else float(null_fraction_bound)
    off = ~marked
    per_term = tuple(float(d[off].max()) if off.any() else 0.0 for d in dev)
    return AEVerdict(fraction <= bound, fraction, per_term, marked, bound)


def residual_ae_verdict(seq: ApproxSequence) -> AEVerdict:
    """a.e. check of (T̃u_n) against 0 with Γ-proximity nodes as the exceptional set."""
    if not seq.terms:
        raise ValueError("sequence has no terms")
    grid = seq.grid
    exceptional = np.zeros(grid.shape, dtype=bool)
    for t in seq.terms:
        exceptional |= gamma_proximity_mask(grid, t.u.tiling)
    bound = skeleton_null_fraction_bound(grid, (t.u.tiling for t in seq.terms))
    return check_ae_convergence(
        [t.residual for t in seq.terms],
        GridFunction.constant(grid, 0.0),
        exceptional,
        tolerance=seq.terms[-1].epsilon,
        envelope=[t.epsilon for t in seq.terms],
        null_fraction_bound=bound,
    )


# -------------------- Cauchy diagnostic --------------------
@dataclass(frozen=True)
class DecayRow:
    n: int
    epsilon: float
    delta: float
    sup_residual: float
    min_residual: float
    trace_error: float
    gamma_fraction: float


@dataclass(frozen=True)
class CauchyDiagnostic:
    rows: Tuple[DecayRow, ...]
    band_ok: bool
    trace_ok: bool
    decay_ok: bool
    trivially_constant: bool
    failures: Tuple[str, ...]

    @property
    def passed(self) -> bool:
        return self.band_ok and self.trace_ok and self.decay_ok


def decay_rows(terms: Sequence[SequenceTerm]) -> Tuple[DecayRow, ...]:
    return tuple(
        DecayRow(
            n=t.n,
            epsilon=t.epsilon,
            delta=t.delta,
            sup_residual=t.report.sup_residual,
            min_residual=t.report.overall_min,
            trace_error=t.report.trace_error_max,
            gamma_fraction=t.report.gamma_node_fraction,
        )
        for t in terms
    )


def cauchy_diagnostic(seq: Union[ApproxSequence, Sequence[SequenceTerm]], trace_tol: float = AE_TOLERANCE) -> CauchyDiagnostic:
    """Check that the image (T̃u_n, R₀u_n) converges to (0, f)."""
    terms = tuple(seq.terms if isinstance(seq, ApproxSequence) else seq)
    if len(terms) < 2:
        raise ValueError("cauchy_diagnostic needs at least two terms")
    failures: List[str] = []
    band_ok = trace_ok = decay_ok = True
    for t in terms:
        if not t.report.band_ok(t.epsilon):
            band_ok = False
            failures.append(
                f"n={t.n}: residual [{t.report.overall_min:.6g}, {t.report.overall_max:.6g}] "
                f"outside (-{t.epsilon:.6g}, 0]"
            )
        if not t.report.trace_ok(trace_tol):
            trace_ok = False
            failures.append(f"n={t.n}: trace error {t.report.trace_error_max:.3g} > {trace_tol:g}")
        if t.report.sup_residual > t.epsilon + 1e-12:
            decay_ok = False
            failures.append(f"n={t.n}: sup residual {t.report.sup_residual:.6g} > 1/n")
    constant = all(
        a.residual == b.residual and a.report.trace_error_max == b.report.trace_error_max
        for a, b in zip(terms, terms[1:])
    )
    return CauchyDiagnostic(decay_rows(terms), band_ok, trace_ok, decay_ok, constant, tuple(failures))


def same_generalized_solution(seq_a: ApproxSequence, seq_b: ApproxSequence) -> bool:
    """Two representatives of the same completion element: same problem, both images → (0, f)."""
    pa, pb = seq_a.problem, seq_b.problem
    if (pa.F, pa.f, pa.domain) != (pb.F, pb.f, pb.domain):
        return False
    for seq in (seq_a, seq_b):
        if len(seq.terms) < 2 or not cauchy_diagnostic(seq).passed:
            return False
    return True


__all__ = [
    "GridMismatchError",
    "SequenceTerm",
    "TermFailure",
    "ApproxSequence",
    "AEVerdict",
    "DecayRow",
    "CauchyDiagnostic",
    "build_term",
    "build_sequence",
    "build_sequence_async",
    "report_grid",
    "check_ae_convergence",
    "default_null_fraction_bound",
    "skeleton_null_fraction_bound",
    "residual_ae_verdict",
    "decay_rows",
    "cauchy_diagnostic",
    "same_generalized_solution",
]
