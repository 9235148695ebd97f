"""Pasting calibrated pieces into u_n and computing the grid image of T₀u = (T̃u, R₀u)."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ordpde.app.baire.operators import GridFunction
from ordpde.app.core.geometry import SNAP_TOL, SampleGrid, gamma_mask, gamma_node_fraction
from ordpde.app.core.tiled_function import TiledFunction
from ordpde.app.dsl import Expr, ExprEvaluationError, evaluate
from ordpde.app.tiling.fiad import Tiling

from .local_approx import CalibratedPiece

logger = logging.getLogger(__name__)

EQUIVALENCE_TOL = 1e-9
# Strict lower band bound "-eps <" is checked as "> -eps - BAND_FLOAT_SLACK".
BAND_FLOAT_SLACK = 1e-12
MIN_NODES_PER_TILE = 4


class AssemblyError(ValueError):
    pass


class InsufficientRefinementError(ValueError):
    pass


class ResidualEvaluationError(ExprEvaluationError):
    def __init__(self, cause: ExprEvaluationError, x: float, y: float):
        super().__init__(f"{cause.reason} at grid node ({x!r}, {y!r})", cause.node)
        self.x = x
        self.y = y


def assemble(t: Tiling, pieces: Sequence[CalibratedPiece]) -> TiledFunction:
    """u = (I∘S)(Σ χ_i u_i): pieces inside tiles, interface rule on Γ."""
    if len(pieces) != len(t.tiles):
        raise AssemblyError(f"expected one certified piece per tile ({len(t.tiles)}), got {len(pieces)}")
    eps = {p.epsilon for p in pieces}
    if len(eps) > 1:
        raise AssemblyError(f"pieces certified at different epsilons: {sorted(eps)}")
    for k, (box, cp) in enumerate(zip(t.tiles, pieces)):
        if cp.certified_box != box:
            raise AssemblyError(f"piece {k} was certified on {cp.certified_box}, not on tile {box}")
    return TiledFunction(t, tuple(cp.piece for cp in pieces))


def _check_refinement(u: TiledFunction, grid: SampleGrid) -> None:
    if not grid.domain == u.tiling.domain:
        raise AssemblyError("grid and tiling live on different domains")
    w, h = u.tiling.min_tile_width, u.tiling.min_tile_height
    if grid.hx >= w - SNAP_TOL or grid.hy >= h - SNAP_TOL:
        raise InsufficientRefinementError(
            f"grid spacing ({grid.hx:g}, {grid.hy:g}) does not resolve tiles of size ({w:g}, {h:g})"
        )
    if grid.hx * MIN_NODES_PER_TILE > w or grid.hy * MIN_NODES_PER_TILE > h:
        logger.warning(
            "Evaluation grid has fewer than %d nodes per tile per axis (h=(%g, %g), tile=(%g, %g))",
            MIN_NODES_PER_TILE, grid.hx, grid.hy, w, h,
        )


def _locate_failure(fn: Callable[[np.ndarray, np.ndarray], np.ndarray], xs: np.ndarray, ys: np.ndarray) -> Tuple[float, float]:
    """Bisect to one node where `fn` raises."""
    idx = np.arange(xs.size)
    while idx.size > 1:
        half = idx[: idx.size // 2]
        try:
            fn(xs[half], ys[half])
        except ExprEvaluationError:
            idx = half
        else:
            idx = idx[idx.size // 2 :]
    return float(xs[idx[0]]), float(ys[idx[0]])


def regularized_residual(u: TiledFunction, F: Expr, grid: SampleGrid) -> GridFunction:
    """T̃u on the grid: exact Tu off Γ, min of adjacent residual limits on Γ."""
    _check_refinement(u, grid)
    X, Y = grid.mesh
    xs, ys = X.ravel(), Y.ravel()
    try:
        values = u.residual_many(F, xs, ys)
    except ExprEvaluationError as exc:
        x, y = _locate_failure(lambda a, b: u.residual_many(F, a, b), xs, ys)
        raise ResidualEvaluationError(exc, x, y) from exc
    return GridFunction(grid, values.reshape(grid.shape))


def regularized_partials(u: TiledFunction, grid: SampleGrid) -> Tuple[GridFunction, GridFunction]:
    """Extended first-order operators (I∘S)(D_x u) and (I∘S)(D_y u) sampled on the grid."""
    _check_refinement(u, grid)
    X, Y = grid.mesh
    ux, uy = u.partials_many(X, Y)
    return GridFunction(grid, ux), GridFunction(grid, uy)


def trace(u: TiledFunction, x_nodes: Sequence[float]) -> List[float]:
    """R₀u: u(x, 0) at each node (regularized value at skeleton crossings)."""
    xs = np.asarray(x_nodes, dtype=float)
    return [float(v) for v in u.evaluate_many(xs, np.zeros_like(xs))]


def _off_crossings(u: TiledFunction, xs: np.ndarray) -> np.ndarray:
    crossings = np.asarray(u.tiling.crossings_of_initial_line(), dtype=float)
    if crossings.size == 0:
        return np.ones(xs.shape, dtype=bool)
    return np.min(np.abs(xs[:, None] - crossings[None, :]), axis=1) > SNAP_TOL


def trace_error(u: TiledFunction, f: Expr, x_nodes: np.ndarray) -> float:
    """max |u(x, 0) - f(x)| over the nodes off the skeleton crossings."""
    xs = np.asarray(x_nodes, dtype=float)
    keep = _off_crossings(u, xs)
    if not keep.any():
        return 0.0
    xs = xs[keep]
    fx = np.broadcast_to(np.asarray(evaluate(f, {"x": xs}), dtype=float), xs.shape)
    return float(np.max(np.abs(u.evaluate_many(xs, np.zeros_like(xs)) - fx)))


@dataclass(frozen=True)
class TileResidual:
    tile: int
    residual_min: float
    residual_max: float


@dataclass(frozen=True)
class ResidualReport:
    eval_grid: SampleGrid
    residual_min: float
    residual_max: float
    gamma_residual_min: float
    gamma_residual_max: float
    gamma_node_fraction: float
    trace_error_max: float
    per_tile: Tuple[TileResidual, ...]

    def __post_init__(self) -> None:
        if self.residual_min > self.residual_max:
            raise ValueError("residual_min must not exceed residual_max")
        if not 0.0 <= self.gamma_node_fraction <= 1.0:
            raise ValueError("gamma_node_fraction must lie in [0, 1]")

    @property
    def overall_min(self) -> float:
        return min(self.residual_min, self.gamma_residual_min)

    @property
    def overall_max(self) -> float:
        return max(self.residual_max, self.gamma_residual_max)

    @property
    def sup_residual(self) -> float:
        """sup |T̃u| over off-Γ nodes."""
        return max(abs(self.residual_min), abs(self.residual_max))

    def band_ok(self, eps: float) -> bool:
        """-eps < T̃u <= 0 at every node, Γ nodes included."""
        return self.overall_min > -eps - BAND_FLOAT_SLACK and self.overall_max <= BAND_FLOAT_SLACK

    def trace_ok(self, tol: float = EQUIVALENCE_TOL) -> bool:
        return self.trace_error_max <= tol


def build_report(
    u: TiledFunction, F: Expr, f: Expr, grid: SampleGrid, residual: Optional[GridFunction] = None
) -> ResidualReport:
    if residual is None:
        residual = regularized_residual(u, F, grid)
    values = residual.values
    on_gamma = gamma_mask(grid, u.tiling)
    off = values[~on_gamma] if (~on_gamma).any() else values.ravel()
    on = values[on_gamma] if on_gamma.any() else off

    X, Y = grid.mesh
    owner = u.tiling.owner(X, Y)
    n_tiles = len(u.tiling.tiles)
    t_min = np.full(n_tiles, np.inf)
    t_max = np.full(n_tiles, -np.inf)
    np.minimum.at(t_min, owner, values.ravel())
    np.maximum.at(t_max, owner, values.ravel())
    sampled = np.isfinite(t_min)
    per_tile = tuple(
        TileResidual(int(k), float(t_min[k]), float(t_max[k])) for k in np.nonzero(sampled)[0]
    )

    return ResidualReport(
        eval_grid=grid,
        residual_min=float(off.min()),
        residual_max=float(off.max()),
        gamma_residual_min=float(on.min()),
        gamma_residual_max=float(on.max()),
        gamma_node_fraction=gamma_node_fraction(grid, u.tiling),
        trace_error_max=trace_error(u, f, grid.xs),
        per_tile=per_tile,
    )


def equivalent(
    u: TiledFunction, v: TiledFunction, F: Expr, f: Expr, grid: SampleGrid, tol: float = EQUIVALENCE_TOL
) -> bool:
    """Grid proxy for u ∼ v ⇔ T₀u = T₀v: residuals agree off Γ and traces agree on y = 0."""
    if u.tiling.domain != v.tiling.domain:
        raise AssemblyError("equivalence is only defined for functions on the same domain")
    ru = regularized_residual(u, F, grid).values
    rv = regularized_residual(v, F, grid).values
    off = ~(gamma_mask(grid, u.tiling) | gamma_mask(grid, v.tiling))
    if np.any(np.abs(ru[off] - rv[off]) > tol):
        return False
    xs = grid.xs[_off_crossings(u, grid.xs) & _off_crossings(v, grid.xs)]
    zeros = np.zeros_like(xs)
    return bool(np.all(np.abs(u.evaluate_many(xs, zeros) - v.evaluate_many(xs, zeros)) <= tol))


__all__ = [
    "AssemblyError",
    "InsufficientRefinementError",
    "ResidualEvaluationError",
    "ResidualReport",
    "TileResidual",
    "EQUIVALENCE_TOL",
    "assemble",
    "regularized_residual",
    "regularized_partials",
    "trace",
    "trace_error",
    "build_report",
    "equivalent",
]
