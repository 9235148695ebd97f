"""Per-tile calibrated approximants whose residual Tu lies in [-ε, 0].

Interior tiles get affine pieces calibrated so that Tu = -ε/2 at the tile centre.
Tiles crossing y = 0 get u = f(x) + g(x)·y with Tu(x, 0) = -ε/2 at every sample node,
so the trace equals f exactly. Certification samples Tu on a lattice over the tile;
a failed certificate is a demand to shrink δ.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ordpde.app.core.pieces import AffinePiece, InitialPiece, SmoothPiece, affine_jet, residual_of
from ordpde.app.dsl import Expr, evaluate
from ordpde.app.tiling.fiad import Box, Tiling

logger = logging.getLogger(__name__)

# Relative slack on the band [-eps, 0]
BAND_SLACK = 1e-12


class CalibrationError(ValueError):
    pass


@dataclass(frozen=True)
class Certification:
    residual_min: float
    residual_max: float
    lattice_n: int


@dataclass(frozen=True)
class CalibratedPiece:
    piece: SmoothPiece
    epsilon: float
    certified_box: Box
    certification: Certification


@dataclass(frozen=True)
class RefinementDemand:
    """Certification failed: the driver should shrink δ and retry."""

    box: Box
    epsilon: float
    residual_min: float
    residual_max: float
    reason: str
    tile: Optional[int] = None


CertifyResult = Union[CalibratedPiece, RefinementDemand]


def _require_eps(eps: float) -> None:
    if not (eps > 0 and math.isfinite(eps)):
        raise CalibrationError(f"epsilon must be positive and finite, got {eps}")


def _centre_slopes(F: Expr, x0: np.ndarray, y0: np.ndarray, eps: float, c0: np.ndarray, c1: np.ndarray) -> np.ndarray:
    """c2 = -ε/2 - F(x0, y0, c0, c1) for a batch of tile centres."""
    shape = np.shape(x0)
    f_center = np.broadcast_to(np.asarray(evaluate(F, {"x": x0, "y": y0, "u": c0, "p": c1}), dtype=float), shape)
    return -eps / 2.0 - f_center


def interior_piece(F: Expr, x0: float, y0: float, eps: float, c0: float, c1: float) -> AffinePiece:
    """Affine piece with c2 = -ε/2 - F(x0, y0, c0, c1), so Tu(x0, y0) = -ε/2."""
    _require_eps(eps)
    c2 = float(_centre_slopes(F, np.array([x0], dtype=float), np.array([y0], dtype=float), eps,
                              np.array([c0], dtype=float), np.array([c1], dtype=float))[0])
    if not math.isfinite(c2):
        raise CalibrationError(f"F is not finite at the calibration point ({x0}, {y0})")
    return AffinePiece(float(x0), float(y0), float(c0), float(c1), c2)


def initial_piece(F: Expr, f: Expr, fprime: Expr, tile: Box, eps: float, samples_per_tile: int) -> InitialPiece:
    """u = f(x) + g(x)·y with g(x) = -ε/2 - F(x, 0, f(x), f'(x)) at the sample nodes."""
    _require_eps(eps)
    if not tile.meets_initial_line():
        raise CalibrationError(f"tile {tile} does not meet y = 0 in its interior")
    if samples_per_tile < 2:
        raise CalibrationError("samples_per_tile must be >= 2")
    xs = np.linspace(tile.x_lo, tile.x_hi, samples_per_tile)
    fx = np.broadcast_to(np.asarray(evaluate(f, {"x": xs}), dtype=float), xs.shape)
    fpx = np.broadcast_to(np.asarray(evaluate(fprime, {"x": xs}), dtype=float), xs.shape)
    Fx = np.broadcast_to(np.asarray(evaluate(F, {"x": xs, "y": 0.0, "u": fx, "p": fpx}), dtype=float), xs.shape)
    g = -eps / 2.0 - Fx
    if not np.all(np.isfinite(g)):
        raise CalibrationError(f"F(x, 0, f, f') is not finite on x in [{tile.x_lo}, {tile.x_hi}]")
    return InitialPiece(f, fprime, tuple(float(x) for x in xs), tuple(float(v) for v in g))


def _lattices(bounds: np.ndarray, lattice_n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Row t holds the lattice over box bounds[t] = (x_lo, x_hi, y_lo, y_hi), in meshgrid order."""
    xs = np.linspace(bounds[:, 0], bounds[:, 1], lattice_n, axis=1)
    ys = np.linspace(bounds[:, 2], bounds[:, 3], lattice_n, axis=1)
    return np.tile(xs, (1, lattice_n)), np.repeat(ys, lattice_n, axis=1)


def lattice(box: Box, lattice_n: int) -> Tuple[np.ndarray, np.ndarray]:
    X, Y = _lattices(np.array([[box.x_lo, box.x_hi, box.y_lo, box.y_hi]], dtype=float), lattice_n)
    return X[0], Y[0]


def _in_band(residual_min: np.ndarray, residual_max: np.ndarray, eps: float) -> np.ndarray:
    return (residual_min >= -eps * (1.0 + BAND_SLACK)) & (residual_max <= eps * BAND_SLACK)


def band_accepts(residual_min: float, residual_max: float, eps: float) -> bool:
    return bool(_in_band(np.float64(residual_min), np.float64(residual_max), eps))


def _band_summary(tu: np.ndarray, eps: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Per-row (finite, min, max, accepted) for residual samples shaped (tiles, lattice points)."""
    finite = np.all(np.isfinite(tu), axis=1)
    with np.errstate(invalid="ignore"):
        lo = np.where(finite, tu.min(axis=1), np.nan)
        hi = np.where(finite, tu.max(axis=1), np.nan)
    return finite, lo, hi, finite & _in_band(lo, hi, eps)


def certify(piece: SmoothPiece, F: Expr, eps: float, box: Box, lattice_n: int) -> CertifyResult:
    """Sample Tu on a lattice_n × lattice_n lattice over `box` and check the band [-ε, 0]."""
    _require_eps(eps)
    if lattice_n < 8:
        raise CalibrationError(f"lattice_n must be >= 8, got {lattice_n}")
    X, Y = lattice(box, lattice_n)
    tu = residual_of(F, X, Y, piece.jet(X, Y))
    finite, lo, hi, ok = _band_summary(tu[None, :], eps)
    if not finite[0]:
        return RefinementDemand(box, eps, math.nan, math.nan, "non-finite residual on the certification lattice")
    if ok[0]:
        return CalibratedPiece(piece, eps, box, Certification(float(lo[0]), float(hi[0]), lattice_n))
    return RefinementDemand(box, eps, float(lo[0]), float(hi[0]), "residual left the band [-eps, 0]")


@dataclass(frozen=True)
class TilingCalibration:
    tiling: Tiling
    epsilon: float
    pieces: Tuple[CalibratedPiece, ...]
    demands: Tuple[RefinementDemand, ...]

    @property
    def certified(self) -> bool:
        return not self.demands and len(self.pieces) == len(self.tiling.tiles)


def seed_values(f: Expr, fprime: Expr, x0: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Default seeds c0 = f(x0), c1 = f'(x0) carried over from the initial data."""
    c0 = np.broadcast_to(np.asarray(evaluate(f, {"x": x0}), dtype=float), x0.shape)
    c1 = np.broadcast_to(np.asarray(evaluate(fprime, {"x": x0}), dtype=float), x0.shape)
    return c0, c1


def calibrate_tiling(
    tiling: Tiling,
    F: Expr,
    f: Expr,
    fprime: Expr,
    eps: float,
    lattice_n: int,
    samples_per_tile: int,
    stop_at_first_demand: bool = True,
) -> TilingCalibration:
    """Build and certify one piece per tile.

    Interior tiles are handled in one vectorized pass over a (tiles, lattice) array;
    initial-row tiles one by one.
    """
    _require_eps(eps)
    if lattice_n < 8:
        raise CalibrationError(f"lattice_n must be >= 8, got {lattice_n}")
    n_tiles = len(tiling.tiles)
    initial = set(tiling.initial_row)
    interior = np.array([k for k in range(n_tiles) if k not in initial], dtype=np.intp)
    results: List[Optional[CalibratedPiece]] = [None] * n_tiles
    demands: List[RefinementDemand] = []

    for k in tiling.initial_row:
        box = tiling.tiles[k]
        piece = initial_piece(F, f, fprime, box, eps, samples_per_tile)
        res = certify(piece, F, eps, box, lattice_n)
        if isinstance(res, RefinementDemand):
            demands.append(RefinementDemand(res.box, eps, res.residual_min, res.residual_max, res.reason, tile=k))
            if stop_at_first_demand:
                return TilingCalibration(tiling, eps, (), tuple(demands))
        else:
            results[k] = res

    if interior.size:
        demands.extend(_calibrate_interior(tiling, interior, F, f, fprime, eps, lattice_n, results, stop_at_first_demand))

    if demands:
        return TilingCalibration(tiling, eps, (), tuple(demands))
    return TilingCalibration(tiling, eps, tuple(results), ())  # type: ignore[arg-type]


def _calibrate_interior(
    tiling: Tiling,
    interior: np.ndarray,
    F: Expr,
    f: Expr,
    fprime: Expr,
    eps: float,
    lattice_n: int,
    results: List[Optional[CalibratedPiece]],
    stop_at_first_demand: bool,
) -> List[RefinementDemand]:
    bnd = tiling.bounds[interior]
    x0 = 0.5 * (bnd[:, 0] + bnd[:, 1])
    y0 = 0.5 * (bnd[:, 2] + bnd[:, 3])
    c0, c1 = seed_values(f, fprime, x0)
    c2 = _centre_slopes(F, x0, y0, eps, c0, c1)

    # shape (tiles, lattice_n**2)
    X, Y = _lattices(bnd, lattice_n)
    jet = affine_jet(x0[:, None], y0[:, None], c0[:, None], c1[:, None], c2[:, None], X, Y)
    finite, lo, hi, ok = _band_summary(residual_of(F, X, Y, jet), eps)

    demands: List[RefinementDemand] = []
    for row in np.nonzero(~ok)[0]:
        k = int(interior[row])
        reason = "residual left the band [-eps, 0]" if finite[row] else "non-finite residual on the certification lattice"
        demands.append(RefinementDemand(tiling.tiles[k], eps, float(lo[row]), float(hi[row]), reason, tile=k))
        if stop_at_first_demand:
            return demands
    if demands:
        return demands

    for row, k in enumerate(interior):
        piece = AffinePiece(float(x0[row]), float(y0[row]), float(c0[row]), float(c1[row]), float(c2[row]))
        results[int(k)] = CalibratedPiece(
            piece, eps, tiling.tiles[int(k)], Certification(float(lo[row]), float(hi[row]), lattice_n)
        )
    return demands


def pieces_of(calibrated: Sequence[CalibratedPiece]) -> Tuple[SmoothPiece, ...]:
    return tuple(c.piece for c in calibrated)


__all__ = [
    "BAND_SLACK",
    "CalibrationError",
    "Certification",
    "CalibratedPiece",
    "RefinementDemand",
    "TilingCalibration",
    "interior_piece",
    "initial_piece",
    "certify",
    "band_accepts",
    "lattice",
    "seed_values",
    "calibrate_tiling",
    "pieces_of",
]
