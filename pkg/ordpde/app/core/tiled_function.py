"""Piecewise-smooth functions on Ω: one smooth piece per tile, regularized on the skeleton Γ.

Off Γ a TiledFunction is its owning piece. On Γ it takes the minimum of the adjacent
pieces' one-sided limits, which is what I∘S produces there (docs/BAIRE_INTERFACE_RULE.md).
Pieces are smooth on a neighbourhood of their tile, so a one-sided limit is simply the
piece evaluated at the point.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING, Callable, Tuple

import numpy as np

from ordpde.app.dsl import Expr

from .extended import ExtendedReal
from .geometry import SNAP_TOL, DomainError
from .pieces import AffinePiece, InitialPiece, Partials, SmoothPiece, affine_jet, residual_of

if TYPE_CHECKING:
    from ordpde.app.tiling.fiad import Tiling


class SingularPointError(ValueError):
    pass


@dataclass(frozen=True)
class TiledFunction:
    tiling: "Tiling"
    pieces: Tuple[SmoothPiece, ...]

    def __post_init__(self) -> None:
        if len(self.pieces) != len(self.tiling.tiles):
            raise ValueError(f"{len(self.pieces)} pieces for {len(self.tiling.tiles)} tiles")
        object.__setattr__(self, "pieces", tuple(self.pieces))

    @cached_property
    def _affine_coefficients(self) -> np.ndarray:
        """(T, 5) array x0, y0, c0, c1, c2; NaN rows for initial pieces."""
        out = np.full((len(self.pieces), 5), np.nan)
        for k, piece in enumerate(self.pieces):
            if isinstance(piece, AffinePiece):
                out[k] = (piece.x0, piece.y0, piece.c0, piece.c1, piece.c2)
        return out

    @cached_property
    def _initial_tiles(self) -> np.ndarray:
        return np.array([k for k, p in enumerate(self.pieces) if isinstance(p, InitialPiece)], dtype=np.intp)

    def _jet_for(self, tiles: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> Partials:
        """Jet of piece `tiles[i]` at point i, for every i."""
        coef = self._affine_coefficients[tiles]
        u, ux, uy = affine_jet(coef[:, 0], coef[:, 1], coef[:, 2], coef[:, 3], coef[:, 4], xs, ys)
        if self._initial_tiles.size:
            for k in np.intersect1d(np.unique(tiles), self._initial_tiles):
                sel = tiles == k
                u[sel], ux[sel], uy[sel] = self.pieces[int(k)].jet(xs[sel], ys[sel])
        return u, ux, uy

    def _min_over_adjacent(
        self, xs: np.ndarray, ys: np.ndarray, per_slot: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]
    ) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        shape = xs.shape
        xs = xs.ravel()
        ys = np.asarray(ys, dtype=float).ravel()
        cand = self.tiling.containing_tiles(xs, ys)
        if np.any(cand[0] < 0):
            bad = int(np.nonzero(cand[0] < 0)[0][0])
            raise DomainError(f"point ({xs[bad]}, {ys[bad]}) lies outside the domain")
        out = per_slot(cand[0], xs, ys)
        for slot in range(1, cand.shape[0]):
            differs = cand[slot] != cand[0]
            if np.any(differs):
                sel = np.nonzero(differs)[0]
                out[sel] = np.minimum(out[sel], per_slot(cand[slot, sel], xs[sel], ys[sel]))
        return out.reshape(shape)

    def evaluate_many(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return self._min_over_adjacent(xs, ys, lambda t, x, y: self._jet_for(t, x, y)[0])

    def residual_many(self, F: Expr, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Tu = D_y u + F(x, y, u, D_x u) off Γ; min of adjacent limits on Γ."""
        return self._min_over_adjacent(xs, ys, lambda t, x, y: residual_of(F, x, y, self._jet_for(t, x, y)))

    def partials_many(self, xs: np.ndarray, ys: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Regularized (D_x u, D_y u): exact off Γ, min of adjacent limits on Γ."""
        ux = self._min_over_adjacent(xs, ys, lambda t, x, y: self._jet_for(t, x, y)[1])
        uy = self._min_over_adjacent(xs, ys, lambda t, x, y: self._jet_for(t, x, y)[2])
        return ux, uy

    def evaluate(self, x: float, y: float) -> ExtendedReal:
        self.tiling.domain.require(x, y)
        return ExtendedReal(float(self.evaluate_many(np.array([x]), np.array([y]))[0]))

    def on_skeleton(self, x: float, y: float) -> bool:
        dx, dy = self.tiling.boundary_distance(np.array([x]), np.array([y]))
        return bool(dx[0] <= SNAP_TOL or dy[0] <= SNAP_TOL)

    def partials(self, x: float, y: float) -> Tuple[float, float]:
        """Exact (D_x u, D_y u) at a point interior to a tile."""
        self.tiling.domain.require(x, y)
        if self.on_skeleton(x, y):
            raise SingularPointError(f"({x}, {y}) lies on the skeleton; use the regularized residual instead")
        k = int(self.tiling.owner(np.array([x]), np.array([y]))[0])
        _, ux, uy = self.pieces[k].jet(np.array([x]), np.array([y]))
        return float(ux[0]), float(uy[0])

    def piece_at(self, x: float, y: float) -> SmoothPiece:
        return self.pieces[int(self.tiling.owner(np.array([x]), np.array([y]))[0])]


__all__ = ["TiledFunction", "SingularPointError"]
