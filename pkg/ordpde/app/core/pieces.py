"""Smooth per-tile pieces: affine interior pieces and initial pieces u = f(x) + g(x)·y."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Tuple, Union

import numpy as np
from scipy.interpolate import PchipInterpolator

from ordpde.app.dsl import Expr, evaluate

Partials = Tuple[np.ndarray, np.ndarray, np.ndarray]


@dataclass(frozen=True)
class AffinePiece:
    """u = c0 + c1·(x - x0) + c2·(y - y0)."""

    x0: float
    y0: float
    c0: float
    c1: float
    c2: float

    kind = "affine"

    def value(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return affine_jet(self.x0, self.y0, self.c0, self.c1, self.c2, xs, ys)[0]

    def jet(self, xs: np.ndarray, ys: np.ndarray) -> Partials:
        """(u, D_x u, D_y u) at the given points."""
        return affine_jet(self.x0, self.y0, self.c0, self.c1, self.c2, xs, ys)


@dataclass(frozen=True)
class InitialPiece:
    """u = f(x) + g(x)·y with g known at `x_nodes` and PCHIP-interpolated in between."""

    f: Expr
    fprime: Expr
    x_nodes: Tuple[float, ...]
    g_nodes: Tuple[float, ...]

    kind = "initial"

    def __post_init__(self) -> None:
        if len(self.x_nodes) != len(self.g_nodes) or len(self.x_nodes) < 2:
            raise ValueError("initial piece needs at least two matching (x, g) samples")

    @cached_property
    def g(self) -> PchipInterpolator:
        return PchipInterpolator(np.asarray(self.x_nodes), np.asarray(self.g_nodes), extrapolate=True)

    @cached_property
    def g_prime(self) -> PchipInterpolator:
        return self.g.derivative()

    def _f(self, expr: Expr, xs: np.ndarray) -> np.ndarray:
        return np.broadcast_to(np.asarray(evaluate(expr, {"x": xs}), dtype=float), xs.shape)

    def value(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        return self._f(self.f, xs) + self.g(xs) * np.asarray(ys, dtype=float)

    def jet(self, xs: np.ndarray, ys: np.ndarray) -> Partials:
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        g = self.g(xs)
        u = self._f(self.f, xs) + g * ys
        ux = self._f(self.fprime, xs) + self.g_prime(xs) * ys
        return u, ux, np.broadcast_to(g, u.shape).astype(float)


SmoothPiece = Union[AffinePiece, InitialPiece]


Coefficient = Union[float, np.ndarray]


def affine_jet(
    x0: Coefficient, y0: Coefficient, c0: Coefficient, c1: Coefficient, c2: Coefficient, xs: np.ndarray, ys: np.ndarray
) -> Partials:
    """Jet of c0 + c1·(x - x0) + c2·(y - y0). Coefficients may be arrays broadcasting against the points."""
    u = c0 + c1 * (np.asarray(xs, dtype=float) - x0) + c2 * (np.asarray(ys, dtype=float) - y0)
    return u, np.broadcast_to(c1, u.shape).astype(float), np.broadcast_to(c2, u.shape).astype(float)


def residual_of(F: Expr, xs: np.ndarray, ys: np.ndarray, jet: Partials) -> np.ndarray:
    """Tu = D_y u + F(x, y, u, D_x u) from a precomputed jet."""
    u, ux, uy = jet
    val = evaluate(F, {"x": xs, "y": ys, "u": u, "p": ux})
    return uy + np.broadcast_to(np.asarray(val, dtype=float), np.shape(u))


__all__ = ["AffinePiece", "InitialPiece", "SmoothPiece", "Partials", "affine_jet", "residual_of"]
