"""Rectangular domain Ω = (-a,a)×(-b,b) and the sampling grids laid over its closure."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING, Tuple

import numpy as np

if TYPE_CHECKING:
    from ordpde.app.tiling.fiad import Tiling

# Absolute tolerance for "this coordinate lies on a tile edge / the domain edge".
SNAP_TOL = 1e-12


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class Domain:
    a: float
    b: float

    def __post_init__(self) -> None:
        if not (self.a > 0 and self.b > 0):
            raise DomainError(f"domain half-widths must be positive, got a={self.a}, b={self.b}")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))

    @property
    def area(self) -> float:
        return 4.0 * self.a * self.b

    def contains(self, x: float, y: float, tol: float = SNAP_TOL) -> bool:
        """Membership in the closure [-a,a]×[-b,b]."""
        return abs(x) <= self.a + tol and abs(y) <= self.b + tol

    def contains_many(self, xs: np.ndarray, ys: np.ndarray, tol: float = SNAP_TOL) -> np.ndarray:
        return (np.abs(xs) <= self.a + tol) & (np.abs(ys) <= self.b + tol)

    def require(self, x: float, y: float) -> None:
        if not self.contains(x, y):
            raise DomainError(f"point ({x}, {y}) lies outside [-{self.a},{self.a}]x[-{self.b},{self.b}]")


@dataclass(frozen=True)
class SampleGrid:
    """Uniform node set {(-a + i*hx, -b + j*hy)}, i = 0..nx, j = 0..ny.

    Arrays over the grid have shape (ny+1, nx+1) and are indexed [j, i]; flattening them
    gives the row-major node enumeration.
    """

    domain: Domain
    nx: int
    ny: int

    def __post_init__(self) -> None:
        if int(self.nx) != self.nx or int(self.ny) != self.ny:
            raise ValueError("grid cell counts must be integers")
        if self.nx < 2 or self.ny < 2:
            raise ValueError(f"grid needs nx, ny >= 2, got {self.nx}x{self.ny}")

    @property
    def hx(self) -> float:
        return 2.0 * self.domain.a / self.nx

    @property
    def hy(self) -> float:
        return 2.0 * self.domain.b / self.ny

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.ny + 1, self.nx + 1)

    @property
    def node_count(self) -> int:
        return (self.nx + 1) * (self.ny + 1)

    @cached_property
    def xs(self) -> np.ndarray:
        return np.linspace(-self.domain.a, self.domain.a, self.nx + 1)

    @cached_property
    def ys(self) -> np.ndarray:
        return np.linspace(-self.domain.b, self.domain.b, self.ny + 1)

    @cached_property
    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        X, Y = np.meshgrid(self.xs, self.ys)
        return X, Y

    def node(self, j: int, i: int) -> Tuple[float, float]:
        return float(self.xs[i]), float(self.ys[j])

    def edge_distance(self) -> np.ndarray:
        """Distance of each node to the grid edge, counted in cells (Chebyshev)."""
        J, I = np.indices(self.shape)
        return np.minimum.reduce([I, J, self.nx - I, self.ny - J])

    def same_as(self, other: "SampleGrid") -> bool:
        return self.domain == other.domain and self.nx == other.nx and self.ny == other.ny


def gamma_mask(grid: SampleGrid, tiling: "Tiling") -> np.ndarray:
    """Nodes lying on the skeleton (tile boundaries, domain edge included)."""
    X, Y = grid.mesh
    dx, dy = tiling.boundary_distance(X, Y)
    return ((dx <= SNAP_TOL) | (dy <= SNAP_TOL)).reshape(grid.shape)


def gamma_proximity_mask(grid: SampleGrid, tiling: "Tiling") -> np.ndarray:
    """Nodes within one grid cell of the skeleton; the grid's stand-in for a null set around Γ."""
    X, Y = grid.mesh
    dx, dy = tiling.boundary_distance(X, Y)
    return ((dx < grid.hx - SNAP_TOL) | (dy < grid.hy - SNAP_TOL)).reshape(grid.shape)


def gamma_node_fraction(grid: SampleGrid, tiling: "Tiling") -> float:
    return float(np.mean(gamma_proximity_mask(grid, tiling)))


__all__ = [
    "Domain",
    "SampleGrid",
    "DomainError",
    "SNAP_TOL",
    "gamma_mask",
    "gamma_proximity_mask",
    "gamma_node_fraction",
]
