"""Baire envelope operators.

Two forms are provided. On grids, the lower operator I is a clipped square-stencil
minimum (grey erosion) and the upper operator S the matching maximum (grey dilation).
On TiledFunction interfaces the exact rule is `interface_value`: the minimum of the
adjacent one-sided limits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np
from scipy.ndimage import maximum_filter, minimum_filter

from ordpde.app.core.extended import ExtendedReal
from ordpde.app.core.geometry import SampleGrid


class InterfaceRuleError(ValueError):
    pass


@dataclass(frozen=True)
class GridFunction:
    """One extended-real value per grid node, stored as a read-only (ny+1, nx+1) array."""

    grid: SampleGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=float, copy=True)
        if arr.shape != self.grid.shape:
            if arr.size != self.grid.node_count:
                raise ValueError(f"expected {self.grid.node_count} values, got {arr.size}")
            arr = arr.reshape(self.grid.shape)
        if np.isnan(arr).any():
            raise ValueError("GridFunction values must be comparable (NaN found)")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @classmethod
    def from_callable(cls, grid: SampleGrid, fn: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> "GridFunction":
        X, Y = grid.mesh
        return cls(grid, np.broadcast_to(fn(X, Y), grid.shape))

    @classmethod
    def constant(cls, grid: SampleGrid, value: float) -> "GridFunction":
        return cls(grid, np.full(grid.shape, float(value)))

    def at(self, j: int, i: int) -> ExtendedReal:
        return ExtendedReal(float(self.values[j, i]))

    def with_values(self, values: np.ndarray) -> "GridFunction":
        return GridFunction(self.grid, values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GridFunction):
            return NotImplemented
        return self.grid.same_as(other.grid) and np.array_equal(self.values, other.values)

    __hash__ = None  # type: ignore[assignment]


def _check_radius(radius: int) -> int:
    if int(radius) != radius or radius < 1:
        raise ValueError(f"stencil radius must be a positive integer, got {radius}")
    return int(radius)


def lower_baire(v: GridFunction, radius: int = 1) -> GridFunction:
    """Minimum over the (2r+1)² stencil, clipped at the grid edge."""
    size = 2 * _check_radius(radius) + 1
    return v.with_values(minimum_filter(v.values, size=size, mode="nearest"))


def upper_baire(v: GridFunction, radius: int = 1) -> GridFunction:
    """Maximum over the (2r+1)² stencil, clipped at the grid edge."""
    size = 2 * _check_radius(radius) + 1
    return v.with_values(maximum_filter(v.values, size=size, mode="nearest"))


def nlsc_regularize(v: GridFunction) -> GridFunction:
    """Discrete I∘S: dilate by 1, erode by 2, dilate by 1.

    The erosion is wider than either dilation so one-node artifacts of either sign are
    removed; the result is a fixed point of this map on the whole grid.
    """
    return upper_baire(lower_baire(upper_baire(v, 1), 2), 1)


def interior_mask(grid: SampleGrid, margin: int = 2) -> np.ndarray:
    return grid.edge_distance() >= margin


def is_normal_lsc(v: GridFunction, margin: int = 2) -> Tuple[bool, List[Tuple[int, int]]]:
    """Whether v is fixed by nlsc_regularize at nodes at least `margin` cells inside.

    Returns the verdict and the offending (j, i) nodes.
    """
    w = nlsc_regularize(v)
    bad = (w.values != v.values) & interior_mask(v.grid, margin)
    offending = [(int(j), int(i)) for j, i in zip(*np.nonzero(bad))]
    return not offending, offending


def interface_value(limits: Sequence[float]) -> float:
    """Regularized value on Γ from the one-sided limits of the adjacent pieces."""
    if len(limits) == 0:
        raise InterfaceRuleError("interface_value needs at least one one-sided limit")
    values = [float(x) for x in limits]
    if not all(math.isfinite(x) for x in values):
        raise InterfaceRuleError(f"one-sided limits must be finite, got {values}")
    return min(values)


__all__ = [
    "GridFunction",
    "InterfaceRuleError",
    "lower_baire",
    "upper_baire",
    "nlsc_regularize",
    "is_normal_lsc",
    "interface_value",
    "interior_mask",
]
