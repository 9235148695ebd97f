"""Finite initial adaptive δ-tilings of the closed rectangle [-a,a]×[-b,b].

Tiles are closed axis-aligned boxes. Structured tilings (the only kind the solver
builds) keep their column and row edges, which turns point location into two
`searchsorted` calls; hand-made box lists are accepted too, mainly for verification.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ordpde.app.core.geometry import SNAP_TOL, Domain

logger = logging.getLogger(__name__)


class SkeletonError(ValueError):
    pass


@dataclass(frozen=True)
class Box:
    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float

    @property
    def width(self) -> float:
        return self.x_hi - self.x_lo

    @property
    def height(self) -> float:
        return self.y_hi - self.y_lo

    @property
    def center(self) -> Tuple[float, float]:
        return 0.5 * (self.x_lo + self.x_hi), 0.5 * (self.y_lo + self.y_hi)

    def contains(self, x: float, y: float, tol: float = SNAP_TOL) -> bool:
        return self.x_lo - tol <= x <= self.x_hi + tol and self.y_lo - tol <= y <= self.y_hi + tol

    def exact_area(self) -> Fraction:
        return (Fraction(self.x_hi) - Fraction(self.x_lo)) * (Fraction(self.y_hi) - Fraction(self.y_lo))

    def meets_initial_line(self) -> bool:
        """True when the open box meets the segment y = 0."""
        return self.y_lo < 0.0 < self.y_hi


@dataclass(frozen=True)
class Tiling:
    domain: Domain
    delta: float
    tiles: Tuple[Box, ...]
    initial_row: Tuple[int, ...]
    x_edges: Optional[Tuple[float, ...]] = field(default=None, compare=False)
    y_edges: Optional[Tuple[float, ...]] = field(default=None, compare=False)

    @property
    def structured(self) -> bool:
        return self.x_edges is not None and self.y_edges is not None

    @property
    def n_cols(self) -> int:
        return len(self.x_edges) - 1 if self.x_edges is not None else 0

    @property
    def n_rows(self) -> int:
        return len(self.y_edges) - 1 if self.y_edges is not None else 0

    def __len__(self) -> int:
        return len(self.tiles)

    @cached_property
    def bounds(self) -> np.ndarray:
        """(T, 4) array of x_lo, x_hi, y_lo, y_hi."""
        return np.array([(t.x_lo, t.x_hi, t.y_lo, t.y_hi) for t in self.tiles], dtype=float).reshape(-1, 4)

    @cached_property
    def _x_edge_array(self) -> np.ndarray:
        return np.asarray(self.x_edges, dtype=float)

    @cached_property
    def _y_edge_array(self) -> np.ndarray:
        return np.asarray(self.y_edges, dtype=float)

    @property
    def min_tile_width(self) -> float:
        return float(np.min(self.bounds[:, 1] - self.bounds[:, 0]))

    @property
    def min_tile_height(self) -> float:
        return float(np.min(self.bounds[:, 3] - self.bounds[:, 2]))

    def containing_tiles(self, xs: np.ndarray, ys: np.ndarray, tol: float = SNAP_TOL) -> np.ndarray:
        """Indices of tiles whose closed box contains each point.

        Returns an int array of shape (4, N). A point inside one tile repeats that index;
        points outside every tile get -1 in all slots.
        """
        xs = np.asarray(xs, dtype=float).ravel()
        ys = np.asarray(ys, dtype=float).ravel()
        if self.structured:
            return self._structured_candidates(xs, ys, tol)
        return self._scan_candidates(xs, ys, tol)

    def _structured_candidates(self, xs: np.ndarray, ys: np.ndarray, tol: float) -> np.ndarray:
        xe, ye = self._x_edge_array, self._y_edge_array
        nc, nr = self.n_cols, self.n_rows
        c_lo = np.clip(np.searchsorted(xe, xs - tol, side="left") - 1, 0, nc - 1)
        c_hi = np.clip(np.searchsorted(xe, xs + tol, side="right") - 1, 0, nc - 1)
        r_lo = np.clip(np.searchsorted(ye, ys - tol, side="left") - 1, 0, nr - 1)
        r_hi = np.clip(np.searchsorted(ye, ys + tol, side="right") - 1, 0, nr - 1)
        out = np.stack([r_lo * nc + c_lo, r_lo * nc + c_hi, r_hi * nc + c_lo, r_hi * nc + c_hi])
        inside = self.domain.contains_many(xs, ys, tol)
        out[:, ~inside] = -1
        return out

    def _scan_candidates(self, xs: np.ndarray, ys: np.ndarray, tol: float) -> np.ndarray:
        out = np.full((4, xs.size), -1, dtype=np.intp)
        filled = np.zeros(xs.size, dtype=np.intp)
        for k, (x_lo, x_hi, y_lo, y_hi) in enumerate(self.bounds):
            hit = (xs >= x_lo - tol) & (xs <= x_hi + tol) & (ys >= y_lo - tol) & (ys <= y_hi + tol)
            hit &= filled < 4
            idx = np.nonzero(hit)[0]
            out[filled[idx], idx] = k
            filled[idx] += 1
        # Pad unused slots with the first hit so every slot is a real tile.
        for slot in range(1, 4):
            empty = (out[slot] < 0) & (out[0] >= 0)
            out[slot, empty] = out[0, empty]
        return out

    def owner(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return self.containing_tiles(xs, ys)[0]

    def boundary_distance(self, xs: np.ndarray, ys: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Per-axis distance from each point to the boundary of its owning tile."""
        xs = np.asarray(xs, dtype=float).ravel()
        ys = np.asarray(ys, dtype=float).ravel()
        own = self.owner(xs, ys)
        if np.any(own < 0):
            raise SkeletonError("boundary_distance called with points outside the domain")
        b = self.bounds[own]
        dx = np.minimum(np.abs(xs - b[:, 0]), np.abs(b[:, 1] - xs))
        dy = np.minimum(np.abs(ys - b[:, 2]), np.abs(b[:, 3] - ys))
        return dx, dy

    def crossings_of_initial_line(self) -> List[float]:
        """Sorted x-coordinates where y = 0 meets the tile boundaries."""
        xs = set()
        for k in self.initial_row:
            xs.add(self.tiles[k].x_lo)
            xs.add(self.tiles[k].x_hi)
        return sorted(xs)

    def to_text(self) -> str:
        lines = [f"# delta={self.delta!r} tiles={len(self.tiles)} initial_row={len(self.initial_row)}",
                 "tile\tx_lo\tx_hi\ty_lo\ty_hi"]
        for k, t in enumerate(self.tiles):
            lines.append(f"{k}\t{t.x_lo:.17g}\t{t.x_hi:.17g}\t{t.y_lo:.17g}\t{t.y_hi:.17g}")
        return "\n".join(lines) + "\n"


def _centred_edges(half: float, count: int) -> Tuple[float, ...]:
    width = 2.0 * half / count
    edges = [(k - count / 2.0) * width for k in range(count + 1)]
    edges[0], edges[-1] = -half, half
    return tuple(edges)


def tile_counts(domain: Domain, delta: float) -> Tuple[int, int]:
    """(columns, rows) of the uniform tiling with side <= delta/2 and an odd row count."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    side = delta / 2.0
    n_cols = max(1, math.ceil(2.0 * domain.a / side))
    n_rows = max(1, math.ceil(2.0 * domain.b / side))
    if n_rows % 2 == 0:
        n_rows += 1
    return n_cols, n_rows


def build_fiad_tiling(domain: Domain, delta: float) -> Tiling:
    """Uniform δ-tiling whose middle row is centred on y = 0."""
    n_cols, n_rows = tile_counts(domain, delta)
    x_edges = _centred_edges(domain.a, n_cols)
    y_edges = _centred_edges(domain.b, n_rows)
    tiles = []
    initial_row = []
    for r in range(n_rows):
        for c in range(n_cols):
            box = Box(x_edges[c], x_edges[c + 1], y_edges[r], y_edges[r + 1])
            if box.meets_initial_line():
                initial_row.append(len(tiles))
            tiles.append(box)
    logger.debug("Built tiling delta=%g cols=%d rows=%d", delta, n_cols, n_rows)
    return Tiling(domain, float(delta), tuple(tiles), tuple(initial_row), x_edges, y_edges)


def tiling_from_boxes(domain: Domain, delta: float, boxes: Sequence[Tuple[float, float, float, float]]) -> Tiling:
    tiles = tuple(Box(*map(float, b)) for b in boxes)
    initial_row = tuple(k for k, t in enumerate(tiles) if t.meets_initial_line())
    return Tiling(domain, float(delta), tiles, initial_row)


@dataclass(frozen=True)
class TilingViolation:
    condition: str  # nondegenerate | diameter | disjoint_interiors | covering | initial_line | initial_row
    tiles: Tuple[int, ...]
    detail: str = ""


@dataclass(frozen=True)
class TilingVerification:
    ok: bool
    violations: Tuple[TilingViolation, ...]

    def __bool__(self) -> bool:
        return self.ok


def verify_tiling(t: Tiling) -> TilingVerification:
    """Check every tiling condition exactly; list each violation with its tiles."""
    violations: List[TilingViolation] = []
    delta = Fraction(t.delta)
    a, b = Fraction(t.domain.a), Fraction(t.domain.b)

    degenerate = [k for k, box in enumerate(t.tiles) if not (box.x_lo < box.x_hi and box.y_lo < box.y_hi)]
    if degenerate:
        violations.append(TilingViolation("nondegenerate", tuple(degenerate), "tile with empty interior"))

    too_wide = [
        k
        for k, box in enumerate(t.tiles)
        if Fraction(box.x_hi) - Fraction(box.x_lo) >= delta or Fraction(box.y_hi) - Fraction(box.y_lo) >= delta
    ]
    if too_wide:
        violations.append(TilingViolation("diameter", tuple(too_wide), "per-coordinate extent must be < delta"))

    outside = [
        k
        for k, box in enumerate(t.tiles)
        if Fraction(box.x_lo) < -a or Fraction(box.x_hi) > a or Fraction(box.y_lo) < -b or Fraction(box.y_hi) > b
    ]
    overlapping = _overlapping_pairs(t)
    if overlapping:
        flat = tuple(sorted({k for pair in overlapping for k in pair}))
        violations.append(TilingViolation("disjoint_interiors", flat, f"{len(overlapping)} overlapping pair(s)"))

    area = sum((box.exact_area() for box in t.tiles if box.x_lo < box.x_hi and box.y_lo < box.y_hi), Fraction(0))
    if outside or area != 4 * a * b:
        violations.append(
            TilingViolation("covering", tuple(outside), f"tile area {float(area)!r} vs domain {float(4 * a * b)!r}")
        )

    on_line = [k for k, box in enumerate(t.tiles) if box.y_lo == 0.0 or box.y_hi == 0.0]
    if on_line:
        violations.append(TilingViolation("initial_line", tuple(on_line), "horizontal tile edge on y = 0"))

    expected_row = tuple(k for k, box in enumerate(t.tiles) if box.meets_initial_line())
    if expected_row != tuple(t.initial_row):
        violations.append(TilingViolation("initial_row", tuple(sorted(set(expected_row) ^ set(t.initial_row)))))

    return TilingVerification(not violations, tuple(violations))


def _overlapping_pairs(t: Tiling) -> List[Tuple[int, int]]:
    if t.structured and _matches_edges(t):
        return []
    bnd = t.bounds
    pairs: List[Tuple[int, int]] = []
    for k in range(len(t.tiles) - 1):
        rest = bnd[k + 1 :]
        hit = (
            (np.maximum(bnd[k, 0], rest[:, 0]) < np.minimum(bnd[k, 1], rest[:, 1]))
            & (np.maximum(bnd[k, 2], rest[:, 2]) < np.minimum(bnd[k, 3], rest[:, 3]))
        )
        pairs.extend((k, k + 1 + int(j)) for j in np.nonzero(hit)[0])
    return pairs


def _matches_edges(t: Tiling) -> bool:
    """A structured tiling whose boxes are exactly its edge-grid cells has disjoint interiors."""
    xe, ye = t.x_edges, t.y_edges
    assert xe is not None and ye is not None
    if any(xe[i] >= xe[i + 1] for i in range(len(xe) - 1)) or any(ye[i] >= ye[i + 1] for i in range(len(ye) - 1)):
        return False
    nc = len(xe) - 1
    if len(t.tiles) != nc * (len(ye) - 1):
        return False
    for k, box in enumerate(t.tiles):
        r, c = divmod(k, nc)
        if (box.x_lo, box.x_hi, box.y_lo, box.y_hi) != (xe[c], xe[c + 1], ye[r], ye[r + 1]):
            return False
    return True


def adjacency(t: Tiling, x: float, y: float) -> List[int]:
    """Tiles whose closed box contains a skeleton point (2 on an edge, up to 4 at a corner)."""
    t.domain.require(x, y)
    hits = sorted({int(k) for k in t.containing_tiles(np.array([x]), np.array([y]))[:, 0] if k >= 0})
    if len(hits) == 1:
        box = t.tiles[hits[0]]
        on_boundary = (
            min(abs(x - box.x_lo), abs(x - box.x_hi)) <= SNAP_TOL
            or min(abs(y - box.y_lo), abs(y - box.y_hi)) <= SNAP_TOL
        )
        if not on_boundary:
            raise SkeletonError(f"point ({x}, {y}) is interior to tile {hits[0]}, not on the skeleton")
    return hits


__all__ = [
    "Box",
    "Tiling",
    "TilingViolation",
    "TilingVerification",
    "SkeletonError",
    "build_fiad_tiling",
    "tiling_from_boxes",
    "tile_counts",
    "verify_tiling",
    "adjacency",
]
