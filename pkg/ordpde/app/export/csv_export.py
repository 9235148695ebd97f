"""CSV artifacts: grid fields (`x,y,value`, row-major, 17 significant digits) and the decay table."""
from __future__ import annotations

from pathlib import Path
from typing import Sequence, Union

import numpy as np

from ordpde.app.baire.operators import GridFunction
from ordpde.app.core.geometry import SampleGrid
from ordpde.app.solver.convergence import DecayRow

GRID_HEADER = "x,y,value"
DECAY_COLUMNS = ("n", "epsilon", "delta", "sup_residual", "min_residual", "trace_error", "gamma_fraction")


def write_grid_csv(path: Union[str, Path], grid: SampleGrid, values: np.ndarray) -> Path:
    p = Path(path)
    X, Y = grid.mesh
    table = np.column_stack([X.ravel(), Y.ravel(), np.asarray(values, dtype=float).reshape(grid.shape).ravel()])
    np.savetxt(p, table, fmt="%.17g", delimiter=",", header=GRID_HEADER, comments="", newline="\n")
    return p


def write_grid_function_csv(path: Union[str, Path], v: GridFunction) -> Path:
    return write_grid_csv(path, v.grid, v.values)


def read_grid_csv(path: Union[str, Path]) -> np.ndarray:
    """(N, 3) array of x, y, value in file order."""
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def write_decay_csv(path: Union[str, Path], rows: Sequence[DecayRow]) -> Path:
    p = Path(path)
    table = np.array(
        [(r.n, r.epsilon, r.delta, r.sup_residual, r.min_residual, r.trace_error, r.gamma_fraction) for r in rows],
        dtype=float,
    ).reshape(-1, len(DECAY_COLUMNS))
    fmt = ["%d"] + ["%.17g"] * (len(DECAY_COLUMNS) - 1)
    np.savetxt(p, table, fmt=fmt, delimiter=",", header=",".join(DECAY_COLUMNS), comments="", newline="\n")
    return p


def read_decay_csv(path: Union[str, Path]) -> np.ndarray:
    return np.genfromtxt(path, delimiter=",", names=True, ndmin=1)


__all__ = [
    "GRID_HEADER",
    "DECAY_COLUMNS",
    "write_grid_csv",
    "write_grid_function_csv",
    "read_grid_csv",
    "write_decay_csv",
    "read_decay_csv",
]
