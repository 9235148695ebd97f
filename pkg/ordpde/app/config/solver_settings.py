"""Solver settings and environment loading.

Provides a single, validated configuration surface for the δ-search, the certification
lattice, the evaluation grid and the worker pool. Problem files override these values
(see `ordpde.utils.problem_utils`). This module only parses and validates; the pipeline
itself lives in `ordpde.app.solver`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional
import os

LATTICE_DEFAULT = 16
SAMPLES_PER_TILE_DEFAULT = 8
MAX_HALVINGS_DEFAULT = 40
MAX_TILES_DEFAULT = 250_000
GRID_DEFAULT = 256
EQUIV_TOL_DEFAULT = 1e-9


@dataclass(frozen=True)
class SolverSettings:
    # δ-search
    lattice_n: int = LATTICE_DEFAULT
    samples_per_tile: int = SAMPLES_PER_TILE_DEFAULT
    max_halvings: int = MAX_HALVINGS_DEFAULT
    max_tiles: int = MAX_TILES_DEFAULT
    initial_delta: Optional[float] = None  # None -> 2*max(a, b)

    # Evaluation grid for reports
    grid_nx: int = GRID_DEFAULT
    grid_ny: int = GRID_DEFAULT

    # Worker pool (0 = one worker per CPU)
    threads: int = 0

    # Output
    write_svg: bool = False
    equivalence_tol: float = EQUIV_TOL_DEFAULT

    def worker_count(self) -> int:
        if self.threads > 0:
            return self.threads
        return max(1, os.cpu_count() or 1)

    def starting_delta(self, a: float, b: float) -> float:
        if self.initial_delta is not None:
            return self.initial_delta
        return 2.0 * max(a, b)


def _env_bool(name: str, default: bool) -> bool:
    return os.getenv(name, str(default)).lower() in {"1", "true", "yes", "on"}


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name, "").strip()
    return int(raw) if raw else default


def load_solver_settings() -> SolverSettings:
    raw_delta = os.getenv("ORDPDE_INITIAL_DELTA", "").strip()
    settings = SolverSettings(
        lattice_n=_env_int("ORDPDE_LATTICE_N", LATTICE_DEFAULT),
        samples_per_tile=_env_int("ORDPDE_SAMPLES_PER_TILE", SAMPLES_PER_TILE_DEFAULT),
        max_halvings=_env_int("ORDPDE_MAX_HALVINGS", MAX_HALVINGS_DEFAULT),
        max_tiles=_env_int("ORDPDE_MAX_TILES", MAX_TILES_DEFAULT),
        initial_delta=float(raw_delta) if raw_delta else None,
        grid_nx=_env_int("ORDPDE_GRID_NX", GRID_DEFAULT),
        grid_ny=_env_int("ORDPDE_GRID_NY", GRID_DEFAULT),
        threads=_env_int("ORDPDE_THREADS", 0),
        write_svg=_env_bool("ORDPDE_SVG", False),
        equivalence_tol=float(os.getenv("ORDPDE_EQUIV_TOL", str(EQUIV_TOL_DEFAULT))),
    )
    _validate_settings(settings)
    return settings


def _validate_settings(s: SolverSettings) -> None:
    errors = []
    if s.lattice_n < 8:
        errors.append("ORDPDE_LATTICE_N must be >= 8")
    if s.samples_per_tile < 2:
        errors.append("ORDPDE_SAMPLES_PER_TILE must be >= 2")
    if s.max_halvings < 0:
        errors.append("ORDPDE_MAX_HALVINGS must be >= 0")
    if s.max_tiles < 1:
        errors.append("ORDPDE_MAX_TILES must be >= 1")
    if s.initial_delta is not None and not s.initial_delta > 0:
        errors.append("ORDPDE_INITIAL_DELTA must be positive")
    if s.grid_nx < 2 or s.grid_ny < 2:
        errors.append("ORDPDE_GRID_NX/NY must be >= 2")
    if s.threads < 0:
        errors.append("ORDPDE_THREADS must be >= 0 (0 = auto)")
    if not s.equivalence_tol > 0:
        errors.append("ORDPDE_EQUIV_TOL must be positive")
    if errors:
        raise ValueError("SolverSettings validation errors: " + ", ".join(errors))
