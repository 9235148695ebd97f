"""Problem files: flat `key = value` text parsed with python-dotenv and validated by pydantic.

    # advection
    F = "p"
    f = "sin(x)"
    a = 1
    b = 1
    N = 4
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, Optional, Union

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ordpde.app.config.solver_settings import SolverSettings, _validate_settings
from ordpde.app.core.geometry import Domain
from ordpde.app.dsl import Expr, F_VARIABLES, differentiate, f_VARIABLES, parse

logger = logging.getLogger(__name__)

DEFAULT_OUT_DIR = "results"


class ProblemSpecError(ValueError):
    pass


class ProblemSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    F: str = Field(..., min_length=1, description="F(x, y, u, p) with p = D_x u")
    f: str = Field(..., min_length=1, description="initial data f(x)")
    a: float = Field(..., gt=0)
    b: float = Field(..., gt=0)
    N: int = Field(..., ge=1)
    nx: Optional[int] = Field(default=None, ge=2)
    ny: Optional[int] = Field(default=None, ge=2)
    lattice_n: Optional[int] = Field(default=None, ge=8)
    max_halvings: Optional[int] = Field(default=None, ge=0)
    out: Optional[str] = None
    F_arity: Optional[int] = None

    @field_validator("F_arity")
    @classmethod
    def _four_arguments(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v != 4:
            raise ValueError(
                f"F_arity = {v} is not supported: F takes exactly (x, y, u, p); the five-argument "
                "form F(x, y, u, u, D_x u) repeats u and is read as a typo"
            )
        return v

    @property
    def out_dir(self) -> str:
        return self.out or DEFAULT_OUT_DIR


def load_problem_spec(path: Union[str, Path]) -> ProblemSpec:
    p = Path(path)
    if not p.is_file():
        raise ProblemSpecError(f"problem file not found: {p}")
    raw: Dict[str, Optional[str]] = dotenv_values(p, interpolate=False)
    missing_value = [k for k, v in raw.items() if v is None]
    if missing_value:
        raise ProblemSpecError(f"{p}: keys without a value: {', '.join(missing_value)}")
    logger.info("Loaded problem file %s (%d keys)", p, len(raw))
    return problem_spec_from_mapping(raw, source=str(p))


def problem_spec_from_mapping(values: Dict[str, Optional[str]], source: str = "<mapping>") -> ProblemSpec:
    try:
        return ProblemSpec.model_validate(values)
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(x) for x in err['loc']) or '<root>'}: {err['msg']}" for err in exc.errors()
        )
        raise ProblemSpecError(f"{source}: {problems}") from exc


@dataclass(frozen=True)
class CompiledProblem:
    spec: ProblemSpec
    F: Expr
    f: Expr
    fprime: Expr
    domain: Domain


def compile_problem(spec: ProblemSpec) -> CompiledProblem:
    """Parse F with {x, y, u, p} and f with {x}, and differentiate f.

    Raises the expression-language errors unchanged so callers can report offsets.
    """
    F = parse(spec.F, F_VARIABLES)
    f = parse(spec.f, f_VARIABLES)
    fprime = differentiate(f, "x")
    return CompiledProblem(spec, F, f, fprime, Domain(spec.a, spec.b))


def effective_settings(spec: ProblemSpec, settings: SolverSettings) -> SolverSettings:
    """Problem-file values override environment settings."""
    overrides = {}
    if spec.nx is not None:
        overrides["grid_nx"] = spec.nx
    if spec.ny is not None:
        overrides["grid_ny"] = spec.ny
    if spec.lattice_n is not None:
        overrides["lattice_n"] = spec.lattice_n
    if spec.max_halvings is not None:
        overrides["max_halvings"] = spec.max_halvings
    merged = replace(settings, **overrides)
    _validate_settings(merged)
    return merged


__all__ = [
    "ProblemSpec",
    "ProblemSpecError",
    "CompiledProblem",
    "DEFAULT_OUT_DIR",
    "load_problem_spec",
    "problem_spec_from_mapping",
    "compile_problem",
    "effective_settings",
]
