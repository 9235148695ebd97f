"""Method of characteristics for quasilinear problems D_y u + A(x,y,u)·D_x u = B(x,y,u).

Characteristics dx/dy = A, du/dy = B start at (x0, 0, f(x0)) and are integrated with
classical RK4, forward and backward in y with step hy. Each grid row is then resampled
from the characteristic positions with a cubic spline. A row whose characteristic
positions are no longer strictly increasing marks the first crossing (a shock); that row
and every row beyond it are excluded.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from ordpde.app.baire.operators import GridFunction
from ordpde.app.core.geometry import SampleGrid
from ordpde.app.dsl import Binary, Const, Expr, Unary, Var, evaluate, free_variables, to_text
from ordpde.app.dsl.differentiate import add, div, mul, neg, sub

logger = logging.getLogger(__name__)


class NotQuasilinearError(ValueError):
    pass


class CharacteristicsBlowUpError(RuntimeError):
    def __init__(self, y: float, x0: float):
        super().__init__(f"characteristic from x0={x0:g} became non-finite at y={y:g}")
        self.y = y
        self.x0 = x0


@dataclass(frozen=True)
class QuasilinearForm:
    """F = A(x, y, u)·p - B(x, y, u)."""

    A: Expr
    B: Expr

    def __post_init__(self) -> None:
        for name, e in (("A", self.A), ("B", self.B)):
            if "p" in free_variables(e):
                raise NotQuasilinearError(f"{name} must not depend on p")

    def describe(self) -> str:
        return f"D_y u + ({to_text(self.A)}) D_x u = {to_text(self.B)}"


# -------------------- Structural recognition --------------------
def _split_p(e: Expr) -> Tuple[Expr, Expr]:
    """(c, r) with e = c·p + r and both c, r free of p; raise if e is not affine in p."""
    if "p" not in free_variables(e):
        return Const(0.0), e
    if isinstance(e, Var):
        return Const(1.0), Const(0.0)
    if isinstance(e, Unary) and e.op == "neg":
        c, r = _split_p(e.arg)
        return neg(c), neg(r)
    if isinstance(e, Binary):
        if e.op in ("+", "-"):
            c1, r1 = _split_p(e.left)
            c2, r2 = _split_p(e.right)
            combine = add if e.op == "+" else sub
            return combine(c1, c2), combine(r1, r2)
        in_left = "p" in free_variables(e.left)
        in_right = "p" in free_variables(e.right)
        if e.op == "*" and not (in_left and in_right):
            if in_left:
                c, r = _split_p(e.left)
                return mul(c, e.right), mul(r, e.right)
            c, r = _split_p(e.right)
            return mul(e.left, c), mul(e.left, r)
        if e.op == "/" and not in_right:
            c, r = _split_p(e.left)
            return div(c, e.right), div(r, e.right)
        if e.op == "^" and isinstance(e.right, Const) and e.right.value in (0.0, 1.0):
            return _split_p(e.left) if e.right.value == 1.0 else (Const(0.0), Const(1.0))
    raise NotQuasilinearError(f"'{to_text(e)}' is not linear in p")


def recognize_quasilinear(F: Expr) -> QuasilinearForm:
    """Match F = A(x,y,u)·p - B(x,y,u) structurally."""
    try:
        A, rest = _split_p(F)
    except NotQuasilinearError as exc:
        raise NotQuasilinearError(f"F = {to_text(F)} is not quasilinear: {exc}") from exc
    return QuasilinearForm(A, neg(rest))


# -------------------- Integration --------------------
@dataclass(frozen=True)
class CharacteristicsResult:
    field: GridFunction
    valid: np.ndarray  # bool, grid-shaped; False outside the fan, beyond y_max, and at/after a crossing
    shock: bool
    shock_y: Optional[float]
    y_max: float


def _rhs(q: QuasilinearForm, y: float, X: np.ndarray, U: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    env = {"x": X, "y": y, "u": U}
    dX = np.broadcast_to(np.asarray(evaluate(q.A, env), dtype=float), X.shape)
    dU = np.broadcast_to(np.asarray(evaluate(q.B, env), dtype=float), X.shape)
    return dX, dU


def _rk4_step(q: QuasilinearForm, y: float, h: float, X: np.ndarray, U: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    k1x, k1u = _rhs(q, y, X, U)
    k2x, k2u = _rhs(q, y + h / 2, X + h / 2 * k1x, U + h / 2 * k1u)
    k3x, k3u = _rhs(q, y + h / 2, X + h / 2 * k2x, U + h / 2 * k2u)
    k4x, k4u = _rhs(q, y + h, X + h * k3x, U + h * k3u)
    return X + h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x), U + h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u)


def _start_nodes(q: QuasilinearForm, f: Expr, grid: SampleGrid, y_max: float) -> np.ndarray:
    xs = grid.xs
    fx = np.broadcast_to(np.asarray(evaluate(f, {"x": xs}), dtype=float), xs.shape)
    speed = np.broadcast_to(np.asarray(evaluate(q.A, {"x": xs, "y": 0.0, "u": fx}), dtype=float), xs.shape)
    max_speed = float(np.max(np.abs(speed))) if np.all(np.isfinite(speed)) else 0.0
    margin = math.ceil(2.0 * y_max * max_speed / grid.hx) + 4
    k = np.arange(-margin, grid.nx + 1 + margin)
    return -grid.domain.a + k * grid.hx


def characteristics_solve(q: QuasilinearForm, f: Expr, grid: SampleGrid, y_max: Optional[float] = None) -> CharacteristicsResult:
    b = grid.domain.b
    y_max = b if y_max is None else float(y_max)
    if not 0 < y_max <= b + 1e-12:
        raise ValueError(f"y_max must lie in (0, b={b}], got {y_max}")
    if grid.ny % 2:
        raise ValueError("the characteristics oracle needs an even ny so that y = 0 is a grid row")

    j0 = grid.ny // 2
    values = np.zeros(grid.shape)
    valid = np.zeros(grid.shape, dtype=bool)
    X0 = _start_nodes(q, f, grid, y_max)
    U0 = np.broadcast_to(np.asarray(evaluate(f, {"x": X0}), dtype=float), X0.shape).copy()

    fx = np.broadcast_to(np.asarray(evaluate(f, {"x": grid.xs}), dtype=float), grid.xs.shape)
    values[j0] = fx
    valid[j0] = True

    shock_y: Optional[float] = None
    for direction in (1, -1):
        X, U = X0.copy(), U0.copy()
        y = 0.0
        j = j0
        h = direction * grid.hy
        while True:
            j += direction
            if j < 0 or j > grid.ny:
                break
            y_next = float(grid.ys[j])
            if abs(y_next) > y_max + 1e-12:
                break
            X, U = _rk4_step(q, y, h, X, U)
            y = y_next
            if not (np.all(np.isfinite(X)) and np.all(np.isfinite(U))):
                bad = int(np.nonzero(~(np.isfinite(X) & np.isfinite(U)))[0][0])
                raise CharacteristicsBlowUpError(y, float(X0[bad]))
            if np.any(np.diff(X) <= 0.0):
                if shock_y is None or abs(y) < abs(shock_y):
                    shock_y = y
                logger.info("Characteristics cross at y=%g", y)
                break
            covered = (grid.xs >= X[0]) & (grid.xs <= X[-1])
            spline = CubicSpline(X, U)
            values[j, covered] = spline(grid.xs[covered])
            valid[j] = covered

    field = GridFunction(grid, values)
    return CharacteristicsResult(field, valid, shock_y is not None, shock_y, y_max)


__all__ = [
    "QuasilinearForm",
    "NotQuasilinearError",
    "CharacteristicsBlowUpError",
    "CharacteristicsResult",
    "recognize_quasilinear",
    "characteristics_solve",
]
