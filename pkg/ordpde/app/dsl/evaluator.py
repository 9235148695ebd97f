"""Vectorized evaluation of expression trees over numpy arrays."""
from __future__ import annotations

from typing import Mapping, Union

import numpy as np

from .nodes import Binary, Const, Expr, ExprEvaluationError, Unary, Var

ArrayLike = Union[float, np.ndarray]

_SAFE_UNARY = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "abs": np.abs,
}


def evaluate(e: Expr, env: Mapping[str, ArrayLike]) -> ArrayLike:
    """Evaluate `e` with variables bound by `env`.

    Values in `env` may be scalars or broadcast-compatible arrays. A scalar result is
    returned as a Python float. Division by zero, log of a nonpositive number and sqrt of
    a negative number raise `ExprEvaluationError` carrying the failing node.
    """
    with np.errstate(all="ignore"):
        out = _eval(e, env)
    if np.ndim(out) == 0:
        return float(out)
    return out


def _eval(e: Expr, env: Mapping[str, ArrayLike]) -> np.ndarray:
    if isinstance(e, Const):
        return np.asarray(e.value, dtype=float)
    if isinstance(e, Var):
        if e.name not in env:
            raise ExprEvaluationError(f"variable '{e.name}' is unbound", e)
        return np.asarray(env[e.name], dtype=float)
    if isinstance(e, Unary):
        arg = _eval(e.arg, env)
        if e.op == "neg":
            return -arg
        if e.op == "log":
            if np.any(arg <= 0):
                raise ExprEvaluationError("log of a nonpositive value", e)
            return np.log(arg)
        if e.op == "sqrt":
            if np.any(arg < 0):
                raise ExprEvaluationError("sqrt of a negative value", e)
            return np.sqrt(arg)
        return _SAFE_UNARY[e.op](arg)
    if isinstance(e, Binary):
        left = _eval(e.left, env)
        right = _eval(e.right, env)
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        if e.op == "*":
            return left * right
        if e.op == "/":
            if np.any(right == 0):
                raise ExprEvaluationError("division by zero", e)
            return left / right
        if e.op == "^":
            return left ** int(e.right.value)  # type: ignore[union-attr]
    raise ExprEvaluationError(f"unsupported node {type(e).__name__}", e)


__all__ = ["evaluate", "ArrayLike"]
