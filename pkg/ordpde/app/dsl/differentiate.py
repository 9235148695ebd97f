"""Symbolic differentiation with light algebraic simplification."""
from __future__ import annotations

from .nodes import Binary, Const, Expr, NondifferentiableError, Unary, Var, free_variables

ZERO = Const(0.0)
ONE = Const(1.0)


def _is_const(e: Expr, value: float) -> bool:
    return isinstance(e, Const) and e.value == value


def add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    if isinstance(b, Unary) and b.op == "neg":
        return sub(a, b.arg)
    return Binary("+", a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return neg(b)
    return Binary("-", a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return ZERO
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    if isinstance(b, Const):
        a, b = b, a
    if isinstance(a, Unary) and a.op == "neg":
        return neg(mul(a.arg, b))
    if isinstance(b, Unary) and b.op == "neg":
        return neg(mul(a, b.arg))
    return Binary("*", a, b)


def div(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const) and b.value != 0.0:
        return Const(a.value / b.value)
    if _is_const(a, 0.0):
        return ZERO
    if _is_const(b, 1.0):
        return a
    return Binary("/", a, b)


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value) if a.value != 0.0 else ZERO
    if isinstance(a, Unary) and a.op == "neg":
        return a.arg
    return Unary("neg", a)


def power(a: Expr, n: int) -> Expr:
    if n == 0:
        return ONE
    if n == 1:
        return a
    if isinstance(a, Const):
        return Const(a.value**n)
    return Binary("^", a, Const(float(n)))


def func(name: str, a: Expr) -> Expr:
    return Unary(name, a)


def differentiate(e: Expr, var: str) -> Expr:
    """d e / d var. Raises NondifferentiableError if `abs` encloses `var`."""
    if var not in free_variables(e):
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Unary):
        a = e.arg
        da = differentiate(a, var)
        if e.op == "neg":
            return neg(da)
        if e.op == "sin":
            return mul(func("cos", a), da)
        if e.op == "cos":
            return mul(neg(func("sin", a)), da)
        if e.op == "exp":
            return mul(func("exp", a), da)
        if e.op == "log":
            return div(da, a)
        if e.op == "sqrt":
            return div(da, mul(Const(2.0), func("sqrt", a)))
        if e.op == "abs":
            raise NondifferentiableError(f"abs(...) is not differentiable with respect to '{var}'")
        raise NondifferentiableError(f"unknown function '{e.op}'")
    assert isinstance(e, Binary)
    left, right = e.left, e.right
    if e.op == "^":
        n = int(right.value)  # type: ignore[union-attr]
        return mul(mul(Const(float(n)), power(left, n - 1)), differentiate(left, var))
    dl = differentiate(left, var)
    dr = differentiate(right, var)
    if e.op == "+":
        return add(dl, dr)
    if e.op == "-":
        return sub(dl, dr)
    if e.op == "*":
        return add(mul(dl, right), mul(left, dr))
    if e.op == "/":
        if var not in free_variables(right):
            return div(dl, right)
        return div(sub(mul(dl, right), mul(left, dr)), power(right, 2))
    raise NondifferentiableError(f"unknown operator '{e.op}'")


__all__ = ["differentiate", "add", "sub", "mul", "div", "neg", "power"]
