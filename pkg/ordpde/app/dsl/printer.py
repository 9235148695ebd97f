"""Canonical text rendering with minimal parentheses; `parse(to_text(e)) == e`."""
from __future__ import annotations

from .nodes import Binary, Const, Expr, Unary, Var

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}
_ATOM = 5


def _precedence(e: Expr) -> int:
    if isinstance(e, Binary):
        return _PREC[e.op]
    if isinstance(e, Unary):
        return _PREC["neg"] if e.op == "neg" else _ATOM
    if isinstance(e, Const) and e.value < 0:
        return _PREC["neg"]
    return _ATOM


def format_number(value: float) -> str:
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def to_text(e: Expr) -> str:
    if isinstance(e, Const):
        return format_number(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unary):
        if e.op == "neg":
            return "-" + _wrap(e.arg, _PREC["neg"], strict=False)
        return f"{e.op}({to_text(e.arg)})"
    prec = _PREC[e.op]
    if e.op == "^":
        return f"{_wrap(e.left, prec, strict=True)}^{to_text(e.right)}"
    left = _wrap(e.left, prec, strict=False)
    # all binary operators are left-associative
    right = _wrap(e.right, prec, strict=True)
    sep = f" {e.op} " if e.op in ("+", "-") else e.op
    return f"{left}{sep}{right}"


def _wrap(e: Expr, parent_prec: int, strict: bool) -> str:
    text = to_text(e)
    prec = _precedence(e)
    if prec < parent_prec or (strict and prec == parent_prec):
        return f"({text})"
    return text


__all__ = ["to_text", "format_number"]
