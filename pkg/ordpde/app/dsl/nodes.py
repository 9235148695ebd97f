"""AST node types and error classes for the problem-definition expression language."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import FrozenSet, Optional, Union

VARIABLES: FrozenSet[str] = frozenset({"x", "y", "u", "p"})
F_VARIABLES: FrozenSet[str] = VARIABLES
f_VARIABLES: FrozenSet[str] = frozenset({"x"})

FUNCTIONS: FrozenSet[str] = frozenset({"sin", "cos", "exp", "log", "abs", "sqrt"})
BINARY_OPS: FrozenSet[str] = frozenset({"+", "-", "*", "/", "^"})


class ExprError(ValueError):
    """Base class for every expression-language failure."""


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class ExprArityError(ExprSyntaxError):
    pass


class DisallowedVariableError(ExprSyntaxError):
    def __init__(self, name: str, offset: int, allowed: FrozenSet[str]):
        allowed_txt = ", ".join(sorted(allowed)) or "none"
        super().__init__(f"identifier '{name}' is not allowed here (allowed: {allowed_txt})", offset)
        self.name = name


class ExprEvaluationError(ExprError, ArithmeticError):
    def __init__(self, message: str, node: "Expr"):
        super().__init__(f"{message} in '{_describe(node)}'")
        self.node = node
        self.reason = message


class NondifferentiableError(ExprError):
    pass


@dataclass(frozen=True)
class Const:
    value: float
    offset: Optional[int] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Var:
    name: str
    offset: Optional[int] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Unary:
    """`op` is "neg" or one of FUNCTIONS."""

    op: str
    arg: "Expr"
    offset: Optional[int] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    offset: Optional[int] = field(default=None, compare=False, repr=False)


Expr = Union[Const, Var, Unary, Binary]


def free_variables(e: Expr) -> FrozenSet[str]:
    if isinstance(e, Const):
        return frozenset()
    if isinstance(e, Var):
        return frozenset({e.name})
    if isinstance(e, Unary):
        return free_variables(e.arg)
    return free_variables(e.left) | free_variables(e.right)


def _describe(node: Expr) -> str:
    # Local import: the printer depends on this module.
    from .printer import to_text

    try:
        return to_text(node)
    except Exception:  # pragma: no cover - printing a malformed node
        return repr(node)


__all__ = [
    "Const",
    "Var",
    "Unary",
    "Binary",
    "Expr",
    "VARIABLES",
    "F_VARIABLES",
    "f_VARIABLES",
    "FUNCTIONS",
    "BINARY_OPS",
    "ExprError",
    "ExprSyntaxError",
    "ExprArityError",
    "DisallowedVariableError",
    "ExprEvaluationError",
    "NondifferentiableError",
    "free_variables",
]
