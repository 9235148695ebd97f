"""Problem-definition expression language: F(x, y, u, p) and f(x)."""
from .nodes import (
    BINARY_OPS,
    F_VARIABLES,
    FUNCTIONS,
    VARIABLES,
    Binary,
    Const,
    DisallowedVariableError,
    Expr,
    ExprArityError,
    ExprError,
    ExprEvaluationError,
    ExprSyntaxError,
    NondifferentiableError,
    Unary,
    Var,
    f_VARIABLES,
    free_variables,
)
from .evaluator import evaluate
from .parser import parse
from .printer import to_text
from .differentiate import differentiate

__all__ = [
    "BINARY_OPS",
    "F_VARIABLES",
    "FUNCTIONS",
    "VARIABLES",
    "Binary",
    "Const",
    "DisallowedVariableError",
    "Expr",
    "ExprArityError",
    "ExprError",
    "ExprEvaluationError",
    "ExprSyntaxError",
    "NondifferentiableError",
    "Unary",
    "Var",
    "f_VARIABLES",
    "free_variables",
    "evaluate",
    "parse",
    "to_text",
    "differentiate",
]
