"""Recursive-descent parser for the expression language (grammar in docs/EXPR_GRAMMAR.md).

Precedence, loosest first: `+ -` (left), `* /` (left), unary `-`, `^` (right, integer
exponent). Every error carries the 0-based byte offset of the offending token.
"""
from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional

from .evaluator import evaluate
from .nodes import (
    FUNCTIONS,
    VARIABLES,
    Binary,
    Const,
    DisallowedVariableError,
    Expr,
    ExprArityError,
    ExprSyntaxError,
    Unary,
    Var,
    free_variables,
)

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)

NAMED_CONSTANTS = {"pi": math.pi}


@dataclass(frozen=True)
class Token:
    kind: str  # number | ident | op | end
    text: str
    offset: int  # byte offset


def _byte_offset(text: str, char_index: int) -> int:
    return len(text[:char_index].encode("utf-8"))


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos))
        kind = m.lastgroup or ""
        if kind != "ws":
            tokens.append(Token(kind, m.group(), _byte_offset(text, pos)))
        pos = m.end()
    tokens.append(Token("end", "", _byte_offset(text, len(text))))
    return tokens


class _Parser:
    def __init__(self, text: str, allowed: FrozenSet[str]):
        self.tokens = tokenize(text)
        self.pos = 0
        self.allowed = allowed

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def at_op(self, *ops: str) -> bool:
        return self.current.kind == "op" and self.current.text in ops

    def expect_op(self, op: str) -> Token:
        if not self.at_op(op):
            found = self.current.text or "end of input"
            raise ExprSyntaxError(f"expected '{op}', found '{found}'", self.current.offset)
        return self.advance()

    def parse(self) -> Expr:
        if self.current.kind == "end":
            raise ExprSyntaxError("empty expression", self.current.offset)
        node = self.expr()
        if self.current.kind != "end":
            raise ExprSyntaxError(f"unexpected '{self.current.text}'", self.current.offset)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.at_op("+", "-"):
            op = self.advance()
            node = Binary(op.text, node, self.term(), offset=op.offset)
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.at_op("*", "/"):
            op = self.advance()
            node = Binary(op.text, node, self.unary(), offset=op.offset)
        return node

    def unary(self) -> Expr:
        if self.at_op("-"):
            op = self.advance()
            return Unary("neg", self.unary(), offset=op.offset)
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if not self.at_op("^"):
            return base
        op = self.advance()
        exp_start = self.current.offset
        exponent = self.unary()
        return Binary("^", base, Const(_integer_exponent(exponent, exp_start)), offset=op.offset)

    def atom(self) -> Expr:
        tok = self.current
        if tok.kind == "number":
            self.advance()
            return Const(float(tok.text), offset=tok.offset)
        if tok.kind == "ident":
            return self.identifier()
        if self.at_op("("):
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        found = tok.text or "end of input"
        raise ExprSyntaxError(f"expected a number, variable, function or '(', found '{found}'", tok.offset)

    def identifier(self) -> Expr:
        tok = self.advance()
        name = tok.text
        if self.at_op("("):
            if name not in FUNCTIONS:
                raise ExprSyntaxError(f"unknown function '{name}'", tok.offset)
            self.advance()
            args: List[Expr] = []
            if not self.at_op(")"):
                args.append(self.expr())
                while self.at_op(","):
                    self.advance()
                    args.append(self.expr())
            self.expect_op(")")
            if len(args) != 1:
                raise ExprArityError(f"function '{name}' takes 1 argument, got {len(args)}", tok.offset)
            return Unary(name, args[0], offset=tok.offset)
        if name in FUNCTIONS:
            raise ExprArityError(f"function '{name}' must be called with one argument", tok.offset)
        if name in NAMED_CONSTANTS:
            return Const(NAMED_CONSTANTS[name], offset=tok.offset)
        if name not in self.allowed:
            raise DisallowedVariableError(name, tok.offset, self.allowed)
        return Var(name, offset=tok.offset)


def _integer_exponent(node: Expr, offset: int) -> float:
    if free_variables(node):
        raise ExprSyntaxError("exponent must not contain variables", offset)
    value = float(evaluate(node, {}))
    if not math.isfinite(value) or value < 0 or value != int(value):
        raise ExprSyntaxError(f"exponent must be a nonnegative integer, got {value:g}", offset)
    return float(int(value))


def parse(text: str, allowed_vars: Optional[Iterable[str]] = None) -> Expr:
    """Parse `text` into an Expr, accepting only identifiers in `allowed_vars`."""
    allowed = frozenset(VARIABLES if allowed_vars is None else allowed_vars)
    unknown = allowed - VARIABLES
    if unknown:
        raise ValueError(f"unsupported variable names: {sorted(unknown)}")
    node = _Parser(text, allowed).parse()
    logger.debug("Parsed %r -> %r", text, node)
    return node


__all__ = ["parse", "tokenize", "Token", "NAMED_CONSTANTS"]
