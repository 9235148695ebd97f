"""Extended real line: the reals together with +inf and -inf."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Union

Number = Union[int, float]


class ExtendedArithmeticError(ArithmeticError):
    pass


@total_ordering
@dataclass(frozen=True)
class ExtendedReal:
    """A value of the extended real line.

    Ordering, `min` and `max` are total. Arithmetic is only defined between finite
    values; anything else raises `ExtendedArithmeticError`.
    """

    value: float

    def __post_init__(self) -> None:
        v = float(self.value)
        if math.isnan(v):
            raise ValueError("ExtendedReal cannot hold NaN")
        object.__setattr__(self, "value", v)

    @classmethod
    def pos_inf(cls) -> "ExtendedReal":
        return cls(math.inf)

    @classmethod
    def neg_inf(cls) -> "ExtendedReal":
        return cls(-math.inf)

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.value)

    def __float__(self) -> float:
        return self.value

    def __lt__(self, other: object) -> bool:
        return self.value < _as_float(other)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (ExtendedReal, int, float)):
            return self.value == _as_float(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.value)

    def _finite_operands(self, other: object, op: str) -> tuple:
        rhs = _as_float(other)
        if not (math.isfinite(self.value) and math.isfinite(rhs)):
            raise ExtendedArithmeticError(f"'{op}' is undefined for infinite operands ({self.value}, {rhs})")
        return self.value, rhs

    def __add__(self, other: object) -> "ExtendedReal":
        lhs, rhs = self._finite_operands(other, "+")
        return ExtendedReal(lhs + rhs)

    __radd__ = __add__

    def __sub__(self, other: object) -> "ExtendedReal":
        lhs, rhs = self._finite_operands(other, "-")
        return ExtendedReal(lhs - rhs)

    def __rsub__(self, other: object) -> "ExtendedReal":
        lhs, rhs = self._finite_operands(other, "-")
        return ExtendedReal(rhs - lhs)

    def __mul__(self, other: object) -> "ExtendedReal":
        lhs, rhs = self._finite_operands(other, "*")
        return ExtendedReal(lhs * rhs)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "ExtendedReal":
        lhs, rhs = self._finite_operands(other, "/")
        if rhs == 0.0:
            raise ExtendedArithmeticError("division by zero")
        return ExtendedReal(lhs / rhs)

    def __neg__(self) -> "ExtendedReal":
        return ExtendedReal(-self.value)

    def __repr__(self) -> str:
        if self.value == math.inf:
            return "ExtendedReal(+inf)"
        if self.value == -math.inf:
            return "ExtendedReal(-inf)"
        return f"ExtendedReal({self.value!r})"


def _as_float(other: object) -> float:
    if isinstance(other, ExtendedReal):
        return other.value
    if isinstance(other, (int, float)):
        v = float(other)
        if math.isnan(v):
            raise ValueError("NaN is not an extended real")
        return v
    raise TypeError(f"cannot compare ExtendedReal with {type(other).__name__}")


__all__ = ["ExtendedReal", "ExtendedArithmeticError"]
