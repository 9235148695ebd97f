"""
Tests for the extended real line
"""
import math

import pytest

from ordpde.app.core.extended import ExtendedArithmeticError, ExtendedReal


class TestOrdering:
    """Total order over finite values and both infinities"""

    def test_infinities_bound_everything(self):
        values = [ExtendedReal(-1e300), ExtendedReal(0.0), ExtendedReal(7.5), ExtendedReal(1e300)]
        for v in values:
            assert ExtendedReal.neg_inf() < v < ExtendedReal.pos_inf()

    def test_min_max_are_total(self):
        values = [ExtendedReal.pos_inf(), ExtendedReal(2.0), ExtendedReal.neg_inf(), ExtendedReal(-3.0)]
        assert min(values) == ExtendedReal.neg_inf()
        assert max(values) == ExtendedReal.pos_inf()
        assert min(values[:2] + values[3:]) == -3.0

    def test_compares_with_plain_numbers(self):
        assert ExtendedReal(1.0) == 1
        assert ExtendedReal(1.0) < 2.5
        assert ExtendedReal.pos_inf() > 1e308

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            ExtendedReal(math.nan)
        with pytest.raises(ValueError):
            ExtendedReal(1.0) < math.nan

    def test_hashable(self):
        assert len({ExtendedReal(1.0), ExtendedReal(1), ExtendedReal.pos_inf()}) == 2


class TestArithmetic:
    """Arithmetic is defined on finite operands only"""

    def test_finite_arithmetic(self):
        a, b = ExtendedReal(3.0), ExtendedReal(0.5)
        assert a + b == 3.5
        assert a - b == 2.5
        assert 1 - b == 0.5
        assert a * b == 1.5
        assert a / b == 6.0
        assert -a == -3.0

    @pytest.mark.parametrize("op", ["+", "-", "*", "/"])
    def test_infinite_operand_raises(self, op):
        inf = ExtendedReal.pos_inf()
        with pytest.raises(ExtendedArithmeticError):
            if op == "+":
                inf + 1.0
            elif op == "-":
                inf - inf
            elif op == "*":
                inf * 0.0
            else:
                ExtendedReal(1.0) / ExtendedReal.neg_inf()

    def test_division_by_zero(self):
        with pytest.raises(ExtendedArithmeticError):
            ExtendedReal(1.0) / 0

    def test_negating_infinity_is_allowed(self):
        assert -ExtendedReal.pos_inf() == ExtendedReal.neg_inf()

    def test_repr(self):
        assert repr(ExtendedReal.pos_inf()) == "ExtendedReal(+inf)"
        assert repr(ExtendedReal(0.25)) == "ExtendedReal(0.25)"
