"""
Tests for the method-of-characteristics oracle and the consistency check
"""
import numpy as np
import pytest

from ordpde.app.baire.operators import GridFunction
from ordpde.app.core.geometry import Domain, SampleGrid
from ordpde.app.dsl import F_VARIABLES, evaluate, f_VARIABLES, parse
from ordpde.app.oracles.characteristics import (
    CharacteristicsBlowUpError,
    NotQuasilinearError,
    QuasilinearForm,
    characteristics_solve,
    recognize_quasilinear,
)
from ordpde.app.oracles.consistency import consistency_check, fd_tolerance
from ordpde.utils.problem_utils import ProblemSpec, compile_problem


def _form(text: str) -> QuasilinearForm:
    return recognize_quasilinear(parse(text, F_VARIABLES))


def _at(e, x=0.3, y=-0.2, u=0.7):
    return evaluate(e, {"x": x, "y": y, "u": u})


class TestRecognizeQuasilinear:
    """Structural match of F = A(x,y,u)·p - B(x,y,u)"""

    @pytest.mark.parametrize(
        "text, A, B",
        [
            ("p", 1.0, 0.0),
            ("u*p", 0.7, 0.0),
            ("u*p + x", 0.7, -0.3),
            ("(x + 1)*p - u", 1.3, 0.7),
            ("p/2 + sin(y)", 0.5, -np.sin(-0.2)),
            ("-(p*u - x*p)", -0.4, 0.0),
            ("u", 0.0, -0.7),
            ("p^1*exp(u)", np.exp(0.7), 0.0),
        ],
    )
    def test_coefficients(self, text, A, B):
        form = _form(text)
        assert _at(form.A) == pytest.approx(A)
        assert _at(form.B) == pytest.approx(B)

    @pytest.mark.parametrize("text", ["p^2", "sin(p)", "p*p", "u/p", "sqrt(p + 1)", "p^2 + u"])
    def test_rejects_fully_nonlinear(self, text):
        with pytest.raises(NotQuasilinearError):
            _form(text)

    def test_describe(self):
        assert _form("u*p").describe() == "D_y u + (u) D_x u = 0"

    def test_coefficients_must_not_depend_on_p(self):
        with pytest.raises(NotQuasilinearError):
            QuasilinearForm(parse("p"), parse("0"))


class TestCharacteristics:
    """Classical solutions from characteristic curves"""

    def test_advection_matches_translated_data(self):
        grid = SampleGrid(Domain(1.0, 1.0), 64, 64)
        result = characteristics_solve(_form("p"), parse("sin(x)", f_VARIABLES), grid)
        X, Y = grid.mesh
        assert not result.shock
        assert result.valid.all()
        np.testing.assert_allclose(result.field.values, np.sin(X - Y), atol=1e-6)

    def test_burgers_shock_time(self):
        grid = SampleGrid(Domain(1.0, 2.0), 64, 66)
        result = characteristics_solve(_form("u*p"), parse("-x", f_VARIABLES), grid)
        assert result.shock
        assert abs(result.shock_y - 1.0) <= 2 * grid.hy
        X, Y = grid.mesh
        rows = (Y[:, 0] > -2.0) & (Y[:, 0] <= 0.5)
        assert result.valid[rows].all()
        np.testing.assert_allclose(result.field.values[rows], (-X / (1.0 - Y))[rows], atol=1e-9)
        assert not result.valid[Y[:, 0] >= result.shock_y].any()

    @pytest.mark.parametrize(
        "F, f, exact",
        [
            ("p - u", "x", lambda X, Y: (X - Y) * np.exp(Y)),
            ("p - u", "sin(x)", lambda X, Y: np.sin(X - Y) * np.exp(Y)),
            ("x*p", "x", lambda X, Y: X * np.exp(-Y)),
        ],
    )
    def test_halving_hy_cuts_the_error_at_least_eightfold(self, F, f, exact):
        errors = []
        for ny in (16, 32):
            grid = SampleGrid(Domain(1.0, 1.0), 256, ny)
            result = characteristics_solve(_form(F), parse(f, f_VARIABLES), grid)
            assert result.valid.all()
            X, Y = grid.mesh
            errors.append(float(np.max(np.abs(result.field.values - exact(X, Y)))))
        assert errors[1] > 0.0
        assert errors[0] / errors[1] >= 8.0

    def test_blow_up(self):
        grid = SampleGrid(Domain(1.0, 1.0), 32, 32)
        with pytest.raises(CharacteristicsBlowUpError) as exc:
            characteristics_solve(_form("-u^2"), parse("10", f_VARIABLES), grid)
        assert abs(exc.value.y) >= 0.1

    def test_odd_ny_rejected(self):
        with pytest.raises(ValueError):
            characteristics_solve(_form("p"), parse("x", f_VARIABLES), SampleGrid(Domain(1, 1), 8, 7))

    def test_y_max_range(self):
        with pytest.raises(ValueError):
            characteristics_solve(_form("p"), parse("x", f_VARIABLES), SampleGrid(Domain(1, 1), 8, 8), 2.0)

    def test_rows_beyond_y_max_are_invalid(self):
        grid = SampleGrid(Domain(1.0, 1.0), 16, 16)
        result = characteristics_solve(_form("p"), parse("x", f_VARIABLES), grid, y_max=0.5)
        Y = grid.mesh[1]
        assert result.valid[np.abs(Y) <= 0.5 + 1e-12].all()
        assert not result.valid[np.abs(Y) > 0.5 + 1e-12].any()


class TestConsistency:
    """Finite-difference residual and trace of classical grid fields"""

    def test_advection_oracle_is_consistent(self):
        problem = compile_problem(ProblemSpec(F="p", f="sin(x)", a=1, b=1, N=1))
        grid = SampleGrid(problem.domain, 128, 128)
        result = characteristics_solve(_form("p"), problem.f, grid)
        report = consistency_check(result.field, problem, grid, valid=result.valid)
        assert report.passed
        assert report.tolerance == pytest.approx(10 * (grid.hx + grid.hy))
        assert report.trace_error <= 1e-9
        assert report.checked_nodes == 127 * 127

    def test_wrong_field_fails(self):
        problem = compile_problem(ProblemSpec(F="p", f="sin(x)", a=1, b=1, N=1))
        grid = SampleGrid(problem.domain, 32, 32)
        zero = GridFunction.constant(grid, 0.0)
        report = consistency_check(zero, problem, grid)
        assert report.residual_ok
        assert not report.trace_ok
        assert not report.passed

    def test_burgers_checked_below_y_max_only(self):
        problem = compile_problem(ProblemSpec(F="u*p", f="-x", a=1, b=2, N=1))
        grid = SampleGrid(problem.domain, 64, 64)
        result = characteristics_solve(_form("u*p"), problem.f, grid, y_max=0.5)
        assert not result.shock
        report = consistency_check(result.field, problem, grid, valid=result.valid)
        assert report.passed
        assert report.checked_nodes == 15 * 63

    def test_grid_mismatch(self):
        problem = compile_problem(ProblemSpec(F="p", f="x", a=1, b=1, N=1))
        field = GridFunction.constant(SampleGrid(problem.domain, 8, 8), 0.0)
        with pytest.raises(ValueError):
            consistency_check(field, problem, SampleGrid(problem.domain, 16, 16))

    def test_tolerance_scales_with_spacing(self):
        d = Domain(1.0, 1.0)
        assert fd_tolerance(SampleGrid(d, 64, 64)) == pytest.approx(0.5 * fd_tolerance(SampleGrid(d, 32, 32)))
