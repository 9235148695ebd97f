"""
End-to-end tests for the command-line driver
"""
import os

import numpy as np
import orjson
import pytest

from ordpde import cli
from ordpde.app.export.csv_export import read_decay_csv, read_grid_csv


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    for key in list(os.environ):
        if key.startswith("ORDPDE_"):
            monkeypatch.delenv(key, raising=False)
    monkeypatch.setenv("ORDPDE_THREADS", "2")
    monkeypatch.chdir(tmp_path)
    return tmp_path


class TestCheck:
    """`check` validates a problem file without solving"""

    def test_valid_file(self, write_spec, capsys):
        code = cli.main(["check", str(write_spec(F="p", f="sin(x)", a=1, b=1, N=2))])
        assert code == cli.EXIT_OK
        err = capsys.readouterr().err
        assert "OK" in err
        assert "f' = cos(x)" in err

    def test_unknown_identifier_reports_offset(self, write_spec, capsys):
        code = cli.main(["check", str(write_spec(F="q", f="x", a=1, b=1, N=1))])
        assert code == cli.EXIT_CONFIG
        err = capsys.readouterr().err
        assert "identifier 'q'" in err
        assert "offset 0" in err

    def test_nondifferentiable_initial_data(self, write_spec, capsys):
        code = cli.main(["check", str(write_spec(F="p", f="abs(x)", a=1, b=1, N=1))])
        assert code == cli.EXIT_CONFIG
        assert "abs" in capsys.readouterr().err

    def test_missing_file(self, tmp_path, capsys):
        assert cli.main(["check", str(tmp_path / "missing.spec")]) == cli.EXIT_CONFIG
        assert "not found" in capsys.readouterr().err

    def test_five_argument_form(self, write_spec):
        path = write_spec(F="p", f="x", a=1, b=1, N=1, F_arity=5)
        assert cli.main(["check", str(path)]) == cli.EXIT_CONFIG

    def test_invalid_environment(self, write_spec, monkeypatch):
        monkeypatch.setenv("ORDPDE_LATTICE_N", "2")
        assert cli.main(["check", str(write_spec(F="p", f="x", a=1, b=1, N=1))]) == cli.EXIT_CONFIG


class TestSolve:
    """`solve` builds the sequence and writes its artifacts"""

    def _solve(self, write_spec, out, **extra):
        values = dict(F="p", f="x", a=1, b=1, N=2, nx=32, ny=32)
        values.update(extra)
        return cli.main(["solve", str(write_spec(**values)), "--out", str(out)])

    def test_linear_problem(self, write_spec, tmp_path):
        out = tmp_path / "run"
        assert self._solve(write_spec, out) == cli.EXIT_OK
        for name in ("u_1.csv", "u_2.csv", "residual_1.csv", "residual_2.csv", "tiling_1.txt",
                     "tiling_2.txt", "decay.csv", "report.txt", "summary.json"):
            assert (out / name).is_file(), name
        assert not (out / "u_2.svg").exists()

        rows = read_decay_csv(out / "decay.csv")
        assert list(rows["n"]) == [1, 2]
        assert rows["sup_residual"][1] == pytest.approx(0.25)

        summary = orjson.loads((out / "summary.json").read_bytes())
        assert summary["exit_code"] == 0
        assert summary["cauchy_passed"] is True
        assert [t["n"] for t in summary["terms"]] == [1, 2]

        table = read_grid_csv(out / "residual_2.csv")
        assert table[:, 2].min() == pytest.approx(-0.25)

        report = (out / "report.txt").read_text(encoding="utf-8")
        assert "F = p" in report
        assert report.count("PASS") >= 2

    def test_output_is_reproducible(self, write_spec, tmp_path):
        first, second = tmp_path / "one", tmp_path / "two"
        assert self._solve(write_spec, first, f="sin(x)") == cli.EXIT_OK
        assert self._solve(write_spec, second, f="sin(x)") == cli.EXIT_OK
        for name in ("u_2.csv", "residual_2.csv", "tiling_2.txt", "decay.csv"):
            assert (first / name).read_bytes() == (second / name).read_bytes(), name

    def test_svg_output(self, write_spec, tmp_path):
        out = tmp_path / "svg"
        path = write_spec(F="p", f="x", a=1, b=1, N=2, nx=16, ny=16)
        assert cli.main(["solve", str(path), "--out", str(out), "--svg"]) == cli.EXIT_OK
        assert (out / "u_2.svg").is_file()
        assert (out / "decay.svg").is_file()

    def test_grid_flag_overrides_file(self, write_spec, tmp_path):
        out = tmp_path / "grid"
        path = write_spec(F="p", f="x", a=1, b=1, N=1, nx=32, ny=32)
        assert cli.main(["solve", str(path), "--out", str(out), "--grid", "16", "8"]) == cli.EXIT_OK
        table = read_grid_csv(out / "u_1.csv")
        assert table.shape == (17 * 9, 3)
        assert len(np.unique(table[:, 1])) == 9

    def test_default_output_directory(self, write_spec, isolated):
        path = write_spec(F="p", f="x", a=1, b=1, N=1, nx=16, ny=16)
        assert cli.main(["solve", str(path)]) == cli.EXIT_OK
        assert (isolated / "results" / "u_1.csv").is_file()

    def test_tile_cap_exhausts_search(self, write_spec, tmp_path, monkeypatch):
        monkeypatch.setenv("ORDPDE_MAX_TILES", "1")
        out = tmp_path / "cap"
        assert self._solve(write_spec, out) == cli.EXIT_EXHAUSTED
        summary = orjson.loads((out / "summary.json").read_bytes())
        assert {f["kind"] for f in summary["failures"]} == {"exhausted"}

    def test_evaluation_failure(self, write_spec, tmp_path, capsys):
        out = tmp_path / "sqrt"
        assert self._solve(write_spec, out, F="sqrt(x - 2)") == cli.EXIT_CONFIG
        assert "sqrt" in capsys.readouterr().err


class TestCompare:
    """`compare` cross-checks quasilinear problems against characteristics"""

    def test_advection(self, write_spec, tmp_path, capsys):
        out = tmp_path / "cmp"
        path = write_spec(F="p", f="sin(x)", a=1, b=1, N=1, nx=32, ny=31)
        assert cli.main(["compare", str(path), "--out", str(out)]) == cli.EXIT_OK
        table = read_grid_csv(out / "oracle_u.csv")
        assert table.shape == (33 * 33, 3)
        np.testing.assert_allclose(table[:, 2], np.sin(table[:, 0] - table[:, 1]), atol=1e-6)
        report = (out / "report.txt").read_text(encoding="utf-8")
        assert "Oracle: method of characteristics" in report
        assert "verdict   PASS" in report
        assert "PASS" in capsys.readouterr().err

    def test_not_quasilinear(self, write_spec, capsys):
        path = write_spec(F="p^2", f="x", a=1, b=1, N=1, nx=16, ny=16)
        assert cli.main(["compare", str(path)]) == cli.EXIT_NOT_QUASILINEAR
        assert "not quasilinear" in capsys.readouterr().err

    def test_blow_up(self, write_spec, tmp_path):
        out = tmp_path / "blow"
        path = write_spec(F="-u^2", f="10", a=1, b=1, N=1, nx=16, ny=16)
        assert cli.main(["compare", str(path), "--out", str(out)]) == cli.EXIT_FAILED_CHECK
        assert "non-finite" in (out / "report.txt").read_text(encoding="utf-8")
