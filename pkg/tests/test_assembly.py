"""
Tests for assembly, the regularized residual and the residual report
"""
import logging
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ordpde.app.core.geometry import Domain, SampleGrid
from ordpde.app.core.pieces import AffinePiece
from ordpde.app.core.tiled_function import TiledFunction
from ordpde.app.dsl import F_VARIABLES, differentiate, f_VARIABLES, parse
from ordpde.app.solver.assembly import (
    AssemblyError,
    InsufficientRefinementError,
    ResidualEvaluationError,
    assemble,
    build_report,
    equivalent,
    regularized_partials,
    regularized_residual,
    trace,
    trace_error,
)
from ordpde.app.solver.local_approx import calibrate_tiling
from ordpde.app.tiling.fiad import build_fiad_tiling, tiling_from_boxes

UNIT = Domain(1.0, 1.0)


def _assembled(F_text: str, f_text: str, eps: float, delta: float):
    F = parse(F_text, F_VARIABLES)
    f = parse(f_text, f_VARIABLES)
    fp = differentiate(f, "x")
    tiling = build_fiad_tiling(UNIT, delta)
    cal = calibrate_tiling(tiling, F, f, fp, eps, 16, 8)
    assert cal.certified
    return assemble(tiling, cal.pieces), F, f


class TestAssemble:
    """Pasting one certified piece per tile"""

    def test_piece_count(self):
        u, _, _ = _assembled("p", "x", 0.5, 0.6)
        with pytest.raises(AssemblyError):
            assemble(u.tiling, [])

    def test_pieces_must_match_their_tiles(self):
        F = parse("p", F_VARIABLES)
        f = parse("x", f_VARIABLES)
        tiling = build_fiad_tiling(UNIT, 0.6)
        cal = calibrate_tiling(tiling, F, f, differentiate(f, "x"), 0.5, 16, 8)
        swapped = list(cal.pieces)
        swapped[0], swapped[1] = swapped[1], swapped[0]
        with pytest.raises(AssemblyError):
            assemble(tiling, swapped)

    def test_mixed_epsilons_rejected(self):
        F = parse("p", F_VARIABLES)
        f = parse("x", f_VARIABLES)
        fp = differentiate(f, "x")
        tiling = build_fiad_tiling(UNIT, 3.0)
        a = calibrate_tiling(tiling, F, f, fp, 0.5, 16, 8).pieces
        b = calibrate_tiling(tiling, F, f, fp, 0.25, 16, 8).pieces
        with pytest.raises(AssemblyError):
            assemble(tiling, a[:3] + b[3:])


class TestRegularizedResidual:
    """T̃u on the evaluation grid"""

    def test_linear_problem_has_constant_residual(self):
        u, F, f = _assembled("p", "x", 0.5, 0.6)
        grid = SampleGrid(UNIT, 28, 28)
        r = regularized_residual(u, F, grid)
        np.testing.assert_allclose(r.values, -0.25, atol=1e-12)

    def test_grid_must_resolve_tiles(self):
        u, F, _ = _assembled("p", "x", 0.5, 0.6)
        with pytest.raises(InsufficientRefinementError):
            regularized_residual(u, F, SampleGrid(UNIT, 7, 7))

    def test_grid_on_another_domain(self):
        u, F, _ = _assembled("p", "x", 0.5, 0.6)
        with pytest.raises(AssemblyError):
            regularized_residual(u, F, SampleGrid(Domain(2.0, 1.0), 64, 64))

    def test_sparse_grid_warns(self, caplog):
        u, F, _ = _assembled("p", "x", 0.5, 0.6)
        with caplog.at_level(logging.WARNING, logger="ordpde.app.solver.assembly"):
            regularized_residual(u, F, SampleGrid(UNIT, 8, 8))
        assert "fewer than 4 nodes per tile" in caplog.text

    def test_evaluation_error_reports_the_node(self):
        u, _, _ = _assembled("p", "x", 0.5, 0.6)
        bad = parse("1/(x - x)", F_VARIABLES)
        with pytest.raises(ResidualEvaluationError) as exc:
            regularized_residual(u, bad, SampleGrid(UNIT, 28, 28))
        assert (exc.value.x, exc.value.y) == (-1.0, -1.0)
        assert "division by zero at grid node (-1.0, -1.0)" in str(exc.value)

    def test_skeleton_nodes_use_min_of_limits(self):
        tiling = build_fiad_tiling(UNIT, 3.0)
        pieces = [AffinePiece(0.0, 0.0, 0.0, 0.0, -0.05) for _ in range(6)]
        pieces[2] = AffinePiece(0.0, 0.0, 0.0, 0.0, -0.02)
        pieces[3] = AffinePiece(0.0, 0.0, 0.0, 0.0, -0.08)
        u = TiledFunction(tiling, tuple(pieces))
        grid = SampleGrid(UNIT, 12, 12)
        r = regularized_residual(u, parse("p", F_VARIABLES), grid)
        # (x, y) = (0, 0) is node (6, 6), on the edge between tiles 2 and 3
        assert r.values[6, 6] == pytest.approx(-0.08)
        assert r.values[6, 3] == pytest.approx(-0.02)

    def test_partials(self):
        u, _, _ = _assembled("p", "x", 0.5, 0.6)
        ux, uy = regularized_partials(u, SampleGrid(UNIT, 28, 28))
        np.testing.assert_allclose(ux.values, 1.0, atol=1e-12)
        np.testing.assert_allclose(uy.values, -1.25, atol=1e-12)


class TestTrace:
    """R₀u and the trace error on y = 0"""

    def test_trace_equals_initial_data(self):
        u, _, f = _assembled("p^2 + u", "sin(x)", 1.0, 0.25)
        xs = np.linspace(-1.0, 1.0, 101)
        np.testing.assert_allclose(trace(u, xs), np.sin(xs), atol=1e-12)
        assert trace_error(u, f, xs) <= 1e-9

    def test_crossings_are_skipped(self):
        tiling = build_fiad_tiling(UNIT, 3.0)
        u = TiledFunction(tiling, tuple(AffinePiece(0.0, 0.0, float(k), 0.0, 0.0) for k in range(6)))
        f = parse("2 + x - x", f_VARIABLES)
        assert trace_error(u, f, np.array([-0.5])) == pytest.approx(0.0)
        assert trace_error(u, f, np.array([-1.0, 0.0, 1.0])) == 0.0
        assert trace_error(u, f, np.array([0.5])) == pytest.approx(1.0)


class TestResidualReport:
    """Band, trace and skeleton statistics"""

    def test_linear_problem_report(self):
        u, F, f = _assembled("p", "x", 0.5, 0.6)
        grid = SampleGrid(UNIT, 28, 28)
        report = build_report(u, F, f, grid)
        assert report.residual_min == pytest.approx(-0.25)
        assert report.residual_max == pytest.approx(-0.25)
        assert report.gamma_residual_min == pytest.approx(-0.25)
        assert report.sup_residual == pytest.approx(0.25)
        assert report.band_ok(0.5)
        assert not report.band_ok(0.2)
        assert report.trace_ok()
        assert 0.0 < report.gamma_node_fraction < 1.0
        assert len(report.per_tile) == 49

    def test_min_and_max_must_be_ordered(self):
        u, F, f = _assembled("p", "x", 0.5, 0.6)
        report = build_report(u, F, f, SampleGrid(UNIT, 28, 28))
        with pytest.raises(ValueError):
            replace(report, residual_min=1.0, residual_max=0.0)


def _random_affine(seed: int, tiling, perturb_tile: int = -1, amount: float = 0.0):
    rng = np.random.default_rng(seed)
    pieces = []
    for k in range(len(tiling.tiles)):
        c2 = -0.5 + (amount if k == perturb_tile else 0.0)
        pieces.append(AffinePiece(0.0, 0.0, float(rng.normal()), 0.0, c2))
    return TiledFunction(tiling, tuple(pieces))


def _equivalence_setup():
    tiling = build_fiad_tiling(UNIT, 3.0)
    return tiling, parse("p", F_VARIABLES), parse("0", f_VARIABLES), SampleGrid(UNIT, 12, 12)


def _class_member(seed: int, tiling):
    """Members for different seeds differ only away from y = 0, so they share residual and trace."""
    rng = np.random.default_rng(100 + seed)
    pieces = []
    for k in range(len(tiling.tiles)):
        c0 = 0.0 if k in tiling.initial_row else float(rng.normal())
        pieces.append(AffinePiece(0.0, 0.0, c0, 0.0, -0.5))
    return TiledFunction(tiling, tuple(pieces))


# (trace c0, trace slope, residual) per equivalence class under F = p, f = 0
_CLASSES = [(0.0, 0.0, -0.5), (0.0, 0.0, -0.25), (1.0, 0.5, -0.5)]


def _member(tiling, cls: int, split: bool, interior):
    """A function of class `cls`; interior tiles vary freely, `split` re-tiles it with a larger Γ."""
    c0_init, c1_init, r = _CLASSES[cls]
    pieces = []
    for k in range(len(tiling.tiles)):
        c0, c1 = (c0_init, c1_init) if k in tiling.initial_row else interior[k]
        pieces.append(AffinePiece(0.0, 0.0, c0, c1, r - c1))
    if not split:
        return TiledFunction(tiling, tuple(pieces))
    boxes, children = [], []
    for box, piece in zip(tiling.tiles, pieces):
        mid = 0.5 * (box.x_lo + box.x_hi)
        boxes += [(box.x_lo, mid, box.y_lo, box.y_hi), (mid, box.x_hi, box.y_lo, box.y_hi)]
        children += [piece, piece]
    return TiledFunction(tiling_from_boxes(tiling.domain, tiling.delta / 2, boxes), tuple(children))


@st.composite
def _members(draw):
    interior = draw(
        st.lists(st.tuples(st.sampled_from([-1.0, 0.0, 2.0]), st.sampled_from([-0.5, 0.0, 1.0])), min_size=6, max_size=6)
    )
    return draw(st.integers(0, len(_CLASSES) - 1)), draw(st.booleans()), tuple(interior)


class TestEquivalence:
    """Grid proxy for u ∼ v ⇔ T₀u = T₀v"""

    def test_reflexive(self):
        tiling, F, f, grid = _equivalence_setup()
        u = _random_affine(0, tiling)
        assert equivalent(u, u, F, f, grid)

    def test_same_class_away_from_initial_line(self):
        tiling, F, f, grid = _equivalence_setup()
        assert equivalent(_class_member(0, tiling), _class_member(1, tiling), F, f, grid)

    def test_distinguishes_one_tile_perturbation(self):
        tiling, F, f, grid = _equivalence_setup()
        u = _random_affine(0, tiling)
        v = _random_affine(0, tiling, perturb_tile=5, amount=0.01)
        assert not equivalent(u, v, F, f, grid)

    def test_different_traces(self):
        tiling, F, f, grid = _equivalence_setup()
        u = TiledFunction(tiling, (AffinePiece(0.0, 0.0, 0.0, 0.0, -0.5),) * 6)
        v = TiledFunction(tiling, (AffinePiece(0.0, 0.0, 1.0, 0.0, -0.5),) * 6)
        assert not equivalent(u, v, F, f, grid)

    def test_domains_must_match(self):
        tiling, F, f, grid = _equivalence_setup()
        other = build_fiad_tiling(Domain(2.0, 1.0), 3.0)
        u = _random_affine(0, tiling)
        v = TiledFunction(other, (AffinePiece(0.0, 0.0, 0.0, 0.0, 0.0),) * len(other.tiles))
        with pytest.raises(AssemblyError):
            equivalent(u, v, F, f, grid)

    @settings(max_examples=150, deadline=None)
    @given(a=_members(), b=_members(), c=_members())
    def test_equivalence_relation(self, a, b, c):
        tiling, F, f, grid = _equivalence_setup()
        u, v, w = (_member(tiling, *m) for m in (a, b, c))
        uv = equivalent(u, v, F, f, grid)
        vw = equivalent(v, w, F, f, grid)
        assert equivalent(u, u, F, f, grid)
        assert uv == equivalent(v, u, F, f, grid)
        if uv and vw:
            assert equivalent(u, w, F, f, grid)
        assert uv == (a[0] == b[0])

    @settings(max_examples=50, deadline=None)
    @given(m=_members())
    def test_splitting_tiles_keeps_the_class(self, m):
        tiling, F, f, grid = _equivalence_setup()
        cls, _, interior = m
        coarse, split = _member(tiling, cls, False, interior), _member(tiling, cls, True, interior)
        assert len(split.tiling.tiles) == 2 * len(coarse.tiling.tiles)
        assert equivalent(coarse, split, F, f, grid)
        assert equivalent(split, coarse, F, f, grid)
