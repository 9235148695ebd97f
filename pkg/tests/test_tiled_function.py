"""
Tests for smooth pieces and piecewise-smooth tiled functions
"""
import numpy as np
import pytest

from ordpde.app.core.extended import ExtendedReal
from ordpde.app.core.geometry import Domain, DomainError
from ordpde.app.core.pieces import AffinePiece, InitialPiece, residual_of
from ordpde.app.core.tiled_function import SingularPointError, TiledFunction
from ordpde.app.dsl import F_VARIABLES, differentiate, f_VARIABLES, parse
from ordpde.app.tiling.fiad import build_fiad_tiling


@pytest.fixture
def tiling():
    # 2 columns split at x = 0, 3 rows split at y = -1/3 and 1/3
    return build_fiad_tiling(Domain(1.0, 1.0), 3.0)


@pytest.fixture
def stepped(tiling):
    """Tile k carries the constant 10 - k."""
    return TiledFunction(tiling, tuple(AffinePiece(0.0, 0.0, 10.0 - k, 0.0, 0.0) for k in range(6)))


class TestPieces:
    """Affine and initial pieces with their jets"""

    def test_affine_jet(self):
        piece = AffinePiece(0.5, -0.5, 1.0, 2.0, -3.0)
        u, ux, uy = piece.jet(np.array([0.5, 1.0]), np.array([-0.5, 0.0]))
        np.testing.assert_allclose(u, [1.0, 1.0 + 1.0 - 1.5])
        np.testing.assert_allclose(ux, [2.0, 2.0])
        np.testing.assert_allclose(uy, [-3.0, -3.0])
        assert piece.kind == "affine"

    def test_initial_piece_has_exact_trace(self):
        f = parse("sin(x)", f_VARIABLES)
        xs = np.linspace(-1.0, 0.0, 8)
        piece = InitialPiece(f, differentiate(f, "x"), tuple(xs), tuple(np.cos(xs)))
        dense = np.linspace(-1.0, 0.0, 33)
        np.testing.assert_array_equal(piece.value(dense, np.zeros_like(dense)), np.sin(dense))
        u, ux, uy = piece.jet(dense, np.full_like(dense, 0.2))
        np.testing.assert_allclose(uy, piece.g(dense))
        np.testing.assert_allclose(ux, np.cos(dense) + piece.g_prime(dense) * 0.2)
        assert piece.kind == "initial"

    def test_initial_piece_needs_two_samples(self):
        f = parse("x", f_VARIABLES)
        with pytest.raises(ValueError):
            InitialPiece(f, differentiate(f, "x"), (0.0,), (1.0,))

    def test_residual_of(self):
        F = parse("u*p", F_VARIABLES)
        piece = AffinePiece(0.0, 0.0, 1.0, 2.0, -1.0)
        xs, ys = np.array([0.0, 0.5]), np.array([0.0, 0.5])
        got = residual_of(F, xs, ys, piece.jet(xs, ys))
        np.testing.assert_allclose(got, [-1.0 + 1.0 * 2.0, -1.0 + (1.0 + 1.0 - 0.5) * 2.0])


class TestTiledFunction:
    """Piece ownership off Γ and the min-of-limits rule on Γ"""

    def test_piece_count_must_match(self, tiling):
        with pytest.raises(ValueError):
            TiledFunction(tiling, (AffinePiece(0, 0, 0, 0, 0),))

    def test_interior_points_use_owner(self, stepped):
        assert stepped.evaluate(0.5, 0.0) == ExtendedReal(7.0)
        assert stepped.evaluate(-0.5, 0.9) == 6.0
        assert not stepped.on_skeleton(0.5, 0.0)

    def test_skeleton_points_take_the_minimum(self, stepped, tiling):
        third = tiling.y_edges[2]
        assert stepped.evaluate(0.0, 0.0) == 7.0
        assert stepped.evaluate(0.0, third) == 5.0
        assert stepped.evaluate(-0.5, third) == 6.0
        assert stepped.on_skeleton(0.0, 0.0)

    def test_domain_edge_is_its_own_tile(self, stepped):
        assert stepped.evaluate(1.0, -1.0) == 9.0

    def test_vectorized_matches_pointwise(self, stepped):
        xs = np.array([[0.5, 0.0], [-0.5, 0.0]])
        ys = np.array([[0.0, 0.0], [0.9, 1.0]])
        got = stepped.evaluate_many(xs, ys)
        assert got.shape == (2, 2)
        assert got.tolist() == [[7.0, 7.0], [6.0, 5.0]]

    def test_outside_points(self, stepped):
        with pytest.raises(DomainError):
            stepped.evaluate(1.5, 0.0)
        with pytest.raises(DomainError):
            stepped.evaluate_many(np.array([0.0, 2.0]), np.array([0.0, 0.0]))

    def test_partials_off_and_on_skeleton(self, tiling):
        pieces = tuple(AffinePiece(0.0, 0.0, 0.0, float(k), -float(k)) for k in range(6))
        u = TiledFunction(tiling, pieces)
        assert u.partials(0.5, 0.0) == (3.0, -3.0)
        with pytest.raises(SingularPointError):
            u.partials(0.0, 0.0)
        ux, uy = u.partials_many(np.array([0.0, 0.5]), np.array([0.0, 0.0]))
        assert ux.tolist() == [2.0, 3.0]
        assert uy.tolist() == [-3.0, -3.0]

    def test_residual_uses_min_of_adjacent_residuals(self, tiling):
        F = parse("p", F_VARIABLES)
        pieces = [AffinePiece(0.0, 0.0, 0.0, 0.0, -0.5) for _ in range(6)]
        pieces[2] = AffinePiece(0.0, 0.0, 0.0, 0.0, -0.02)
        pieces[3] = AffinePiece(0.0, 0.0, 0.0, 0.0, -0.08)
        u = TiledFunction(tiling, tuple(pieces))
        got = u.residual_many(F, np.array([0.0, -0.5, 0.5]), np.array([0.0, 0.0, 0.0]))
        np.testing.assert_allclose(got, [-0.08, -0.02, -0.08])

    def test_global_affine_function_is_unchanged_on_skeleton(self, tiling):
        piece = AffinePiece(0.1, -0.2, 1.0, 2.0, -3.0)
        u = TiledFunction(tiling, (piece,) * 6)
        xs = np.array([0.0, 0.0, -1.0, 0.3])
        ys = np.array([0.0, tiling.y_edges[1], 1.0, 0.3])
        np.testing.assert_allclose(u.evaluate_many(xs, ys), piece.value(xs, ys))

    def test_piece_at(self, stepped):
        assert stepped.piece_at(0.5, 0.5).c0 == 5.0
