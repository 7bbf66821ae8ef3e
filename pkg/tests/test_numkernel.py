import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mirrorclust import ShapeError, procrustes_align, procrustes_cost, svd, sym_eig
from helpers import grid_procrustes_cost, random_orthogonal

SQRT2 = np.sqrt(2.0)


class TestSymEig:
    def test_diagonal(self):
        eig = sym_eig(np.diag([3.0, 1.0]))
        np.testing.assert_allclose(eig.values, [3.0, 1.0])
        np.testing.assert_allclose(eig.vectors, np.eye(2))

    def test_two_by_two_by_hand(self):
        # characteristic polynomial of [[2,1],[1,2]]: (2-l)^2 - 1 = 0
        eig = sym_eig(np.array([[2.0, 1.0], [1.0, 2.0]]))
        np.testing.assert_allclose(eig.values, [3.0, 1.0], atol=1e-12)
        np.testing.assert_allclose(eig.vectors[:, 0], [1 / SQRT2, 1 / SQRT2], atol=1e-12)
        np.testing.assert_allclose(eig.vectors[:, 1], [1 / SQRT2, -1 / SQRT2], atol=1e-12)

    @pytest.mark.parametrize("n", [1, 3, 7])
    def test_zero_matrix(self, n):
        eig = sym_eig(np.zeros((n, n)))
        np.testing.assert_array_equal(eig.values, np.zeros(n))

    def test_rejects_non_square(self):
        with pytest.raises(ShapeError):
            sym_eig(np.zeros((2, 3)))

    def test_rejects_asymmetric(self):
        with pytest.raises(ShapeError):
            sym_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_non_finite(self):
        with pytest.raises(ShapeError):
            sym_eig(np.array([[np.nan, 0.0], [0.0, 0.0]]))

    def test_reconstruction_and_orthonormality(self):
        rng = np.random.default_rng(0)
        for _ in range(25):
            n = rng.integers(1, 12)
            A = rng.normal(size=(n, n))
            A = (A + A.T) / 2
            eig = sym_eig(A)
            scale = max(np.linalg.norm(A), 1e-30)
            recon = eig.vectors @ np.diag(eig.values) @ eig.vectors.T
            assert np.linalg.norm(recon - A) <= 1e-9 * scale
            assert np.abs(eig.vectors.T @ eig.vectors - np.eye(n)).max() <= 1e-10
            for j in range(n):
                resid = A @ eig.vectors[:, j] - eig.values[j] * eig.vectors[:, j]
                assert np.linalg.norm(resid) <= 1e-9 * scale

    def test_descending_order_and_sign_convention(self):
        rng = np.random.default_rng(1)
        A = rng.normal(size=(6, 6))
        A = (A + A.T) / 2
        eig = sym_eig(A)
        assert np.all(np.diff(eig.values) <= 0)
        for j in range(6):
            col = eig.vectors[:, j]
            assert col[np.abs(col).argmax()] > 0


class TestSvd:
    @pytest.mark.parametrize(
        "M, s",
        [
            (np.eye(2), (1.0, 1.0)),
            (np.array([[0.0, 1.0], [1.0, 0.0]]), (1.0, 1.0)),
            (np.diag([5.0, 0.0]), (5.0, 0.0)),
        ],
    )
    def test_singular_values(self, M, s):
        np.testing.assert_allclose(svd(M).s, s, atol=1e-12)

    def test_thin_shape(self):
        dec = svd(np.ones((5, 3)))
        assert dec.u.shape == (5, 3) and dec.s.shape == (3,) and dec.v.shape == (3, 3)

    def test_reconstruction(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            M = rng.normal(size=(rng.integers(1, 8), rng.integers(1, 8)))
            dec = svd(M)
            scale = max(np.linalg.norm(M), 1e-30)
            assert np.linalg.norm(dec.u @ np.diag(dec.s) @ dec.v.T - M) <= 1e-9 * scale
            assert np.all(np.diff(dec.s) <= 0) and np.all(dec.s >= 0)


class TestProcrustesAlign:
    def test_identity(self):
        np.testing.assert_allclose(procrustes_align(np.eye(2), np.eye(2)), np.eye(2), atol=1e-12)

    def test_exact_permutation(self):
        perm = np.array([[0.0, 1.0], [1.0, 0.0]])
        np.testing.assert_allclose(procrustes_align(np.eye(2), perm), perm, atol=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            procrustes_align(np.ones((3, 2)), np.ones((2, 2)))

    def test_beats_rotation_grid(self):
        rng = np.random.default_rng(3)
        X1, X2 = rng.normal(size=(5, 2)), rng.normal(size=(5, 2))
        O = procrustes_align(X1, X2)
        np.testing.assert_allclose(O.T @ O, np.eye(2), atol=1e-12)
        closed = np.linalg.norm(X1 @ O - X2)
        assert closed <= grid_procrustes_cost(X1, X2) + 1e-12


class TestProcrustesCost:
    def test_equal_inputs(self):
        X = np.arange(6.0).reshape(3, 2)
        assert procrustes_cost(X, X) == pytest.approx(0.0, abs=1e-12)

    def test_one_dimensional_by_enumeration(self):
        # O in {+1,-1}: costs sqrt(2) and sqrt(18)
        X1, X2 = np.array([[1.0], [2.0]]), np.array([[2.0], [1.0]])
        enumerated = min(np.linalg.norm(X1 * o - X2) for o in (1.0, -1.0))
        assert procrustes_cost(X1, X2) == pytest.approx(enumerated)
        assert procrustes_cost(X1, X2) == pytest.approx(np.sqrt(2.0))

    def test_orthogonal_invariance(self):
        rng = np.random.default_rng(4)
        for d in (1, 2, 3):
            X1 = rng.normal(size=(6, d))
            W = random_orthogonal(rng, d)
            assert procrustes_cost(X1, X1 @ W) <= 1e-10

    def test_bi_invariance(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            d = int(rng.integers(1, 4))
            X1, X2 = rng.normal(size=(7, d)), rng.normal(size=(7, d))
            W1, W2 = random_orthogonal(rng, d), random_orthogonal(rng, d)
            assert procrustes_cost(X1 @ W1, X2 @ W2) == pytest.approx(
                procrustes_cost(X1, X2), abs=1e-9
            )

    def test_triangle_inequality_on_random_triples(self):
        rng = np.random.default_rng(6)
        for _ in range(1000):
            d = int(rng.integers(1, 4))
            n = int(rng.integers(2, 7))
            X1, X2, X3 = (rng.normal(size=(n, d)) for _ in range(3))
            d12 = procrustes_cost(X1, X2)
            d13 = procrustes_cost(X1, X3)
            d23 = procrustes_cost(X2, X3)
            assert d13 <= d12 + d23 + 1e-8

    def test_positive_for_generic_pairs(self):
        rng = np.random.default_rng(7)
        assert procrustes_cost(rng.normal(size=(5, 2)), rng.normal(size=(5, 2))) > 0.1

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            procrustes_cost(np.ones((3, 1)), np.ones((3, 2)))


@given(
    arrays(np.float64, (4, 2), elements=st.floats(-2, 2)),
    arrays(np.float64, (4, 2), elements=st.floats(-2, 2)),
)
@settings(max_examples=60, deadline=None)
def test_cost_symmetry_and_nonnegativity(X1, X2):
    c12 = procrustes_cost(X1, X2)
    assert c12 >= 0.0
    assert c12 == pytest.approx(procrustes_cost(X2, X1), abs=1e-9)
