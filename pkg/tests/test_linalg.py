import numpy as np
import pytest

from mdsbiplot.linalg import (
    center_columns,
    double_center,
    eigh_symmetric,
    scale_columns,
    svd_thin,
)

INV_SQRT2 = 1.0 / np.sqrt(2.0)


class TestCenterColumns:
    def test_two_point_symmetric(self):
        assert np.allclose(center_columns([[1.0], [3.0]]), [[-1.0], [1.0]])

    def test_already_centered_unchanged(self):
        X = np.array([[-2.0], [0.0], [2.0]])
        assert np.allclose(center_columns(X), X)

    def test_subtracts_column_means(self):
        X = [[1.0, 10.0], [2.0, 20.0], [3.0, 30.0]]
        expected = [[-1.0, -10.0], [0.0, 0.0], [1.0, 10.0]]
        assert np.allclose(center_columns(X), expected)

    def test_single_row_rejected(self):
        with pytest.raises(ValueError, match="degenerate"):
            center_columns([[1.0, 2.0]])

    def test_column_sums_vanish(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 30))
            p = int(rng.integers(1, 8))
            X = rng.normal(size=(n, p)) * 10
            C = center_columns(X)
            assert np.all(np.abs(C.sum(axis=0)) < 1e-10 * n)
            assert C.shape == X.shape


class TestScaleColumns:
    def test_zscore_two_points(self):
        out = scale_columns(np.array([[-1.0], [1.0]]), "zscore")
        assert np.allclose(out, [[-INV_SQRT2], [INV_SQRT2]])

    def test_zscore_unit_sample_variance(self, rng):
        X = center_columns(rng.normal(size=(17, 4)) * 3)
        out = scale_columns(X, "zscore")
        assert np.allclose(out.var(axis=0, ddof=1), 1.0, atol=1e-8)

    def test_unit_interval_endpoints(self):
        out = scale_columns(np.array([[2.0], [4.0], [6.0]]), "unit_interval")
        assert out[0, 0] == 0.0
        assert out[1, 0] == 0.5
        assert out[2, 0] == 1.0

    def test_unit_interval_exact_bounds(self, rng):
        X = rng.normal(size=(11, 3)) * 7
        out = scale_columns(X, "unit_interval")
        assert np.all(out.min(axis=0) == 0.0)
        assert np.all(out.max(axis=0) == 1.0)

    def test_none_is_identity(self, rng):
        X = rng.normal(size=(5, 2))
        assert np.array_equal(scale_columns(X, "none"), X)

    def test_constant_column_named(self):
        X = np.array([[1.0, 5.0], [2.0, 5.0], [3.0, 5.0]])
        with pytest.raises(ValueError, match="column 1"):
            scale_columns(X, "zscore")
        with pytest.raises(ValueError, match="column 1"):
            scale_columns(X, "unit_interval")


class TestEighSymmetric:
    def test_diagonal_matrix(self):
        res = eigh_symmetric([[2.0, 0.0], [0.0, 1.0]])
        assert np.allclose(res.values, [2.0, 1.0])
        assert np.allclose(np.abs(res.vectors), np.eye(2))

    def test_ones_matrix(self):
        res = eigh_symmetric([[1.0, 1.0], [1.0, 1.0]])
        assert np.allclose(res.values, [2.0, 0.0], atol=1e-12)
        assert np.allclose(res.vectors[:, 0], [INV_SQRT2, INV_SQRT2])

    def test_sign_convention_on_tie(self):
        # Entries tie in magnitude; the first one must come out positive.
        res = eigh_symmetric([[1.0, -1.0], [-1.0, 1.0]])
        assert np.allclose(res.values, [2.0, 0.0], atol=1e-12)
        assert np.allclose(res.vectors[:, 0], [INV_SQRT2, -INV_SQRT2])
        assert res.vectors[0, 0] > 0

    def test_non_symmetric_rejected(self):
        with pytest.raises(ValueError, match="symmetric"):
            eigh_symmetric([[1.0, 2.0], [0.0, 1.0]])

    def test_descending_and_orthonormal(self, rng):
        for _ in range(10):
            n = int(rng.integers(2, 51))
            A = rng.normal(size=(n, n))
            S = A + A.T
            res = eigh_symmetric(S)
            assert np.all(np.diff(res.values) <= 1e-12)
            assert np.allclose(res.vectors.T @ res.vectors, np.eye(n), atol=1e-8)

    def test_eigen_pairs_and_reconstruction(self, rng):
        for _ in range(10):
            n = int(rng.integers(2, 51))
            A = rng.normal(size=(n, n))
            S = A + A.T
            res = eigh_symmetric(S)
            for j in range(n):
                lhs = S @ res.vectors[:, j]
                rhs = res.values[j] * res.vectors[:, j]
                assert np.max(np.abs(lhs - rhs)) < 1e-7 * max(1.0, abs(res.values[j]))
            recon = res.vectors @ np.diag(res.values) @ res.vectors.T
            assert np.linalg.norm(S - recon) / np.linalg.norm(S) < 1e-7


class TestSvdThin:
    def test_diagonal(self):
        res = svd_thin([[3.0, 0.0], [0.0, 2.0]])
        assert np.allclose(res.singular_values, [3.0, 2.0])

    def test_rank_one(self):
        res = svd_thin([[1.0, 2.0], [2.0, 4.0]])
        assert np.allclose(res.singular_values, [5.0, 0.0], atol=1e-8)

    def test_centering_preserves_singular_values(self, rng):
        X = center_columns(rng.normal(size=(9, 4)))
        a = svd_thin(X).singular_values
        b = svd_thin(center_columns(X)).singular_values
        assert np.allclose(a, b)

    def test_orthonormality_and_reconstruction(self, rng):
        for _ in range(10):
            n = int(rng.integers(2, 51))
            p = int(rng.integers(1, min(n, 20) + 1))
            X = rng.normal(size=(n, p))
            res = svd_thin(X)
            k = res.singular_values.size
            assert np.allclose(res.U.T @ res.U, np.eye(k), atol=1e-8)
            assert np.allclose(res.V.T @ res.V, np.eye(k), atol=1e-8)
            recon = res.U @ np.diag(res.singular_values) @ res.V.T
            assert np.linalg.norm(X - recon) / max(np.linalg.norm(X), 1e-300) < 1e-8

    def test_matches_gram_eigenvalues(self, rng):
        X = rng.normal(size=(12, 5))
        s = svd_thin(X).singular_values
        lam = eigh_symmetric(X.T @ X).values
        assert np.allclose(s, np.sqrt(np.maximum(lam, 0.0)), atol=1e-7)


class TestDoubleCenter:
    def test_two_point_hand_value(self):
        B = double_center([[0.0, 4.0], [4.0, 0.0]])
        assert np.allclose(B, [[1.0, -1.0], [-1.0, 1.0]])

    def test_zero_matrix(self):
        assert np.allclose(double_center(np.zeros((3, 3))), 0.0)

    def test_row_and_column_sums_vanish(self, rng):
        for _ in range(10):
            n = int(rng.integers(2, 20))
            X = rng.normal(size=(n, 3))
            D = np.sqrt(((X[:, None] - X[None, :]) ** 2).sum(axis=2))
            B = double_center(D * D)
            assert np.all(np.abs(B.sum(axis=0)) < 1e-9)
            assert np.all(np.abs(B.sum(axis=1)) < 1e-9)
            assert np.allclose(B, B.T)

    def test_asymmetric_rejected(self):
        with pytest.raises(ValueError, match="symmetric"):
            double_center([[0.0, 1.0], [2.0, 0.0]])

    def test_negative_entries_rejected(self):
        with pytest.raises(ValueError, match="negative"):
            double_center([[0.0, -1.0], [-1.0, 0.0]])

    def test_nonzero_diagonal_rejected(self):
        with pytest.raises(ValueError, match="diagonal"):
            double_center([[1.0, 2.0], [2.0, 1.0]])
