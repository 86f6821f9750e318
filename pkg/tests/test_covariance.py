import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ucmvdr.array_model import generate_snapshots
from ucmvdr.covariance import (
    CovarianceMatrix,
    IllConditionedError,
    diagonal_load,
    hermitian_solve,
    sample_covariance,
)


def test_scm_matches_outer_product_sum(scene11):
    batch = generate_snapshots(scene11, 15, 2)
    x = batch.data
    expected = sum(np.outer(x[:, l], x[:, l].conj()) for l in range(15)) / 15
    S = sample_covariance(batch)
    assert S.kind == "sample"
    np.testing.assert_allclose(S.entries, expected, atol=1e-12)


def test_scm_accepts_raw_array(rng):
    x = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    np.testing.assert_allclose(sample_covariance(x).entries, x @ x.conj().T / 4)


def test_rejects_non_hermitian():
    with pytest.raises(ValueError, match="Hermitian"):
        CovarianceMatrix(np.array([[1, 2], [0, 1]], dtype=complex))


def test_entries_are_readonly():
    c = CovarianceMatrix(np.eye(3))
    with pytest.raises(ValueError):
        c.entries[0, 0] = 5


class TestDiagonalLoad:
    def test_adds_to_diagonal(self):
        S = CovarianceMatrix(np.array([[2, 1j], [-1j, 3]]))
        L = diagonal_load(S, 0.5)
        assert L.kind == "loaded"
        np.testing.assert_allclose(L.entries, [[2.5, 1j], [-1j, 3.5]])

    def test_zero_returns_input(self):
        S = CovarianceMatrix(np.eye(2))
        assert diagonal_load(S, 0.0) is S

    @pytest.mark.parametrize("bad", [-1e-3, float("nan")])
    def test_rejects_bad_loading(self, bad):
        with pytest.raises(ValueError):
            diagonal_load(CovarianceMatrix(np.eye(2)), bad)


class TestHermitianSolve:
    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 20), st.integers(0, 1000))
    def test_matches_dense_solve(self, n, seed):
        r = np.random.default_rng(seed)
        a = r.standard_normal((n, n + 3)) + 1j * r.standard_normal((n, n + 3))
        A = a @ a.conj().T + 0.1 * np.eye(n)
        b = r.standard_normal(n) + 1j * r.standard_normal(n)
        x = hermitian_solve(A, b)
        np.testing.assert_allclose(x, np.linalg.solve(A, b), rtol=1e-8, atol=1e-10)

    def test_rank_deficient_scm_raises(self, scene11):
        # fewer snapshots than sensors: rank <= L < N
        S = sample_covariance(generate_snapshots(scene11, 5, 0))
        with pytest.raises(IllConditionedError):
            hermitian_solve(S, np.ones(11))

    def test_loading_rescues_rank_deficient_scm(self, scene11):
        S = sample_covariance(generate_snapshots(scene11, 5, 0))
        x = hermitian_solve(diagonal_load(S, 1.0), np.ones(11))
        assert np.all(np.isfinite(x))

    def test_indefinite_raises(self):
        with pytest.raises(IllConditionedError):
            hermitian_solve(np.diag([1.0, -1.0]), np.ones(2))

    def test_is_linalg_error(self):
        assert issubclass(IllConditionedError, np.linalg.LinAlgError)
