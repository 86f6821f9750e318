import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ucmvdr.array_model import (
    SnapshotBatch,
    SourceSpec,
    UlaGeometry,
    UlaScenario,
    complex_normal,
    ensemble_covariance,
    generate_snapshots,
    make_rng,
    steering_matrix,
    steering_vector,
)

from conftest import one_interferer


class TestGeometry:
    def test_rejects_single_sensor(self):
        with pytest.raises(ValueError):
            UlaGeometry(1)

    def test_rejects_nonpositive_spacing(self):
        with pytest.raises(ValueError):
            UlaGeometry(4, 0.0)

    def test_duplicate_interferer_directions(self):
        with pytest.raises(ValueError):
            UlaScenario(UlaGeometry(5), 0.0, (SourceSpec(0.5, 1.0), SourceSpec(0.5, 2.0)))

    def test_from_db(self):
        s = SourceSpec.from_db(0.2, 20.0, noise_power=2.0)
        assert s.power == pytest.approx(200.0)


class TestSteering:
    def test_broadside_is_all_ones(self):
        np.testing.assert_allclose(steering_vector(UlaGeometry(7), 0.0), np.ones(7))

    def test_endfire_alternates(self):
        # half-wavelength spacing, u = 1: phase advances by pi per element
        v = steering_vector(UlaGeometry(4), 1.0)
        np.testing.assert_allclose(v, [1, -1, 1, -1], atol=1e-15)

    def test_direction_out_of_range(self):
        with pytest.raises(ValueError):
            steering_vector(UlaGeometry(4), 1.01)
        with pytest.raises(ValueError):
            steering_matrix(UlaGeometry(4), [0.0, -1.5])

    @given(st.integers(2, 64), st.floats(-1, 1))
    def test_unit_modulus_and_mirror(self, n, u):
        g = UlaGeometry(n)
        v = steering_vector(g, u)
        np.testing.assert_allclose(np.abs(v), 1.0, atol=1e-14)
        np.testing.assert_allclose(steering_vector(g, -u), v.conj(), atol=1e-14)

    def test_matrix_columns(self):
        g = UlaGeometry(6)
        grid = np.linspace(-1, 1, 9)
        V = steering_matrix(g, grid)
        for k, u in enumerate(grid):
            np.testing.assert_allclose(V[:, k], steering_vector(g, u))


class TestEnsembleCovariance:
    def test_single_interferer_spectrum(self):
        # sigma^2 I + p v v^H: one eigenvalue sigma^2 + pN, the rest sigma^2
        sc = UlaScenario(UlaGeometry(8), 0.0, (SourceSpec(0.4, 5.0),), noise_power=2.0)
        lam = np.sort(ensemble_covariance(sc).eigvalsh())
        np.testing.assert_allclose(lam[:-1], 2.0, atol=1e-12)
        assert lam[-1] == pytest.approx(2.0 + 5.0 * 8)

    def test_noise_only(self):
        sc = UlaScenario(UlaGeometry(5), 0.0, (), noise_power=3.0)
        np.testing.assert_allclose(ensemble_covariance(sc).entries, 3.0 * np.eye(5))

    def test_exactly_hermitian(self):
        sc = UlaScenario(UlaGeometry(9), 0.1, (SourceSpec(0.3, 10.0), SourceSpec(-0.7, 1e4)))
        S = ensemble_covariance(sc).entries
        assert np.array_equal(S, S.conj().T)


class TestSnapshots:
    def test_shape_and_readonly(self, scene11):
        batch = generate_snapshots(scene11, 12, 3)
        assert isinstance(batch, SnapshotBatch)
        assert batch.data.shape == (11, 12)
        assert batch.num_snapshots == 12
        with pytest.raises(ValueError):
            batch.data[0, 0] = 0

    def test_same_seed_same_data(self, scene11):
        a = generate_snapshots(scene11, 12, (0, 5)).data
        b = generate_snapshots(scene11, 12, (0, 5)).data
        c = generate_snapshots(scene11, 12, (0, 6)).data
        assert np.array_equal(a, b)
        assert not np.allclose(a, c)

    def test_complex_normal_power(self):
        x = complex_normal(make_rng(1), 200_000, power=4.0)
        assert np.mean(np.abs(x) ** 2) == pytest.approx(4.0, rel=0.01)
        # circular: real and imaginary parts uncorrelated, equal variance
        assert np.var(x.real) == pytest.approx(2.0, rel=0.02)
        assert abs(np.mean(x * x)) < 0.05

    def test_sample_covariance_converges(self):
        sc = one_interferer(n=6, inr_db=10.0)
        x = generate_snapshots(sc, 50_000, 7).data
        scm = x @ x.conj().T / x.shape[1]
        S = ensemble_covariance(sc).entries
        assert np.linalg.norm(scm - S) / np.linalg.norm(S) < 0.03

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(0, 10_000))
    def test_seed_tuple_is_stable(self, base, t):
        a = make_rng((base, t)).standard_normal(3)
        b = make_rng((base, t)).standard_normal(3)
        assert np.array_equal(a, b)
