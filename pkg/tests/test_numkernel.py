import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import det3_cofactor, eig2_closed_form, j0_first_root, j0_series_oracle
from scs_mimo import (
    NumericalContractError,
    RngStream,
    bessel_j0,
    hermitian_eigenvalues,
    logdet_identity_plus,
    sample_complex_gaussian,
    sample_uniform_angle,
)


def random_hermitian(order, seed):
    raw = sample_complex_gaussian(RngStream(seed), 1.0, size=(order, order))
    return (raw + raw.conj().T) / 2.0


class TestBesselJ0:
    def test_at_zero(self):
        assert bessel_j0(0.0) == 1.0

    def test_first_root(self):
        root = j0_first_root()
        assert abs(root - 2.404825557695773) < 1e-12
        assert abs(bessel_j0(root)) < 1e-10

    def test_against_series_oracle_at_one(self):
        assert abs(bessel_j0(1.0) - j0_series_oracle(1.0)) < 1e-12

    def test_accuracy_to_1000(self):
        xs = np.linspace(0.0, 1000.0, 211)
        worst = max(
            abs(bessel_j0(float(x)) - j0_series_oracle(float(x), terms=1400, dps=500))
            for x in xs
        )
        assert worst < 1e-12

    def test_branch_agreement_at_crossover(self):
        for x in (15.999999, 16.0, 16.000001):
            assert abs(bessel_j0(x) - j0_series_oracle(x, terms=120)) < 1e-12

    def test_even(self):
        xs = np.linspace(0.1, 40.0, 50)
        assert np.array_equal(bessel_j0(xs), bessel_j0(-xs))

    def test_vector_matches_scalar(self):
        xs = np.array([0.0, 0.5, 7.9, 8.1, 16.1, 300.0])
        assert np.array_equal(bessel_j0(xs), np.array([bessel_j0(float(x)) for x in xs]))

    # below x ~ 2e-8, 1 - x^2/4 rounds to exactly 1.0 in float64, so the
    # strict bound is only checkable above the representability floor
    @given(st.floats(min_value=1e-6, max_value=3000.0))
    @settings(max_examples=200, deadline=None)
    def test_bounded_below_one(self, x):
        assert abs(bessel_j0(x)) < 1.0

    @pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
    def test_nonfinite_rejected(self, bad):
        with pytest.raises(NumericalContractError):
            bessel_j0(bad)


class TestHermitianEigenvalues:
    def test_identity(self):
        assert np.allclose(hermitian_eigenvalues(np.eye(3)), [1, 1, 1], atol=1e-14)

    def test_diagonal_sorted(self):
        assert np.allclose(
            hermitian_eigenvalues(np.diag([3.0, 1.0, 2.0])), [1, 2, 3], atol=1e-14
        )

    def test_2x2_closed_form(self):
        for seed in range(50):
            a = random_hermitian(2, seed)
            dev = np.max(np.abs(hermitian_eigenvalues(a) - eig2_closed_form(a)))
            assert dev < 1e-12

    def test_trace_identity_up_to_16(self):
        for seed, order in enumerate(range(2, 17)):
            a = random_hermitian(order, 100 + seed)
            eigs = hermitian_eigenvalues(a)
            assert abs(np.sum(eigs) - np.trace(a).real) < 1e-9 * order

    def test_ascending(self):
        eigs = hermitian_eigenvalues(random_hermitian(8, 3))
        assert np.all(np.diff(eigs) >= 0)

    def test_non_hermitian_rejected(self):
        bad = np.array([[1.0, 2.0], [0.5, 1.0]])
        with pytest.raises(NumericalContractError):
            hermitian_eigenvalues(bad)

    def test_zero_matrix(self):
        assert np.array_equal(hermitian_eigenvalues(np.zeros((4, 4))), np.zeros(4))


class TestLogdetIdentityPlus:
    def test_zero_matrix(self):
        for rho in (0.0, 1.0, 25.0):
            assert logdet_identity_plus(np.zeros((5, 5)), rho) == 0.0

    def test_order_one_scaled_identity(self):
        m = 128.0
        assert abs(logdet_identity_plus([[m]], 2.0) - np.log2(1 + 2.0 * m)) < 1e-12

    def test_rho_zero_exact(self):
        a = random_hermitian(4, 7)
        psd = a @ a.conj().T
        assert logdet_identity_plus(psd, 0.0) == 0.0

    def test_against_cofactor_determinant(self):
        for seed in range(20):
            raw = sample_complex_gaussian(RngStream(seed, (1,)), 1.0, size=(3, 5))
            psd = raw @ raw.conj().T
            rho = 0.5 + seed / 10
            direct = np.log2(det3_cofactor(np.eye(3) + rho * psd).real)
            assert abs(logdet_identity_plus(psd, rho) - direct) < 1e-9

    def test_indefinite_rejected(self):
        with pytest.raises(NumericalContractError):
            logdet_identity_plus(np.diag([1.0, -1.0]), 1.0)

    def test_negative_rho_rejected(self):
        with pytest.raises(NumericalContractError):
            logdet_identity_plus(np.eye(2), -1.0)


class TestRngStream:
    def test_repeatable(self):
        a = sample_complex_gaussian(RngStream(42, (3,)), 1.0, size=100)
        b = sample_complex_gaussian(RngStream(42, (3,)), 1.0, size=100)
        assert np.array_equal(a, b)

    def test_int_stream_id(self):
        assert RngStream(1, 5).path == (5,)
        a = sample_uniform_angle(RngStream(1, 5), size=10)
        b = sample_uniform_angle(RngStream(1, (5,)), size=10)
        assert np.array_equal(a, b)

    def test_children_differ(self):
        root = RngStream(0)
        a = sample_uniform_angle(root.child(0), size=10)
        b = sample_uniform_angle(root.child(1), size=10)
        assert not np.array_equal(a, b)

    def test_child_independent_of_sibling_use(self):
        root = RngStream(9)
        sample_uniform_angle(root.child(0), size=1000)
        fresh = sample_uniform_angle(RngStream(9).child(1), size=10)
        assert np.array_equal(sample_uniform_angle(root.child(1), size=10), fresh)


class TestComplexGaussian:
    def test_mean_within_clt_band(self):
        z = sample_complex_gaussian(RngStream(11), 2.0, size=100_000)
        assert abs(np.mean(z)) < 4.0 * np.sqrt(2.0 / 100_000)

    def test_energy_concentration(self):
        z = sample_complex_gaussian(RngStream(12), 1.0, size=100_000)
        assert abs(np.mean(np.abs(z) ** 2) - 1.0) < 0.05

    def test_component_variances(self):
        z = sample_complex_gaussian(RngStream(13), 4.0, size=200_000)
        assert abs(np.var(z.real) - 2.0) < 0.05
        assert abs(np.var(z.imag) - 2.0) < 0.05

    def test_nonpositive_variance_rejected(self):
        with pytest.raises(NumericalContractError):
            sample_complex_gaussian(RngStream(0), 0.0)


class TestUniformAngle:
    def test_range(self):
        theta = sample_uniform_angle(RngStream(21), size=100_000)
        assert np.all(theta >= 0.0) and np.all(theta < 2.0 * np.pi)

    def test_mean(self):
        theta = sample_uniform_angle(RngStream(22), size=100_000)
        assert abs(np.mean(theta) - np.pi) < 0.03

    def test_circular_mean_vanishes(self):
        theta = sample_uniform_angle(RngStream(23), size=100_000)
        assert abs(np.mean(np.exp(1j * theta))) < 0.02
