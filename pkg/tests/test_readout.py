import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pastq.errors import ContractViolationError, IllConditionedError
from pastq.readout import (
    FidelityModel,
    ReadoutChannel,
    apply_readout_error,
    correct_fidelity,
    e00_from_xi,
    effect_from_xi,
    fidelity,
    forward_qnd_update,
    sample_xi,
    xi_from_e00,
)
from pastq.states import make_diagonal_state

CHANNEL = ReadoutChannel(sigma=0.4)
MODEL = FidelityModel()

signals = st.floats(min_value=-50.0, max_value=50.0)


class TestChannel:
    def test_sigma_must_be_positive(self):
        with pytest.raises(ContractViolationError):
            ReadoutChannel(sigma=0.0)

    def test_means_are_fixed(self):
        with pytest.raises(ContractViolationError):
            ReadoutChannel(sigma=0.4, mean_plus=2.0)


class TestSampleXi:
    def test_degenerate_width(self):
        rng = np.random.default_rng(0)
        xi = sample_xi(ReadoutChannel(sigma=1e-12), 0, rng)
        assert xi == pytest.approx(1.0, abs=1e-9)

    def test_empirical_mean_excited(self):
        rng = np.random.default_rng(11)
        xs = np.array([sample_xi(CHANNEL, 1, rng) for _ in range(100_000)])
        # standard error sigma/sqrt(N) ~ 0.0013; 4 sigma margin
        assert xs.mean() == pytest.approx(-1.0, abs=0.006)

    def test_empirical_variance(self):
        rng = np.random.default_rng(12)
        xs = np.array([sample_xi(CHANNEL, 0, rng) for _ in range(100_000)])
        assert xs.var() == pytest.approx(0.16, rel=0.05)

    def test_bad_basis_index(self):
        with pytest.raises(ContractViolationError):
            sample_xi(CHANNEL, 2, np.random.default_rng(0))


class TestEffectFromXi:
    def test_zero_signal_uninformative(self):
        assert effect_from_xi(CHANNEL, 0.0).diag[0] == pytest.approx(0.5, abs=1e-15)

    def test_large_signal_saturates(self):
        assert e00_from_xi(CHANNEL, 1e6) == pytest.approx(1.0, abs=1e-15)
        assert e00_from_xi(CHANNEL, -1e6) == pytest.approx(0.0, abs=1e-15)

    def test_logistic_closed_form(self):
        channel = ReadoutChannel(sigma=0.5)
        assert e00_from_xi(channel, 1.0) == pytest.approx(1.0 / (1.0 + np.exp(-8.0)), abs=1e-15)

    def test_matches_two_gaussian_likelihood_ratio(self):
        # independent route: evaluate both Gaussians explicitly
        for xi in np.linspace(-2.5, 2.5, 41):
            p0 = np.exp(-((xi - 1.0) ** 2) / (2 * 0.4**2))
            p1 = np.exp(-((xi + 1.0) ** 2) / (2 * 0.4**2))
            assert e00_from_xi(CHANNEL, xi) == pytest.approx(p0 / (p0 + p1), abs=1e-12)

    @given(xi=signals)
    @settings(max_examples=100)
    def test_symmetry(self, xi):
        assert e00_from_xi(CHANNEL, xi) + e00_from_xi(CHANNEL, -xi) == pytest.approx(
            1.0, abs=1e-12
        )

    def test_strictly_monotone(self):
        # strict on the informative range; saturates to 0/1 in float beyond it
        grid = np.linspace(-1.2, 1.2, 241)
        vals = e00_from_xi(CHANNEL, grid)
        assert np.all(np.diff(vals) > 0)
        wide = e00_from_xi(CHANNEL, np.linspace(-30, 30, 601))
        assert np.all(np.diff(wide) >= 0)

    def test_inverse_roundtrip(self):
        for e00 in (0.068, 0.25, 0.466, 0.5, 0.916):
            assert e00_from_xi(CHANNEL, xi_from_e00(CHANNEL, e00)) == pytest.approx(
                e00, abs=1e-12
            )


class TestForwardQndUpdate:
    def test_zero_signal_no_update(self):
        state = make_diagonal_state(0.91)
        assert forward_qnd_update(state, CHANNEL, 0.0).diag == pytest.approx(
            (0.91, 0.09), abs=1e-15
        )

    @given(xi=st.floats(min_value=-5, max_value=5))
    @settings(max_examples=60)
    def test_flat_prior_returns_likelihood(self, xi):
        post = forward_qnd_update(make_diagonal_state(0.5), CHANNEL, xi)
        assert post.diag[0] == pytest.approx(float(e00_from_xi(CHANNEL, xi)), abs=1e-12)

    def test_bayes_arithmetic(self):
        xi = xi_from_e00(CHANNEL, 0.25)
        post = forward_qnd_update(make_diagonal_state(0.91), CHANNEL, xi)
        expected = 0.91 * 0.25 / (0.91 * 0.25 + 0.09 * 0.75)
        assert post.diag[0] == pytest.approx(expected, abs=1e-12)
        assert post.diag[0] == pytest.approx(0.7712, abs=5e-5)

    def test_update_order_commutes(self):
        xis = [0.3, -1.2, 0.7, 2.1, -0.4]
        forward = make_diagonal_state(0.7)
        backward = make_diagonal_state(0.7)
        for xi in xis:
            forward = forward_qnd_update(forward, CHANNEL, xi)
        for xi in reversed(xis):
            backward = forward_qnd_update(backward, CHANNEL, xi)
        assert forward.diag == pytest.approx(backward.diag, abs=1e-9)

    def test_requires_diagonal_state(self):
        from pastq.states import QubitState

        coherent = QubitState(np.full((2, 2), 0.5, dtype=complex))
        with pytest.raises(ContractViolationError):
            forward_qnd_update(coherent, CHANNEL, 0.3)


class TestFidelity:
    def test_endpoints(self):
        assert fidelity(MODEL, 0.0) == pytest.approx(0.99, abs=1e-12)
        assert fidelity(MODEL, np.pi) == pytest.approx(0.945, abs=1e-12)

    def test_midpoint(self):
        assert fidelity(MODEL, np.pi / 2) == pytest.approx(0.99 - 0.5 * 0.045, abs=1e-12)

    def test_monotone_non_increasing(self):
        grid = np.linspace(0, np.pi, 100)
        vals = [fidelity(MODEL, t) for t in grid]
        assert np.all(np.diff(vals) <= 1e-15)

    def test_model_validation(self):
        with pytest.raises(ContractViolationError):
            FidelityModel(base_fidelity=0.4)
        with pytest.raises(ContractViolationError):
            FidelityModel(t1=-1.0)


class TestApplyReadoutError:
    def test_perfect_model_never_flips(self):
        model = FidelityModel(base_fidelity=1.0, t1=1e6)
        rng = np.random.default_rng(0)
        assert all(
            apply_readout_error(+1, 0.7, model, rng) == +1 for _ in range(1000)
        )

    def test_flip_rate_theta_zero(self):
        rng = np.random.default_rng(21)
        flips = sum(apply_readout_error(+1, 0.0, MODEL, rng) == -1 for _ in range(100_000))
        # binomial stderr ~ 3e-4
        assert flips / 100_000 == pytest.approx(0.01, abs=0.0013)

    def test_flip_rate_theta_pi(self):
        rng = np.random.default_rng(22)
        flips = sum(apply_readout_error(+1, np.pi, MODEL, rng) == -1 for _ in range(100_000))
        assert flips / 100_000 == pytest.approx(0.055, abs=0.003)


class TestCorrectFidelity:
    def test_perfect_fidelity_identity(self):
        model = FidelityModel(base_fidelity=1.0, t1=1e9)
        assert correct_fidelity(0.37, 1.1, model) == pytest.approx(0.37, abs=1e-12)

    def test_algebraic_roundtrip(self):
        theta, p = np.pi / 2, 0.7
        f = fidelity(MODEL, theta)
        raw = f * p + (1 - f) * (1 - p)
        assert correct_fidelity(raw, theta, MODEL) == pytest.approx(p, abs=1e-12)

    @pytest.mark.parametrize("theta", [0.0, np.pi / 4, np.pi / 2, np.pi])
    def test_symmetric_fixed_point(self, theta):
        assert correct_fidelity(0.5, theta, MODEL) == pytest.approx(0.5, abs=1e-12)

    def test_singular_confusion_matrix(self):
        # base - depth = 0.5 exactly at theta = pi
        depth = 0.49
        t1 = MODEL.t_m / (-np.log(1.0 - depth))
        model = FidelityModel(base_fidelity=0.99, t_m=MODEL.t_m, t1=t1)
        with pytest.raises(IllConditionedError):
            correct_fidelity(0.7, np.pi, model)


class TestMixtureStatistics:
    def test_e00_mean_matches_quadrature(self):
        # oracle: quadrature of E00(xi) against the two-Gaussian mixture pdf
        p0, sigma, n = 0.7, 0.4, 100_000
        rng = np.random.default_rng(33)
        z = (rng.random(n) >= p0).astype(int)
        xi = np.where(z == 0, 1.0, -1.0) + sigma * rng.standard_normal(n)
        empirical = np.mean(e00_from_xi(CHANNEL, xi))
        grid = np.linspace(-6, 6, 20001)
        pdf = p0 * np.exp(-((grid - 1) ** 2) / (2 * sigma**2)) + (1 - p0) * np.exp(
            -((grid + 1) ** 2) / (2 * sigma**2)
        )
        pdf /= np.sqrt(2 * np.pi) * sigma
        expected = np.trapezoid(e00_from_xi(CHANNEL, grid) * pdf, grid)
        stderr = np.std(e00_from_xi(CHANNEL, xi)) / np.sqrt(n)
        assert abs(empirical - expected) < 3 * stderr
