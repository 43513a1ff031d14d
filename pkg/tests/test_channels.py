import math

import numpy as np
import pytest
from scipy import stats

from cvlearn.channels import (
    ChannelSpec,
    ChannelValidationError,
    depolarizing,
    eval_lambda,
    eval_p,
    five_peak_example,
    sample_displacement,
    three_peak,
)
from cvlearn.channels import sample_displacements_batch
from cvlearn.numerics import DimensionMismatchError, RandomStream, fourier_oracle_1mode
from helpers import cdf_from_density, chi2_grid_test


def random_hermitian_spec(rng, n=None):
    n = n or int(rng.integers(1, 4))
    sigma = float(rng.uniform(0.2, 0.8))
    pairs = int(rng.integers(0, 3))
    weights, centers = [], []
    budget = 1.0  # zero-peak weight; keep sum 2|c| below it
    for _ in range(pairs):
        c = (rng.standard_normal() + 1j * rng.standard_normal()) * 0.1
        weights.append(c)
        centers.append(rng.standard_normal(n) + 1j * rng.standard_normal(n))
    scale = sum(2 * abs(c) for c in weights)
    if scale > 0.9:
        weights = [c * 0.9 / scale for c in weights]
    # renormalize the zero weight so lambda(0) = 1
    z = 1.0 - sum(
        2 * c.real * math.exp(-float(np.sum(np.abs(g) ** 2)) / (2 * sigma**2))
        for c, g in zip(weights, centers)
    )
    # keep the certificate: rescale pair weights if needed
    while sum(2 * abs(c) for c in weights) > z:
        weights = [0.8 * c for c in weights]
        z = 1.0 - sum(
            2 * c.real * math.exp(-float(np.sum(np.abs(g) ** 2)) / (2 * sigma**2))
            for c, g in zip(weights, centers)
        )
    return ChannelSpec(
        n=n,
        sigma=sigma,
        zero_weight=z,
        pair_weights=np.array(weights, dtype=complex),
        pair_centers=np.array(centers, dtype=complex).reshape(len(weights), n),
    )


class TestBuilders:
    def test_three_peak_zero_gamma_is_depolarizing(self):
        a = three_peak(2, np.zeros(2), 0.25, 0.3)
        b = depolarizing(2, 0.3)
        assert a.digest() == b.digest()
        rng = np.random.default_rng(0)
        pts = rng.standard_normal((50, 2)) + 1j * rng.standard_normal((50, 2))
        assert np.array_equal(eval_lambda(a, pts), eval_lambda(b, pts))

    def test_three_peak_normalized_at_origin(self):
        for gamma in [np.array([1.6]), np.array([0.3 - 0.9j, 1.1j])]:
            spec = three_peak(len(gamma), gamma, 0.2, 0.3)
            assert eval_lambda(spec, np.zeros(len(gamma))) == pytest.approx(1.0, abs=1e-15)

    def test_three_peak_value_at_gamma(self):
        spec = three_peak(1, [1.6], 0.25, 0.3)
        got = eval_lambda(spec, np.array([1.6]))
        want = math.exp(-2.56 / 0.18) + 0.5j * (1.0 - math.exp(-4 * 2.56 / 0.18))
        assert got == pytest.approx(want, abs=1e-15)

    def test_three_peak_distinguishing_margin(self):
        # |lambda_dep(g) - lambda_{+-g}(g)| = 2 eps0 |1 - e^{-4|g|^2/2s^2}|
        rng = np.random.default_rng(5)
        dep = depolarizing(2, 0.3)
        for _ in range(25):
            gamma = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            eps0 = float(rng.uniform(0.01, 0.25))
            spec = three_peak(2, gamma, eps0, 0.3)
            gsq = float(np.sum(np.abs(gamma) ** 2))
            margin = 2 * eps0 * abs(1 - math.exp(-4 * gsq / 0.18))
            got = abs(eval_lambda(dep, gamma) - eval_lambda(spec, gamma))
            assert got == pytest.approx(margin, rel=1e-10, abs=1e-12)

    def test_three_peak_eps0_bounds(self):
        with pytest.raises(ChannelValidationError):
            three_peak(1, [1.0], 0.2500001, 0.3)
        with pytest.raises(ValueError):
            three_peak(1, [1.0], 0.0, 0.3)

    def test_five_peak_normalized(self):
        spec = five_peak_example(0.3, 1.6)
        assert eval_lambda(spec, np.zeros(1)) == pytest.approx(1.0, abs=1e-15)

    def test_five_peak_value_near_quarter(self):
        spec = five_peak_example(0.3, 1.6)
        assert eval_lambda(spec, np.array([1.6])) == pytest.approx(0.25, abs=1e-5)

    def test_five_peak_density_at_origin(self):
        spec = five_peak_example(0.3, 1.6)
        assert eval_p(spec, np.zeros(1)) == pytest.approx(2 * 0.09 / math.pi, rel=1e-12)

    def test_five_peak_density_closed_form(self):
        # p = (2s^2/pi) e^{-2s^2|a|^2} [cos^2(a_r g_i - a_i g_r) + sin^2(a_r g_r + a_i g_i)]
        rng = np.random.default_rng(41)
        for gamma in [1.6, 0.9 - 1.2j, -0.4 + 2.0j]:
            sigma = 0.3
            spec = five_peak_example(sigma, gamma)
            for _ in range(25):
                a = complex(rng.standard_normal(), rng.standard_normal())
                g = complex(gamma)
                mod = (
                    math.cos(a.real * g.imag - a.imag * g.real) ** 2
                    + math.sin(a.real * g.real + a.imag * g.imag) ** 2
                )
                want = (2 * sigma**2 / math.pi) * math.exp(-2 * sigma**2 * abs(a) ** 2) * mod
                assert eval_p(spec, np.array([a])) == pytest.approx(want, rel=1e-10, abs=1e-300)

    def test_sigma_zero_rejected(self):
        with pytest.raises(ChannelValidationError):
            depolarizing(1, 0.0)


class TestEvalLambda:
    def test_origin_is_one_for_random_specs(self):
        rng = np.random.default_rng(21)
        for _ in range(30):
            spec = random_hermitian_spec(rng)
            assert eval_lambda(spec, np.zeros(spec.n)) == pytest.approx(1.0, abs=1e-12)

    def test_hermitian_symmetry_exact(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            spec = random_hermitian_spec(rng)
            beta = rng.standard_normal(spec.n) + 1j * rng.standard_normal(spec.n)
            assert eval_lambda(spec, -beta) == complex(eval_lambda(spec, beta)).conjugate()

    def test_bounded_by_one(self):
        rng = np.random.default_rng(13)
        for spec in [five_peak_example(0.3, 1.6), three_peak(2, [1.0, -0.5j], 0.25, 0.3)]:
            pts = rng.standard_normal((1000, spec.n)) + 1j * rng.standard_normal((1000, spec.n))
            pts *= math.sqrt(4.0 * spec.n) / 2.0
            assert np.all(np.abs(eval_lambda(spec, pts)) <= 1.0 + 1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            eval_lambda(five_peak_example(0.3, 1.6), np.zeros(2))

    def test_matches_fourier_inverse_of_density(self):
        # lambda(beta) = pi^2 * oracle(p_grid at alpha) evaluated at beta
        spec = five_peak_example(0.3, 1.6)
        ax = np.linspace(-13.0, 13.0, 401)
        p_grid = eval_p(spec, (ax[:, None] + 1j * ax[None, :]).reshape(-1, 1)).reshape(401, 401)
        res = fourier_oracle_1mode(p_grid.astype(complex), ax, ax, 0.8)
        assert res.coverage_ok
        assert math.pi**2 * res.value == pytest.approx(complex(eval_lambda(spec, np.array([0.8]))), abs=1e-6)

    def test_per_pair_widths_eval_only(self):
        spec = five_peak_example(0.3, 1.6)
        widths = np.array([0.3, 0.4])
        zero = 1.0 - sum(
            2 * c.real * math.exp(-abs(g[0]) ** 2 / (2 * w**2))
            for c, g, w in zip(spec.pair_weights, spec.pair_centers, widths)
        )
        wide = ChannelSpec(
            n=1,
            sigma=0.3,
            zero_weight=zero,
            pair_weights=spec.pair_weights,
            pair_centers=spec.pair_centers,
            pair_widths=widths,
        )
        assert not wide.samplable
        assert eval_lambda(wide, np.zeros(1)) == pytest.approx(1.0, abs=1e-12)
        assert eval_lambda(wide, np.array([1.6])) != eval_lambda(spec, np.array([1.6]))
        with pytest.raises(ChannelValidationError):
            eval_p(wide, np.zeros(1))
        with pytest.raises(ChannelValidationError):
            sample_displacement(wide, RandomStream(0))


class TestEvalP:
    def test_three_peak_modulation_identity(self):
        # p propto e^{-2s^2|a|^2} (1 + 4 eps0 sin(2(Im g . Re a - Re g . Im a)))
        rng = np.random.default_rng(31)
        spec = three_peak(2, [0.7 + 0.2j, -1.1j], 0.21, 0.3)
        pref = (2 * 0.09 / math.pi) ** 2
        for _ in range(40):
            a = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            phase = 2 * float(np.sum(np.imag([0.7 + 0.2j, -1.1j] * np.conj(a) * 0)))  # placeholder
            g = np.array([0.7 + 0.2j, -1.1j])
            arg = 2 * float(np.sum(g.imag * a.real - g.real * a.imag))
            want = pref * math.exp(-2 * 0.09 * float(np.sum(np.abs(a) ** 2))) * (1 + 4 * 0.21 * math.sin(arg))
            assert eval_p(spec, a) == pytest.approx(want, rel=1e-10, abs=1e-300)

    def test_depolarizing_is_product_gaussian(self):
        sigma = 0.45
        spec = depolarizing(1, sigma)
        rng = np.random.default_rng(7)
        var = 1.0 / (4 * sigma**2)
        for _ in range(20):
            a = complex(rng.standard_normal() + 1j * rng.standard_normal())
            want = math.exp(-(a.real**2 + a.imag**2) / (2 * var)) / (2 * math.pi * var)
            assert eval_p(spec, [a]) == pytest.approx(want, rel=1e-12)

    def test_nonnegative_and_touches_zero(self):
        spec = five_peak_example(0.3, 1.6)
        rng = np.random.default_rng(17)
        pts = 2.5 * (rng.standard_normal((10000, 1)) + 1j * rng.standard_normal((10000, 1)))
        assert np.all(eval_p(spec, pts) >= 0.0)
        # modulation zero at gamma*alpha_i = pi/2, alpha_r = 0
        zero_pt = np.array([1j * math.pi / 3.2])
        assert eval_p(spec, zero_pt) == pytest.approx(0.0, abs=1e-16)

    def test_grid_integral_one(self):
        spec = five_peak_example(0.3, 1.6)
        ax = np.linspace(-9.0, 9.0, 451)
        p = eval_p(spec, (ax[:, None] + 1j * ax[None, :]).reshape(-1, 1)).reshape(451, 451)
        integral = np.trapezoid(np.trapezoid(p, ax, axis=1), ax)
        assert integral == pytest.approx(1.0, abs=1e-4)

    def test_mc_self_consistency(self):
        # E_{a~p}[p(a)] should match the grid integral of p^2
        spec = three_peak(1, [1.2j], 0.25, 0.35)
        ax = np.linspace(-8.0, 8.0, 401)
        p = eval_p(spec, (ax[:, None] + 1j * ax[None, :]).reshape(-1, 1)).reshape(401, 401)
        target = np.trapezoid(np.trapezoid(p * p, ax, axis=1), ax)
        rng = RandomStream(99).generator()
        draws = sample_displacements_batch(spec, 10**5, rng)
        vals = eval_p(spec, draws)
        se = vals.std() / math.sqrt(vals.size)
        assert abs(vals.mean() - target) < 5 * se


class TestSampling:
    def test_depolarizing_accepts_first_try(self):
        spec = depolarizing(2, 0.5)
        for i in range(10):
            assert sample_displacement(spec, RandomStream(i)).acceptance_trials == 1

    def test_three_peak_expected_trials(self):
        spec = three_peak(1, [1.6j], 0.25, 0.3)
        trials = [sample_displacement(spec, RandomStream(0).substream(i)).acceptance_trials for i in range(10000)]
        assert np.mean(trials) == pytest.approx(2.0, abs=0.06)  # M = 1 + 4 eps0 = 2

    def test_marginal_ks(self):
        spec = three_peak(1, [1.6j], 0.25, 0.3)
        rng = RandomStream(123).generator()
        draws = sample_displacements_batch(spec, 10**6, rng)[:, 0]
        xs = np.linspace(-10, 10, 4001)
        # marginal over alpha_i of the closed-form density
        grid = xs[:, None] + 1j * np.linspace(-10, 10, 801)[None, :]
        dens = eval_p(spec, grid.reshape(-1, 1)).reshape(grid.shape)
        marg = np.trapezoid(dens, np.linspace(-10, 10, 801), axis=1)
        stat = stats.kstest(draws.real, cdf_from_density(xs, marg)).statistic
        assert stat < 1.628 / math.sqrt(draws.size)  # 1% critical value

    def test_histogram_chi2(self):
        spec = three_peak(1, [1.6j], 0.25, 0.3)
        rng = RandomStream(2718).generator()
        draws = sample_displacements_batch(spec, 10**6, rng)[:, 0]
        _, _, pvalue = chi2_grid_test(draws, lambda z: eval_p(spec, z.reshape(-1, 1)), extent=6.0)
        assert pvalue > 1e-3

    def test_batch_determinism(self):
        spec = five_peak_example(0.3, 1.6)
        a = sample_displacements_batch(spec, 500, RandomStream(5).generator())
        b = sample_displacements_batch(spec, 500, RandomStream(5).generator())
        assert np.array_equal(a, b)


class TestSerialization:
    def test_round_trip_bit_exact(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            spec = random_hermitian_spec(rng)
            doc = spec.to_json()
            back = ChannelSpec.from_json(doc)
            assert back.to_json() == doc
            assert back.digest() == spec.digest()

    def test_closure_violations_rejected(self):
        with pytest.raises(ChannelValidationError):
            ChannelSpec.from_peaks(1, 0.3, [(1.0, [0.0]), (0.5j, [1.0])])
        with pytest.raises(ChannelValidationError):
            ChannelSpec.from_peaks(1, 0.3, [(1.0, [0.0]), (0.5j, [1.0]), (0.5j, [-1.0])])

    def test_normalization_violation_rejected(self):
        with pytest.raises(ChannelValidationError):
            ChannelSpec.from_peaks(1, 0.3, [(0.9, [0.0])])

    def test_nonnegativity_violation_rejected(self):
        # weights valid under closure but exceeding the certificate
        g = 4.0  # far peak: normalization barely affected
        w = 0.6
        with pytest.raises(ChannelValidationError):
            ChannelSpec.from_peaks(
                1,
                0.3,
                [
                    (1.0 - 2 * w * math.exp(-g * g / 0.18), [0.0]),
                    (w, [g]),
                    (w, [-g]),
                ],
            )

    def test_duplicate_centers_merged(self):
        zero = 1.0 - 0.5 * math.exp(-(1.6**2) / 0.18)
        spec = ChannelSpec.from_peaks(
            1, 0.3, [(zero, [0.0]), (0.125, [1.6]), (0.125, [1.6]), (0.125, [-1.6]), (0.125, [-1.6])]
        )
        assert spec.pair_weights.shape == (1,)
        assert spec.pair_weights[0] == 0.25

    def test_malformed_document(self):
        with pytest.raises(ChannelValidationError):
            ChannelSpec.from_json('{"n": 1}')
