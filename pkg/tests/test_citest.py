import math

import numpy as np
import pytest
from scipy import stats

from helpers import exact_correlation_sample
from stablesep.citest import (
    METHOD_FISHER_Z,
    METHOD_RCIT,
    METHOD_RCIT_FALLBACK,
    CiTestResult,
    RcitParams,
    fisher_z_test,
    hbe_pvalue,
    median_bandwidth,
    partial_correlation,
    rcit_test,
    rff_features,
)
from stablesep.errors import DegenerateInput

# frozen oracle for the hand-worked Fisher-z example (r = 1/3, n = 100):
# statistic from direct arithmetic, p from a high-precision erfc
# evaluation independent of scipy
FISHER_STAT_ORACLE = math.atanh(1.0 / 3.0) * math.sqrt(96.0)  # 3.3957138180441715
FISHER_P_ORACLE = 0.000684498872668


class TestPartialCorrelation:
    def test_recursion_formula_hand_value(self):
        # all three pairwise sample correlations 0.5 -> r_xy.z = 1/3
        R = np.full((3, 3), 0.5) + 0.5 * np.eye(3)
        X = exact_correlation_sample(100, R, seed=3)
        r = partial_correlation(X[:, 0], X[:, 1], X[:, 2])
        assert abs(r - 1.0 / 3.0) < 1e-9

    def test_independent_inputs_near_zero(self):
        rng = np.random.default_rng(7)
        x, y, z = rng.normal(size=(3, 10_000))
        assert abs(partial_correlation(x, y, z)) < 0.1

    def test_perfect_dependence_clamped(self):
        rng = np.random.default_rng(8)
        x = rng.normal(size=200)
        z = rng.normal(size=200)
        r = partial_correlation(x, x, z)
        assert r == pytest.approx(1.0, abs=1e-9)
        assert r < 1.0  # clamp keeps atanh finite

    def test_collinear_conditioning_degenerate(self):
        rng = np.random.default_rng(9)
        x = rng.normal(size=100)
        y = rng.normal(size=100)
        with pytest.raises(DegenerateInput):
            partial_correlation(x, y, 2.0 * x + 1.0)

    def test_constant_vector_degenerate(self):
        rng = np.random.default_rng(10)
        x = rng.normal(size=100)
        with pytest.raises(DegenerateInput):
            partial_correlation(x, np.ones(100), rng.normal(size=100))

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            partial_correlation([1.0, 2.0, 3.0, 4.0, 5.0], [1.0] * 5, [1.0] * 4)

    def test_too_short(self):
        with pytest.raises(ValueError):
            partial_correlation([1.0, 2.0], [2.0, 1.0], [0.0, 1.0])


class TestFisherZ:
    def test_hand_example(self):
        R = np.full((3, 3), 0.5) + 0.5 * np.eye(3)
        X = exact_correlation_sample(100, R, seed=3)
        res = fisher_z_test(X[:, 0], X[:, 1], X[:, 2])
        assert abs(res.statistic - FISHER_STAT_ORACLE) < 1e-6
        assert abs(res.p_value - FISHER_P_ORACLE) < 1e-6
        assert res.method == METHOD_FISHER_Z

    def test_null_center(self):
        # r_xy = r_xz * r_yz makes the partial correlation exactly zero
        R = np.eye(3)
        X = exact_correlation_sample(50, R, seed=4)
        res = fisher_z_test(X[:, 0], X[:, 1], X[:, 2])
        assert abs(res.statistic) < 1e-6
        assert res.p_value > 1.0 - 1e-6

    def test_statistic_is_signed(self):
        R = np.array([[1.0, -0.6, 0.1], [-0.6, 1.0, 0.0], [0.1, 0.0, 1.0]])
        X = exact_correlation_sample(80, R, seed=5)
        res = fisher_z_test(X[:, 0], X[:, 1], X[:, 2])
        assert res.statistic < 0

    def test_type_one_error_rate(self):
        hits = 0
        for s in range(1000):
            rng = np.random.default_rng(10_000 + s)
            x, y, z = rng.normal(size=(3, 500))
            hits += fisher_z_test(x, y, z).p_value < 0.05
        assert 0.03 <= hits / 1000 <= 0.07

    def test_null_pvalues_uniform(self):
        ps = []
        for s in range(2000):
            rng = np.random.default_rng(60_000 + s)
            x, y, z = rng.normal(size=(3, 100))
            ps.append(fisher_z_test(x, y, z).p_value)
        ks = stats.kstest(ps, "uniform").statistic
        assert ks < 0.05

    def test_symmetric_in_x_and_y(self):
        rng = np.random.default_rng(11)
        x, y, z = rng.normal(size=(3, 300))
        a = fisher_z_test(x, y, z)
        b = fisher_z_test(y, x, z)
        assert abs(a.statistic - b.statistic) < 1e-12
        assert abs(a.p_value - b.p_value) < 1e-12

    def test_affine_invariance(self):
        rng = np.random.default_rng(12)
        x, y, z = rng.normal(size=(3, 300))
        a = fisher_z_test(x, y, z)
        b = fisher_z_test(3.0 * x + 1.0, 0.5 * y - 2.0, 10.0 * z + 4.0)
        assert abs(a.p_value - b.p_value) < 1e-8


class TestMedianBandwidth:
    def test_three_points(self):
        # distances {1, 1, 2} -> median 1
        assert median_bandwidth([0.0, 1.0, 2.0]) == 1.0

    def test_two_points(self):
        assert median_bandwidth([0.0, 4.0]) == 4.0

    def test_all_equal_degenerate(self):
        with pytest.raises(DegenerateInput):
            median_bandwidth(np.full(10, 3.3))

    def test_large_n_uses_stride_subsample(self):
        rng = np.random.default_rng(13)
        v = rng.normal(size=1730)
        stride = int(np.ceil(len(v) / 500.0))
        sub = v[::stride]
        iu = np.triu_indices(len(sub), k=1)
        expect = float(np.median(np.abs(sub[iu[0]] - sub[iu[1]])))
        assert median_bandwidth(v) == pytest.approx(expect, abs=1e-15)

    def test_heavy_ties_still_positive(self):
        v = np.array([0.0] * 400 + [1.0] * 3)
        bw = median_bandwidth(v)
        assert bw > 0.0


class TestRffFeatures:
    def test_bounded_by_scale(self):
        rng = np.random.Generator(np.random.Philox(5))
        f = rff_features(np.linspace(-3, 3, 50), 8, 1.0, rng)
        assert f.shape == (50, 8)
        assert np.abs(f).max() <= math.sqrt(2.0 / 8.0) + 1e-12

    def test_deterministic_given_seed(self):
        v = np.linspace(-2, 2, 40)
        a = rff_features(v, 6, 0.7, np.random.Generator(np.random.Philox(9)))
        b = rff_features(v, 6, 0.7, np.random.Generator(np.random.Philox(9)))
        np.testing.assert_array_equal(a, b)

    def test_bochner_identity(self):
        # inner products of the feature map approximate the Gaussian
        # kernel exp(-(x - x')^2 / (2 bw^2))
        rng = np.random.Generator(np.random.Philox(21))
        bw = 1.3
        x = rng.normal(size=60)
        f = rff_features(x, 2000, bw, rng)
        gram = f @ f.T
        expect = np.exp(-((x[:, None] - x[None, :]) ** 2) / (2.0 * bw * bw))
        assert np.abs(gram - expect).max() < 0.05

    def test_invalid_args(self):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            rff_features([1.0, 2.0], 0, 1.0, rng)
        with pytest.raises(ValueError):
            rff_features([1.0, 2.0], 3, 0.0, rng)


class TestHbePvalue:
    def test_zero_statistic(self):
        assert hbe_pvalue([1.0], 0.0) == pytest.approx(1.0)

    def test_single_weight_matches_chi_square(self):
        # one unit weight is exactly chi-square(1); 3.841459 is its 5%
        # critical value. Monte Carlo oracle with 1e6 draws.
        p = hbe_pvalue([1.0], 3.841459)
        rng = np.random.default_rng(99)
        mc = (rng.chisquare(1, size=1_000_000) > 3.841459).mean()
        assert abs(p - 0.05) < 0.005
        assert abs(p - mc) < 0.005

    def test_scaling_weights_scales_statistic(self):
        for stat in (0.5, 2.0, 7.0):
            a = hbe_pvalue([2.0, 2.0], 2.0 * stat)
            b = hbe_pvalue([1.0, 1.0], stat)
            assert abs(a - b) < 1e-12

    def test_uneven_weights_against_monte_carlo(self):
        # the gamma moment match is a tail approximation, so probe the
        # tail; in the body it can be off by a couple of percent
        w = np.array([1.7, 0.4, 0.1])
        rng = np.random.default_rng(123)
        draws = rng.chisquare(1, size=(3, 400_000))
        sims = w @ draws
        for stat in (3.0, 6.0, 9.0, 12.0):
            mc = (sims > stat).mean()
            assert abs(hbe_pvalue(w, stat) - mc) < 0.01

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            hbe_pvalue([], 1.0)
        with pytest.raises(ValueError):
            hbe_pvalue([1.0, -0.5], 1.0)
        with pytest.raises(ValueError):
            hbe_pvalue([1.0], -0.1)


class TestRcit:
    def test_power_on_dependent_pair(self):
        rng = np.random.default_rng(5)
        x = rng.normal(size=1000)
        y = x + 0.1 * rng.normal(size=1000)
        z = rng.normal(size=1000)
        res = rcit_test(x, y, z, RcitParams(rng_seed=1))
        assert res.p_value < 0.01
        assert res.method == METHOD_RCIT

    def test_chain_d_separation(self):
        # x -> z -> y with z observed: should rarely reject
        hits = 0
        for s in range(200):
            rng = np.random.default_rng(30_000 + s)
            x = rng.normal(size=2000)
            z = 0.8 * x + 0.6 * rng.normal(size=2000)
            y = 0.8 * z + 0.6 * rng.normal(size=2000)
            hits += rcit_test(x, y, z, RcitParams(rng_seed=s)).p_value < 0.05
        assert hits / 200 <= 0.10

    def test_nonlinear_dependence_detected(self):
        # fisher-z is blind to y = x^2 around zero; the kernel test is not
        rng = np.random.default_rng(6)
        x = rng.normal(size=1500)
        y = x**2 + 0.1 * rng.normal(size=1500)
        z = rng.normal(size=1500)
        assert rcit_test(x, y, z, RcitParams(rng_seed=2)).p_value < 0.01
        assert fisher_z_test(x, y, z).p_value > 0.01

    def test_small_n_falls_back_flagged(self):
        rng = np.random.default_rng(7)
        x, y, z = rng.normal(size=(3, 40))
        res = rcit_test(x, y, z)
        assert res.method == METHOD_RCIT_FALLBACK
        expect = fisher_z_test(x, y, z)
        assert res.statistic == expect.statistic
        assert res.p_value == expect.p_value

    def test_deterministic_given_params(self):
        rng = np.random.default_rng(8)
        x, y, z = rng.normal(size=(3, 400))
        a = rcit_test(x, y, z, RcitParams(rng_seed=77))
        b = rcit_test(x, y, z, RcitParams(rng_seed=77))
        assert a == b

    def test_affine_invariance_of_pvalue(self):
        rng = np.random.default_rng(9)
        x, y, z = rng.normal(size=(3, 500))
        a = rcit_test(x, y, z, RcitParams(rng_seed=3))
        b = rcit_test(2.0 * x + 5.0, 0.1 * y - 1.0, 4.0 * z, RcitParams(rng_seed=3))
        assert abs(a.p_value - b.p_value) < 1e-3

    def test_agreement_with_fisher_on_linear_gaussian(self):
        agree = 0
        for s in range(200):
            rng = np.random.default_rng(40_000 + s)
            if s % 2:
                x, y, z = rng.normal(size=(3, 2000))
            else:
                z = rng.normal(size=2000)
                x = 0.7 * z + rng.normal(size=2000)
                y = 0.7 * z + 0.5 * x + rng.normal(size=2000)
            f = fisher_z_test(x, y, z).p_value < 0.05
            r = rcit_test(x, y, z, RcitParams(rng_seed=s)).p_value < 0.05
            agree += f == r
        assert agree / 200 >= 0.90

    def test_constant_input_degenerate(self):
        rng = np.random.default_rng(10)
        x = rng.normal(size=200)
        y = rng.normal(size=200)
        with pytest.raises(DegenerateInput):
            rcit_test(x, y, np.zeros(200))

    def test_params_validation(self):
        with pytest.raises(ValueError):
            RcitParams(num_features_xy=10, num_features_z=5)
        with pytest.raises(ValueError):
            RcitParams(ridge=0.0)


class TestCiTestResult:
    def test_validates_pvalue_range(self):
        with pytest.raises(ValueError):
            CiTestResult(1.0, 1.5, METHOD_FISHER_Z)

    def test_validates_finite_statistic(self):
        with pytest.raises(ValueError):
            CiTestResult(float("inf"), 0.5, METHOD_FISHER_Z)
