import math

import numpy as np
import pytest

from concgraph import (
    Dataset,
    DomainError,
    NotPositiveDefinite,
    PrecisionSpec,
    SymmetricMatrix,
    estimate_power,
    estimate_size,
    is_positive_definite,
    ks_statistic,
    random_covariance_instances,
    random_precision_matrix,
    reg_inc_beta,
    sample_covariance,
    sample_gaussian,
    sample_partial_correlation,
    verify_equivalence,
)


class TestPrecisionSpec:
    def test_requires_positive_definite(self):
        with pytest.raises(NotPositiveDefinite):
            PrecisionSpec(SymmetricMatrix([[1.0, 2.0], [2.0, 1.0]]))

    def test_partial_correlation_from_entries(self):
        spec = PrecisionSpec(
            SymmetricMatrix([[2.0, -0.6, 0.0], [-0.6, 2.0, 0.0], [0.0, 0.0, 1.0]])
        )
        assert spec.partial_correlation(0, 1) == pytest.approx(0.3, abs=1e-15)
        assert spec.partial_correlation(0, 2) == 0.0

    def test_single_edge_exact_target(self):
        spec = PrecisionSpec.single_edge(5, 0, 1, 0.3)
        assert spec.partial_correlation(0, 1) == 0.3
        assert spec.partial_correlation(2, 3) == 0.0
        with pytest.raises(DomainError):
            PrecisionSpec.single_edge(5, 0, 1, 1.0)

    def test_with_edge_zeroed_matched_null(self):
        spec = PrecisionSpec.single_edge(4, 0, 1, 0.4)
        null = spec.with_edge(0, 1, 0.0)
        assert null.partial_correlation(0, 1) == 0.0

    def test_covariance_is_inverse(self):
        spec = PrecisionSpec.single_edge(3, 0, 1, 0.5)
        product = spec.covariance() @ spec.matrix.entries
        assert product == pytest.approx(np.eye(3), abs=1e-12)


class TestRandomPrecision:
    def test_level_zero_is_diagonal(self):
        spec = random_precision_matrix(5, 0.0, seed=3)
        assert np.array_equal(spec.matrix.entries, np.eye(5))

    def test_always_positive_definite(self):
        for seed in range(100):
            spec = random_precision_matrix(4, 0.6, seed=seed)
            assert is_positive_definite(spec.matrix)

    def test_partial_correlations_bounded_by_level(self):
        for seed in range(100):
            dim = 3 + seed % 4
            level = 0.05 + (seed % 9) / 10.0
            spec = random_precision_matrix(dim, level, seed=seed)
            rhos = [
                abs(spec.partial_correlation(i, j))
                for i in range(dim)
                for j in range(i + 1, dim)
            ]
            assert max(rhos) <= level + 0.05

    def test_hits_target_when_dominance_allows(self):
        spec = random_precision_matrix(3, 0.3, seed=11)
        rhos = [
            abs(spec.partial_correlation(i, j))
            for i in range(3)
            for j in range(i + 1, 3)
        ]
        assert max(rhos) == pytest.approx(0.3, abs=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            random_precision_matrix(1, 0.3, seed=0)
        with pytest.raises(DomainError):
            random_precision_matrix(3, 1.0, seed=0)


class TestSampleGaussian:
    def test_deterministic_for_seed(self):
        spec = PrecisionSpec.identity(3)
        d1 = sample_gaussian(spec, 20, seed=7)
        d2 = sample_gaussian(spec, 20, seed=7)
        assert np.array_equal(d1.values, d2.values)
        assert d1.names == d2.names

    def test_different_seeds_differ(self):
        spec = PrecisionSpec.identity(3)
        d1 = sample_gaussian(spec, 20, seed=7)
        d2 = sample_gaussian(spec, 20, seed=8)
        assert not np.array_equal(d1.values, d2.values)

    def test_shape_and_names(self):
        spec = PrecisionSpec.identity(4)
        d = sample_gaussian(spec, 11, seed=0)
        assert (d.n, d.dim) == (11, 4)
        assert d.names == ("x1", "x2", "x3", "x4")

    def test_law_of_large_numbers_diagonal(self):
        spec = PrecisionSpec(SymmetricMatrix(np.diag([1.0, 4.0, 0.25])))
        n = 40000
        d = sample_gaussian(spec, n, seed=123)
        s = sample_covariance(d).entries
        expected = np.diag([1.0, 0.25, 4.0])
        tol = 5.0 / math.sqrt(n)
        assert np.max(np.abs(s - expected) / np.maximum(1.0, np.abs(expected))) < tol

    def test_partial_correlation_consistency(self):
        spec = PrecisionSpec.single_edge(3, 0, 1, 0.45)
        d = sample_gaussian(spec, 100000, seed=77)
        r = sample_partial_correlation(sample_covariance(d), 0, 1)
        assert r == pytest.approx(0.45, abs=0.02)

    def test_domain(self):
        with pytest.raises(DomainError):
            sample_gaussian(PrecisionSpec.identity(3), 1, seed=0)


class TestKsStatistic:
    def test_exact_grid_uniform(self):
        # sample at CDF midpoints minimizes the statistic: D = 1/(2n)
        sample = (np.arange(10) + 0.5) / 10.0
        assert ks_statistic(sample, lambda u: u) == pytest.approx(0.05, abs=1e-12)

    def test_degenerate_sample(self):
        assert ks_statistic([0.0], lambda u: u) == pytest.approx(1.0)

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            ks_statistic([], lambda u: u)


class TestEstimateSize:
    def test_deterministic_reports(self):
        spec = PrecisionSpec.identity(3)
        r1 = estimate_size(spec, 10, 0.05, "partial_corr", reps=1000, seed=5)
        r2 = estimate_size(spec, 10, 0.05, "partial_corr", reps=1000, seed=5)
        assert r1 == r2

    def test_half_alpha_rate(self):
        # any valid test rejects about half the time at alpha = 0.5
        spec = PrecisionSpec.identity(3)
        report = estimate_size(spec, 10, 0.5, "partial_corr", reps=2000, seed=9)
        band = 3.0 * math.sqrt(0.25 / 2000)
        assert abs(report.rejection_rate - 0.5) <= band

    def test_multiple_methods_share_replications(self):
        spec = PrecisionSpec.identity(4)
        report = estimate_size(
            spec, 12, 0.1, ("umpu", "partial_corr", "fisher"), reps=1000, seed=21
        )
        assert set(report.per_method) == {"umpu", "partial_corr", "fisher"}
        # exact tests agree on every replication
        assert report.agreement["umpu~partial_corr"] == 1.0
        assert (
            report.per_method["umpu"].rejections
            == report.per_method["partial_corr"].rejections
        )

    def test_ks_statistic_small_under_null(self):
        spec = PrecisionSpec.identity(3)
        report = estimate_size(spec, 10, 0.05, "partial_corr", reps=2000, seed=31)
        # 1% asymptotic KS critical value at 2000 replications
        assert report.ks_statistic <= 1.62762 / math.sqrt(2000)

    def test_std_error_formula(self):
        spec = PrecisionSpec.identity(3)
        report = estimate_size(spec, 10, 0.05, "partial_corr", reps=1000, seed=4)
        rate = report.rejection_rate
        assert report.std_error == pytest.approx(
            math.sqrt(rate * (1 - rate) / 1000), abs=1e-15
        )

    def test_requires_null_edge(self):
        spec = PrecisionSpec.single_edge(3, 0, 1, 0.2)
        with pytest.raises(DomainError, match="null probed edge"):
            estimate_size(spec, 10, 0.05, "partial_corr", reps=1000, seed=0)

    def test_requires_thousand_replications(self):
        with pytest.raises(DomainError, match="1000"):
            estimate_size(
                PrecisionSpec.identity(3), 10, 0.05, "partial_corr", reps=999, seed=0
            )

    def test_rejects_bad_method(self):
        with pytest.raises(DomainError):
            estimate_size(
                PrecisionSpec.identity(3), 10, 0.05, "wald", reps=1000, seed=0
            )


class TestEstimatePower:
    def test_zero_rho_reduces_to_size(self):
        spec = PrecisionSpec.identity(3)
        size = estimate_size(spec, 12, 0.05, "partial_corr", reps=1000, seed=17)
        power = estimate_power(spec, 12, 0.05, "partial_corr", reps=1000, seed=17)
        assert power.rejection_rate == size.rejection_rate
        assert power.null_rate == size.rejection_rate

    def test_power_exceeds_size(self):
        spec = PrecisionSpec.single_edge(4, 0, 1, 0.5)
        report = estimate_power(spec, 30, 0.05, "partial_corr", reps=1500, seed=3)
        assert report.rejection_rate > report.null_rate + 3.0 * report.std_error
        assert report.ks_statistic is None
        assert report.rho == 0.5

    def test_sign_symmetric_power(self):
        plus = estimate_power(
            PrecisionSpec.single_edge(3, 0, 1, 0.4), 20, 0.05,
            "partial_corr", reps=2000, seed=41,
        )
        minus = estimate_power(
            PrecisionSpec.single_edge(3, 0, 1, -0.4), 20, 0.05,
            "partial_corr", reps=2000, seed=42,
        )
        band = 3.0 * math.sqrt(plus.std_error**2 + minus.std_error**2)
        assert abs(plus.rejection_rate - minus.rejection_rate) <= band

    def test_power_monotone_in_effect_size(self):
        reports = [
            estimate_power(
                PrecisionSpec.single_edge(3, 0, 1, rho), 30, 0.05,
                "partial_corr", reps=1500, seed=60 + k,
            )
            for k, rho in enumerate((0.1, 0.2, 0.3, 0.5))
        ]
        for lo, hi in zip(reports, reports[1:]):
            slack = 3.0 * math.sqrt(lo.std_error**2 + hi.std_error**2)
            assert hi.rejection_rate >= lo.rejection_rate - slack


class TestInstanceStream:
    def test_deterministic(self):
        a = list(random_covariance_instances(20, seed=2))
        b = list(random_covariance_instances(20, seed=2))
        for (s1, i1, j1, n1, a1), (s2, i2, j2, n2, a2) in zip(a, b):
            assert np.array_equal(s1.entries, s2.entries)
            assert (i1, j1, n1, a1) == (i2, j2, n2, a2)

    def test_instances_are_valid(self):
        for s, i, j, n, alpha in random_covariance_instances(30, seed=8):
            assert is_positive_definite(s)
            assert 0 <= i < j < s.dim
            assert n > s.dim
            assert 0.0 < alpha < 1.0
            report = verify_equivalence(s, i, j, n, alpha)
            assert report.same_decision

    def test_count_respected(self):
        assert len(list(random_covariance_instances(7, seed=0))) == 7


class TestNullLawTransform:
    def test_transformed_null_sample_matches_beta(self):
        # (1 + r)/2 over null replications follows Beta(m, m); quick check
        # at 2000 replications against the 1% KS critical value
        spec = PrecisionSpec.identity(5)
        n = 12
        reps = 2000
        rs = np.empty(reps)
        for k in range(reps):
            data = sample_gaussian(spec, n, seed=(99, k))
            rs[k] = sample_partial_correlation(sample_covariance(data), 0, 1)
        m = (n - 5) / 2.0
        d = ks_statistic((1.0 + rs) / 2.0, lambda u: reg_inc_beta(u, m, m))
        assert d <= 1.62762 / math.sqrt(reps)
