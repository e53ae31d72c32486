"""Per-edge conditional-independence tests.

Three tests of the null "variables i and j are conditionally independent
given all others" for Gaussian data, all two-sided at level alpha:

* ``umpu``: conditional test on the covariance entry s_ij given every
  other entry.  The conditional null law of s_ij is a Beta(m, m) law
  stretched over the positive-definiteness interval (x1, x2), with
  m = (n - N) / 2, so the acceptance region is a central beta interval.
  Standardizing s_ij by the determinant quadratic turns the region into
  2q - 1 < t < 1 - 2q with q the (alpha/2)-quantile of Beta(m, m).
* ``partial_corr``: compares the sample partial correlation r against the
  two-sided critical value of its exact null law.
* ``fisher``: the asymptotic z-transformation test with the sqrt(n)/2
  scaling; its p-values are asymptotic, not exact.

The standardized statistic t equals r identically, so the first two tests
always produce the same decision; ``verify_equivalence`` measures this
numerically and is wired into the CLI as a regression check.

Rejection regions are closed: a statistic exactly at a threshold rejects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .distributions import (
    beta_sym_quantile,
    fisher_z,
    null_corr_cdf,
    null_corr_quantile,
    std_normal_quantile,
)
from .errors import DomainError, InsufficientSample, NotPositiveDefinite
from .estimators import _partial_correlation_unchecked
from .matrices import (
    SymmetricMatrix,
    _check_offdiagonal,
    edge_statistic,
    first_nonpositive_pivot,
    pd_interval,
    quadratic_decomposition,
)

__all__ = [
    "METHODS",
    "TestConfig",
    "EdgeDecision",
    "EquivalenceReport",
    "threshold_reject",
    "umpu_test",
    "umpu_raw_thresholds",
    "partial_correlation_test",
    "fisher_test",
    "verify_equivalence",
    "run_edge_test",
]

METHODS = ("umpu", "partial_corr", "fisher")


@dataclass(frozen=True)
class TestConfig:
    """Significance level and test method for graph selection."""

    __test__ = False  # keep pytest from collecting this as a test class

    alpha: float
    method: str = "partial_corr"

    def __post_init__(self) -> None:
        if not (isinstance(self.alpha, (int, float)) and 0.0 < self.alpha < 1.0):
            raise DomainError(
                f"significance level must lie in (0, 1), got {self.alpha!r}"
            )
        if self.method not in METHODS:
            raise DomainError(
                f"unknown method {self.method!r}; expected one of {METHODS}"
            )


@dataclass(frozen=True)
class EdgeDecision:
    """Outcome of one per-edge test.

    ``reject`` is True exactly when the statistic falls outside the open
    interval (lower, upper); the acceptance region is symmetric, so
    lower == -upper for every method.
    """

    i: int
    j: int
    statistic: float
    lower: float
    upper: float
    p_value: float
    reject: bool
    method: str


@dataclass(frozen=True)
class EquivalenceReport:
    """Numerical comparison of the umpu and partial-correlation tests on
    one instance."""

    statistic_gap: float
    signed_gap: float
    threshold_gap: float
    same_decision: bool
    raw_scale_agrees: bool


def threshold_reject(statistic: float, lower: float, upper: float) -> bool:
    """Closed rejection rule: reject iff statistic <= lower or >= upper."""
    return statistic <= lower or statistic >= upper


def _validate_test_inputs(
    s: SymmetricMatrix, i: int, j: int, n: int, alpha: float
) -> None:
    _check_offdiagonal(s.dim, i, j)
    if not (isinstance(alpha, (int, float)) and 0.0 < alpha < 1.0):
        raise DomainError(f"significance level must lie in (0, 1), got {alpha!r}")
    if not isinstance(n, int) or isinstance(n, bool):
        raise DomainError(f"sample size must be an integer, got {n!r}")
    if n <= s.dim:
        raise InsufficientSample(
            f"insufficient sample: need n > N, got n = {n}, N = {s.dim}"
        )
    pivot = first_nonpositive_pivot(s)
    if pivot is not None:
        raise NotPositiveDefinite(
            f"covariance matrix is not positive definite (pivot {pivot} fails)"
        )


def _exact_p_value(statistic: float, n: int, dim: int) -> float:
    cdf = null_corr_cdf(statistic, n, dim)
    return min(1.0, 2.0 * min(cdf, 1.0 - cdf))


def umpu_test(
    s: SymmetricMatrix, i: int, j: int, n: int, alpha: float
) -> EdgeDecision:
    """Conditional test of the covariance entry s_ij given all others.

    Accepts iff 2q - 1 < t < 1 - 2q where t is the standardized edge
    statistic and q = Beta((n-N)/2, (n-N)/2) quantile at alpha/2.  The
    equivalent raw-scale thresholds are exposed by
    :func:`umpu_raw_thresholds`; the standardized form is authoritative
    because it stays well conditioned when the feasible interval is short.
    p-values use the exact null law of r, legitimate because t == r.
    """
    _validate_test_inputs(s, i, j, n, alpha)
    coeffs = quadratic_decomposition(s, i, j)
    q = beta_sym_quantile(alpha / 2.0, (n - s.dim) / 2.0)
    upper = 1.0 - 2.0 * q
    statistic = edge_statistic(coeffs, float(s.entries[i, j]))
    return EdgeDecision(
        i=i,
        j=j,
        statistic=statistic,
        lower=-upper,
        upper=upper,
        p_value=_exact_p_value(statistic, n, s.dim),
        reject=threshold_reject(statistic, -upper, upper),
        method="umpu",
    )


def umpu_raw_thresholds(
    s: SymmetricMatrix, i: int, j: int, n: int, alpha: float
) -> tuple[float, float]:
    """Thresholds (c_lo, c_hi) on the raw s_ij scale:

        c_lo = x1 + (x2 - x1) q,   c_hi = x2 - (x2 - x1) q

    with (x1, x2) the positive-definiteness interval.  Must produce the
    same decision as the standardized form of :func:`umpu_test`.
    """
    _validate_test_inputs(s, i, j, n, alpha)
    coeffs = quadratic_decomposition(s, i, j)
    interval = pd_interval(coeffs)
    q = beta_sym_quantile(alpha / 2.0, (n - s.dim) / 2.0)
    width = interval.x2 - interval.x1
    return interval.x1 + width * q, interval.x2 - width * q


def partial_correlation_test(
    s: SymmetricMatrix, i: int, j: int, n: int, alpha: float
) -> EdgeDecision:
    """Exact two-sided test of the sample partial correlation."""
    _validate_test_inputs(s, i, j, n, alpha)
    r = _partial_correlation_unchecked(s, i, j)
    c = null_corr_quantile(alpha, n, s.dim)
    return EdgeDecision(
        i=i,
        j=j,
        statistic=r,
        lower=-c,
        upper=c,
        p_value=_exact_p_value(r, n, s.dim),
        reject=threshold_reject(r, -c, c),
        method="partial_corr",
    )


def fisher_test(
    s: SymmetricMatrix, i: int, j: int, n: int, alpha: float
) -> EdgeDecision:
    """Asymptotic z-transformation test.

    z = (sqrt(n)/2) ln((1+r)/(1-r)) compared against the standard normal
    quantile; the p-value is asymptotic.
    """
    _validate_test_inputs(s, i, j, n, alpha)
    r = _partial_correlation_unchecked(s, i, j)
    z = fisher_z(r, n)
    zc = std_normal_quantile(1.0 - alpha / 2.0)
    return EdgeDecision(
        i=i,
        j=j,
        statistic=z,
        lower=-zc,
        upper=zc,
        p_value=math.erfc(abs(z) / math.sqrt(2.0)),
        reject=threshold_reject(z, -zc, zc),
        method="fisher",
    )


def verify_equivalence(
    s: SymmetricMatrix, i: int, j: int, n: int, alpha: float
) -> EquivalenceReport:
    """Compare the umpu and partial-correlation tests on one instance.

    Contract: statistic_gap <= 1e-9, identical decisions, and threshold
    gap |(1 - 2q) - c| <= 1e-10; the raw-scale decision must agree with
    the standardized one as well.
    """
    u = umpu_test(s, i, j, n, alpha)
    pc = partial_correlation_test(s, i, j, n, alpha)
    signed_gap = u.statistic - pc.statistic
    c_lo, c_hi = umpu_raw_thresholds(s, i, j, n, alpha)
    raw_reject = threshold_reject(float(s.entries[i, j]), c_lo, c_hi)
    return EquivalenceReport(
        statistic_gap=abs(signed_gap),
        signed_gap=signed_gap,
        threshold_gap=abs(u.upper - pc.upper),
        same_decision=u.reject == pc.reject,
        raw_scale_agrees=raw_reject == u.reject,
    )


_TESTS = {
    "umpu": umpu_test,
    "partial_corr": partial_correlation_test,
    "fisher": fisher_test,
}


def run_edge_test(
    method: str, s: SymmetricMatrix, i: int, j: int, n: int, alpha: float
) -> EdgeDecision:
    """Dispatch one edge test by method name."""
    try:
        test = _TESTS[method]
    except KeyError:
        raise DomainError(
            f"unknown method {method!r}; expected one of {METHODS}"
        ) from None
    return test(s, i, j, n, alpha)
