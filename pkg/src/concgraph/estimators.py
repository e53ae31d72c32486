"""Sample statistics from raw observations."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateEdge, DomainError, NotPositiveDefinite
from .matrices import (
    SymmetricMatrix,
    _check_offdiagonal,
    cofactor,
    first_nonpositive_pivot,
)

__all__ = ["Dataset", "sample_covariance", "sample_partial_correlation"]


@dataclass(frozen=True)
class Dataset:
    """n observations of N named variables, stored as an n x N array.

    Requires n >= 2, finite values and unique names.  The array is copied
    and write-locked at construction.
    """

    values: np.ndarray
    names: tuple[str, ...]

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=float)
        if arr.ndim != 2:
            raise DomainError("observations must form a 2-d array")
        if arr.shape[0] < 2:
            raise DomainError("need at least two observations")
        if arr.shape[1] < 1:
            raise DomainError("need at least one variable")
        if not np.all(np.isfinite(arr)):
            raise DomainError("observations must be finite")
        names = tuple(str(name) for name in self.names)
        if len(names) != arr.shape[1]:
            raise DomainError(
                f"{len(names)} names for {arr.shape[1]} variables"
            )
        if len(set(names)) != len(names):
            raise DomainError("variable names must be unique")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "names", names)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]


def sample_covariance(data: Dataset) -> SymmetricMatrix:
    """Sample covariance matrix with the 1/n normalization:

        s_ij = (1/n) * sum_t (x_i(t) - mean_i)(x_j(t) - mean_j)

    The result may be singular or indefinite (e.g. constant columns or
    n <= N); downstream consumers validate positive definiteness.  All
    derived partial correlations are invariant to the 1/n versus 1/(n-1)
    choice, since cofactor ratios are homogeneous of degree zero.
    """
    x = data.values
    centered = x - x.mean(axis=0)
    s = centered.T @ centered / data.n
    s = (s + s.T) / 2.0
    return SymmetricMatrix(s)


def _partial_correlation_unchecked(s: SymmetricMatrix, i: int, j: int) -> float:
    c_ij = cofactor(s, i, j)
    denom = cofactor(s, i, i) * cofactor(s, j, j)
    if denom <= 0.0:
        raise DegenerateEdge(
            f"cofactor product for edge ({i}, {j}) is not positive"
        )
    return -c_ij / math.sqrt(denom)


def sample_partial_correlation(s: SymmetricMatrix, i: int, j: int) -> float:
    """Sample partial correlation of variables i and j given all others:

        r_ij = -C_ij / sqrt(C_ii * C_jj)

    with C_kl the cofactors of the covariance matrix.  Requires a positive
    definite covariance matrix; |r| < 1 then holds automatically.
    """
    _check_offdiagonal(s.dim, i, j)
    pivot = first_nonpositive_pivot(s)
    if pivot is not None:
        raise NotPositiveDefinite(
            f"covariance matrix is not positive definite (pivot {pivot} fails)"
        )
    return _partial_correlation_unchecked(s, i, j)
