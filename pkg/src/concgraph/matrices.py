"""Symmetric-matrix algebra.

Determinants, cofactors and positive definiteness for real symmetric
matrices, plus the quadratic behaviour of the determinant when a single
off-diagonal pair of entries is treated as a free variable.  Writing
``M(x)`` for the matrix with entries (i, j) and (j, i) replaced by x,

    det M(x) = -a x**2 + b x + c

and the interval where M(x) stays positive definite is the open interval
between the two roots of that quadratic.  The cofactor of the (i, j) entry
of M(x) is the affine function -a x + b / 2, which is what ties the raw
covariance entry to the standardized edge statistic used by the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateEdge, DomainError

__all__ = [
    "SymmetricMatrix",
    "QuadCoeffs",
    "PdInterval",
    "determinant",
    "cofactor",
    "is_positive_definite",
    "first_nonpositive_pivot",
    "quadratic_decomposition",
    "pd_interval",
    "edge_statistic",
    "lemma_residual",
    "sylvester_residual",
]

# Pivots at or below RELATIVE_PIVOT_FLOOR * trace are treated as failures,
# so behaviour near singularity is deterministic.
RELATIVE_PIVOT_FLOOR = 1e-12


class SymmetricMatrix:
    """Immutable N x N real symmetric matrix.

    Symmetry is exact (entry for entry) and enforced at construction, as is
    finiteness of every entry.  The wrapped array is write-locked, so values
    are safe to share between threads.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries) -> None:
        arr = np.array(entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DomainError("expected a square matrix")
        if arr.shape[0] == 0:
            raise DomainError("matrix must have at least one row")
        if not np.all(np.isfinite(arr)):
            raise DomainError("matrix entries must be finite")
        if not np.array_equal(arr, arr.T):
            raise DomainError("matrix must be exactly symmetric")
        arr.setflags(write=False)
        self._entries = arr

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    @property
    def entries(self) -> np.ndarray:
        """Read-only view of the underlying array."""
        return self._entries

    def with_edge(self, i: int, j: int, x: float) -> "SymmetricMatrix":
        """Copy of the matrix with entries (i, j) and (j, i) replaced by x."""
        _check_offdiagonal(self.dim, i, j)
        arr = np.array(self._entries)
        arr[i, j] = x
        arr[j, i] = x
        return SymmetricMatrix(arr)

    def __repr__(self) -> str:
        return f"SymmetricMatrix({self._entries.tolist()!r})"


@dataclass(frozen=True)
class QuadCoeffs:
    """Coefficients of det M(x) = -a x**2 + b x + c for edge (i, j)."""

    a: float
    b: float
    c: float
    i: int
    j: int


@dataclass(frozen=True)
class PdInterval:
    """Open interval (x1, x2) on which M(x) is positive definite."""

    x1: float
    x2: float


def _check_index(dim: int, k: int) -> None:
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
        raise DomainError(f"index must be an integer, got {k!r}")
    if not 0 <= k < dim:
        raise DomainError(f"index {k} out of range for dimension {dim}")


def _check_offdiagonal(dim: int, i: int, j: int) -> None:
    _check_index(dim, i)
    _check_index(dim, j)
    if i == j:
        raise DomainError("edge indices must name an off-diagonal entry")


def _det(arr: np.ndarray) -> float:
    """Determinant of a square array by Gaussian elimination with partial
    pivoting.  O(N^3); accepts the empty 0 x 0 matrix (determinant 1)."""
    a = np.array(arr, dtype=float)
    n = a.shape[0]
    if n == 0:
        return 1.0
    det = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if a[p, k] == 0.0:
            return 0.0
        if p != k:
            a[[k, p]] = a[[p, k]]
            det = -det
        piv = a[k, k]
        det *= piv
        if k + 1 < n:
            a[k + 1 :, k + 1 :] -= np.outer(a[k + 1 :, k] / piv, a[k, k + 1 :])
    return float(det)


def determinant(m: SymmetricMatrix) -> float:
    """Determinant of a symmetric matrix."""
    return _det(m.entries)


def _minor_det(arr: np.ndarray, row: int, col: int) -> float:
    sub = np.delete(np.delete(arr, row, axis=0), col, axis=1)
    return _det(sub)


def cofactor(m: SymmetricMatrix, k: int, l: int) -> float:
    """Signed cofactor of entry (k, l): (-1)**(k+l) times the minor that
    deletes row k and column l."""
    _check_index(m.dim, k)
    _check_index(m.dim, l)
    sign = -1.0 if (k + l) % 2 else 1.0
    return sign * _minor_det(m.entries, k, l)


def first_nonpositive_pivot(m: SymmetricMatrix) -> int | None:
    """Index of the first failing pivot of the symmetric triangular
    decomposition, or None when the matrix is positive definite.

    Pivots are the ratios of consecutive leading principal minors.  A pivot
    at or below ``RELATIVE_PIVOT_FLOOR * trace`` counts as a failure, which
    keeps decisions deterministic for matrices that are numerically on the
    boundary.
    """
    a = np.array(m.entries)
    trace = float(np.trace(a))
    # A positive definite matrix has positive trace; with trace <= 0 the
    # floor degenerates to 0 and the sweep below still finds a bad pivot.
    floor = RELATIVE_PIVOT_FLOOR * trace if trace > 0.0 else 0.0
    n = m.dim
    for k in range(n):
        piv = a[k, k]
        if piv <= floor:
            return k
        if k + 1 < n:
            a[k + 1 :, k + 1 :] -= np.outer(a[k + 1 :, k] / piv, a[k, k + 1 :])
    return None


def is_positive_definite(m: SymmetricMatrix) -> bool:
    """True iff all leading principal minors are strictly positive."""
    return first_nonpositive_pivot(m) is None


def quadratic_decomposition(m: SymmetricMatrix, i: int, j: int) -> QuadCoeffs:
    """Coefficients (a, b, c) with det M(x) = -a x**2 + b x + c.

    Extracted by evaluating the determinant at x = 0 and x = +/- xbar with
    xbar = 1 + max |entry|, which is exact for a quadratic and needs no
    symbolic algebra.
    """
    _check_offdiagonal(m.dim, i, j)
    base = np.array(m.entries)
    xbar = 1.0 + float(np.max(np.abs(base)))

    def det_at(x: float) -> float:
        base[i, j] = x
        base[j, i] = x
        return _det(base)

    d0 = det_at(0.0)
    dplus = det_at(xbar)
    dminus = det_at(-xbar)
    c = d0
    b = (dplus - dminus) / (2.0 * xbar)
    a = (2.0 * d0 - dplus - dminus) / (2.0 * xbar * xbar)
    return QuadCoeffs(a=a, b=b, c=c, i=i, j=j)


def pd_interval(q: QuadCoeffs) -> PdInterval:
    """Roots x1 < x2 of -a x**2 + b x + c = 0.

    Raises DegenerateEdge when a <= 0 or the discriminant b**2 + 4ac is not
    positive, which signals that the fixed off-edge entries admit no
    positive-definite completion.
    """
    if q.a <= 0.0:
        raise DegenerateEdge(f"leading coefficient a = {q.a} is not positive")
    disc = q.b * q.b + 4.0 * q.a * q.c
    if disc <= 0.0:
        raise DegenerateEdge(f"discriminant {disc} is not positive")
    root = math.sqrt(disc)
    return PdInterval(x1=(q.b - root) / (2.0 * q.a), x2=(q.b + root) / (2.0 * q.a))


def edge_statistic(q: QuadCoeffs, x: float) -> float:
    """Standardized edge statistic (a x - b/2) / sqrt(b**2/4 + a c).

    Equals -1 at x1, +1 at x2 and increases strictly in between; for
    x = s_ij it coincides with the sample partial correlation.
    """
    denom = q.b * q.b / 4.0 + q.a * q.c
    if q.a <= 0.0 or denom <= 0.0:
        raise DegenerateEdge("edge admits no positive-definite completion")
    return (q.a * x - q.b / 2.0) / math.sqrt(denom)


_PROBE_FRACTIONS = (-1.0, -0.5, 0.0, 0.5, 1.0)


def lemma_residual(m: SymmetricMatrix, i: int, j: int) -> float:
    """Largest deviation, over five probe values of x, between the (i, j)
    cofactor of M(x) and the affine law -a x + b/2.

    Contract: at most 1e-9 * max(1, |a|, |b|).
    """
    q = quadratic_decomposition(m, i, j)
    xbar = 1.0 + float(np.max(np.abs(m.entries)))
    worst = 0.0
    for frac in _PROBE_FRACTIONS:
        x = frac * xbar
        cof = cofactor(m.with_edge(i, j, x), i, j)
        worst = max(worst, abs(cof - (-q.a * x + q.b / 2.0)))
    return worst


def sylvester_residual(m: SymmetricMatrix, i: int, j: int) -> float:
    """Deviation from the two-row determinant identity

        C_pair * det M = C_ii * C_jj - C_ij**2

    where C_pair is the cofactor of the 2 x 2 block on rows and columns
    {i, j} (the determinant after deleting both rows and both columns) and
    C_kl are single-entry cofactors.  Contract: at most 1e-9 relative to
    the magnitude of the largest term.
    """
    _check_offdiagonal(m.dim, i, j)
    keep = [k for k in range(m.dim) if k not in (i, j)]
    c_pair = _det(m.entries[np.ix_(keep, keep)])
    det = determinant(m)
    c_ii = cofactor(m, i, i)
    c_jj = cofactor(m, j, j)
    c_ij = cofactor(m, i, j)
    return abs(c_pair * det - (c_ii * c_jj - c_ij * c_ij))
