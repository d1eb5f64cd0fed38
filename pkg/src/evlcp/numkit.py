"""Small dense linear algebra helpers shared by the rest of the package.

Matrices are plain ``numpy.ndarray`` objects of dtype float64.  Only the
1- and infinity-norms are provided.
"""
import warnings
from typing import NamedTuple

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve
from scipy.sparse.csgraph import connected_components

from .errors import NoConvergence, NotNonnegative, ShapeMismatch, SingularMatrix

PIVOT_RTOL = 1e-14
NEGLIGIBLE = 1e-150


def as_matrix(A, square=False):
    """Return ``A`` as a finite 2-D float array, validating the shape."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.size == 0:
        raise ShapeMismatch(f"expected a non-empty 2-D matrix, got shape {A.shape}")
    if square and A.shape[0] != A.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    return A


def norm(A, which="inf"):
    """Induced matrix norm (``inf`` or ``one``); vector norm for 1-D input."""
    A = np.asarray(A, dtype=float)
    if which not in ("inf", "one"):
        raise ValueError(f"unsupported norm {which!r}; use 'inf' or 'one'")
    if A.size == 0:
        return 0.0
    if A.ndim == 1 or (A.ndim == 2 and A.shape[1] == 1):
        v = np.abs(A.ravel())
        return float(v.max() if which == "inf" else v.sum())
    absA = np.abs(A)
    if which == "inf":
        return float(absA.sum(axis=1).max())
    return float(absA.sum(axis=0).max())


def _factor(A):
    A = as_matrix(A, square=True)
    with warnings.catch_warnings():
        # exact zero pivots are reported below as SingularMatrix
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(A, check_finite=False)
    pivots = np.abs(np.diag(lu))
    threshold = PIVOT_RTOL * norm(A)
    if pivots.min() < threshold or pivots.min() == 0.0:
        raise SingularMatrix(
            f"pivot {pivots.min():.3e} below threshold {threshold:.3e}"
        )
    return lu, piv


def solve_linear(A, b):
    """Solve ``A x = b`` by row-pivoted LU.

    Raises SingularMatrix when a pivot falls below ``1e-14 * ||A||_inf``.
    ``b`` may be a vector or a matrix of right-hand sides.
    """
    lu, piv = _factor(A)
    b = np.asarray(b, dtype=float)
    if b.shape[0] != lu.shape[0]:
        raise ShapeMismatch(f"rhs has {b.shape[0]} rows, matrix has {lu.shape[0]}")
    return lu_solve((lu, piv), b, check_finite=False)


def inverse(A):
    A = as_matrix(A, square=True)
    return solve_linear(A, np.eye(A.shape[0]))


def det(A):
    """Determinant from the pivoted LU factors (product of pivots times permutation sign)."""
    A = as_matrix(A, square=True)
    lu, piv = lu_factor(A, check_finite=False)
    swaps = np.count_nonzero(piv != np.arange(piv.size))
    return float(np.prod(np.diag(lu)) * (-1.0) ** swaps)


def comparison_matrix(A):
    A = as_matrix(A, square=True)
    C = -np.abs(A)
    np.fill_diagonal(C, np.abs(np.diag(A)))
    return C


def elementwise_max(As):
    if len(As) == 0:
        raise ShapeMismatch("elementwise_max needs at least one matrix")
    arrays = [np.asarray(A, dtype=float) for A in As]
    shape = arrays[0].shape
    for A in arrays[1:]:
        if A.shape != shape:
            raise ShapeMismatch(f"shape {A.shape} differs from {shape}")
    return np.maximum.reduce(arrays)


class SpectralBracket(NamedTuple):
    """Spectral radius estimate with a Collatz-Wielandt enclosure."""

    rho: float
    lower: float
    upper: float
    iterations: int


def _irreducible_bracket(B, tol, budget):
    # Collatz-Wielandt bounds on a primitive block; square the iteration
    # matrix when convergence is slow (bounds on B^m give rho(B) via m-th root).
    n = B.shape[0]
    x = np.ones(n)
    P = B.copy()
    m = 1
    log_scale = 0.0
    used = 0
    steps_at_level = 0
    while used < budget:
        y = P @ x
        ratios = y / x
        lo_p, hi_p = ratios.min(), ratios.max()
        used += 1
        steps_at_level += 1
        lo = np.exp((np.log(lo_p) + log_scale) / m)
        hi = np.exp((np.log(hi_p) + log_scale) / m)
        if hi - lo <= tol * (1.0 + hi):
            return lo, hi, used
        x = y / y.max()
        if steps_at_level >= 32 and m < 2**40:
            scale = np.abs(P).max()
            P = P / scale
            log_scale += np.log(scale)
            P = P @ P
            log_scale *= 2.0
            m *= 2
            steps_at_level = 0
    raise NoConvergence(f"power iteration did not converge in {budget} steps")


def spectral_bracket(W, tol=1e-12, max_iter=10**6):
    """Spectral radius of a nonnegative matrix with an enclosing interval.

    Power iteration runs on ``W + s*I`` with ``s = 1e-3 * (1 + ||W||_inf)``
    separately on each strongly connected block of the sparsity graph
    (zero rows or nilpotent parts otherwise stall the Collatz-Wielandt
    bounds); the shift is subtracted afterwards.  Entries at or below
    ``1e-150 * max(W)`` are treated as zero.
    """
    W = as_matrix(W, square=True)
    if np.any(W < 0):
        raise NotNonnegative("spectral_radius_nonneg requires an entrywise nonnegative matrix")
    shift = 1e-3 * (1.0 + norm(W))
    # Entries this small connect the graph but underflow in the iterates.
    W = np.where(W > NEGLIGIBLE * W.max(initial=0.0), W, 0.0)
    ncomp, labels = connected_components(W > 0, directed=True, connection="strong")
    lower = upper = 0.0
    used = 0
    for c in range(ncomp):
        idx = np.flatnonzero(labels == c)
        if idx.size == 1:
            v = float(W[idx[0], idx[0]])
            lower, upper = max(lower, v), max(upper, v)
            continue
        B = W[np.ix_(idx, idx)] + shift * np.eye(idx.size)
        lo, hi, steps = _irreducible_bracket(B, tol, max_iter - used)
        used += steps
        lower = max(lower, float(lo) - shift)
        upper = max(upper, float(hi) - shift)
    lower = max(lower, 0.0)
    upper = max(upper, lower)
    return SpectralBracket(0.5 * (lower + upper), float(lower), float(upper), used)


def spectral_radius_nonneg(W, tol=1e-12, max_iter=10**6):
    return spectral_bracket(W, tol=tol, max_iter=max_iter).rho
