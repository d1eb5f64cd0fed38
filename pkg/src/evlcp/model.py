"""EVLCP problem representation and the min-map machinery.

A problem is ``min_i (M_i x + q_i) = 0`` taken componentwise over the
``k + 1`` blocks.  Block matrices are stored as a ``(k+1, n, n)`` array and
block vectors as a ``(k+1, n)`` array.
"""
from dataclasses import dataclass, field

import numpy as np

from . import numkit
from .errors import ShapeMismatch

TIE_RTOL = 1e-12


def as_blocks(M):
    M = np.array(M, dtype=float)
    if M.ndim != 3 or M.shape[1] != M.shape[2] or M.shape[0] < 2 or M.shape[1] == 0:
        raise ShapeMismatch(f"block matrix must have shape (k+1, n, n) with k >= 1, got {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("block matrix entries must be finite")
    return M


def as_block_vector(q, k=None, n=None):
    q = np.array(q, dtype=float)
    if q.ndim != 2:
        raise ShapeMismatch(f"block vector must have shape (k+1, n), got {q.shape}")
    if k is not None and q.shape != (k + 1, n):
        raise ShapeMismatch(f"block vector shape {q.shape} does not match (k+1, n) = {(k + 1, n)}")
    if not np.all(np.isfinite(q)):
        raise ValueError("block vector entries must be finite")
    return q


def _frozen(a):
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class EvlcpProblem:
    """``min{M_0 x + q_0, ..., M_k x + q_k} = 0``.

    ``vlcp`` marks a vertical LCP (``M_0 = I``, ``q_0 = 0``) so that the
    bound routines use the variants that run over blocks ``1..k`` only.
    """

    M: np.ndarray
    q: np.ndarray
    vlcp: bool = False
    name: str = field(default="", compare=False)

    def __post_init__(self):
        M = as_blocks(self.M)
        q = as_block_vector(self.q, M.shape[0] - 1, M.shape[1])
        object.__setattr__(self, "M", _frozen(M))
        object.__setattr__(self, "q", _frozen(q))
        if self.vlcp and not is_vlcp_form(M, q):
            raise ShapeMismatch("vlcp=True requires M_0 = I and q_0 = 0")

    @property
    def n(self):
        return self.M.shape[1]

    @property
    def k(self):
        return self.M.shape[0] - 1

    @classmethod
    def from_vlcp(cls, Ms, qs, name=""):
        """Build ``min{x, M_1 x + q_1, ..., M_k x + q_k} = 0``."""
        Ms = np.asarray(Ms, dtype=float)
        if Ms.ndim == 2:
            Ms = Ms[None]
        qs = np.atleast_2d(np.asarray(qs, dtype=float))
        n = Ms.shape[1]
        M = np.concatenate([np.eye(n)[None], Ms])
        q = np.concatenate([np.zeros((1, n)), qs])
        return cls(M, q, vlcp=True, name=name)

    @classmethod
    def from_lcp(cls, A, b, name=""):
        """The classical LCP ``x >= 0, Ax + b >= 0, x'(Ax + b) = 0``."""
        return cls.from_vlcp(A, b, name=name)

    def with_data(self, M=None, q=None, name=None):
        M = self.M if M is None else as_blocks(M)
        q = self.q if q is None else as_block_vector(q)
        return EvlcpProblem(
            M, q,
            vlcp=self.vlcp and is_vlcp_form(M, q),
            name=self.name if name is None else name,
        )


def is_vlcp_form(M, q):
    n = M.shape[1]
    return bool(np.array_equal(M[0], np.eye(n)) and not np.any(q[0]))


@dataclass(frozen=True)
class DiagonalSelection:
    """``k+1`` nonnegative diagonal weights summing to the identity.

    ``weights[i]`` holds the diagonal of ``D_i``.
    """

    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] < 1:
            raise ShapeMismatch(f"weights must have shape (k+1, n), got {w.shape}")
        if np.any(w < 0) or np.any(w > 1):
            raise ValueError("selection weights must lie in [0, 1]")
        if np.any(np.abs(w.sum(axis=0) - 1.0) > 1e-12):
            raise ValueError("selection weights must sum to 1 in every component")
        object.__setattr__(self, "weights", _frozen(w))

    @property
    def n(self):
        return self.weights.shape[1]

    @property
    def k(self):
        return self.weights.shape[0] - 1

    @classmethod
    def vertex(cls, sigma, k):
        """0/1 selection taking row ``s`` from block ``sigma[s]``."""
        sigma = np.asarray(sigma, dtype=int)
        w = np.zeros((k + 1, sigma.size))
        w[sigma, np.arange(sigma.size)] = 1.0
        return cls(w)


def _check_x(P, x):
    x = np.asarray(x, dtype=float)
    if x.shape != (P.n,):
        raise ShapeMismatch(f"x has shape {x.shape}, expected ({P.n},)")
    return x


def residuals(P, x):
    """Stack of ``M_i x + q_i``, shape ``(k+1, n)``."""
    x = _check_x(P, x)
    return P.M @ x + P.q


def min_map(P, x):
    return residuals(P, x).min(axis=0)


def tie_sets(rs):
    """Per component, the block indices attaining the minimum (relative tie tolerance)."""
    rs = np.asarray(rs, dtype=float)
    mins = rs.min(axis=0)
    return rs <= mins + TIE_RTOL * (1.0 + np.abs(mins))


def selection_matrices(rs):
    """Equal weights on every block attaining the componentwise minimum."""
    mask = tie_sets(rs).astype(float)
    return DiagonalSelection(mask / mask.sum(axis=0))


def assemble_S(M, D):
    """``sum_i diag(d_i) M_i``."""
    M = np.asarray(M, dtype=float)
    w = D.weights if isinstance(D, DiagonalSelection) else np.asarray(D, dtype=float)
    if w.shape != M.shape[:2]:
        raise ShapeMismatch(f"selection shape {w.shape} does not match blocks {M.shape[:2]}")
    return np.einsum("is,isj->sj", w, M)


def representative(M, sigma):
    """Matrix whose row ``s`` is row ``s`` of ``M[sigma[s]]``."""
    sigma = np.asarray(sigma, dtype=int)
    return M[sigma, np.arange(M.shape[1]), :]


def difference_selection(ra, rb):
    """Weights ``lam`` with ``min(ra) - min(rb) = sum_i lam_i (ra_i - rb_i)`` per component.

    Let ``a`` and ``b`` be the smallest argmin indices of the two stacks.
    Componentwise ``ra_a - rb_a <= min(ra) - min(rb) <= ra_b - rb_b``, so the
    difference of minima is split between blocks ``a`` and ``b`` by linear
    interpolation; when ``a == b`` (or the two differences coincide) all the
    weight goes to ``a``.
    """
    ra = np.asarray(ra, dtype=float)
    rb = np.asarray(rb, dtype=float)
    if ra.shape != rb.shape:
        raise ShapeMismatch("residual stacks must have the same shape")
    cols = np.arange(ra.shape[1])
    a = ra.argmin(axis=0)
    b = rb.argmin(axis=0)
    target = ra[a, cols] - rb[b, cols]
    lo = ra[a, cols] - rb[a, cols]
    hi = ra[b, cols] - rb[b, cols]
    span = hi - lo
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(span > 0, (target - lo) / span, 0.0)
    t = np.clip(t, 0.0, 1.0)
    w = np.zeros_like(ra)
    w[a, cols] += 1.0 - t
    w[b, cols] += t
    return DiagonalSelection(w)


@dataclass(frozen=True)
class VerifyReport:
    is_solution: bool
    residual_norm: float
    active_map: list


def active_map(rs):
    mask = tie_sets(rs)
    return [np.flatnonzero(mask[:, s]).tolist() for s in range(mask.shape[1])]


def verify_solution(P, x, tol=1e-10):
    rs = residuals(P, x)
    res = numkit.norm(rs.min(axis=0))
    ok = res <= tol and bool(np.all(rs >= -tol))
    return VerifyReport(bool(ok), res, active_map(rs))
