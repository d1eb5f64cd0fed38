"""Perturbation bounds for EVLCP solutions in the infinity norm.

The condition constants ``alpha_i = sup_D ||S_M^{-1} D_i||`` drive every
bound.  They are never computed exactly: :func:`gamma_upper` and
:func:`delta_upper` give certified upper estimates under the spectral and
sdd hypotheses, :func:`alpha_sample` a sampled lower estimate.
"""
from dataclasses import dataclass, field

import numpy as np

from . import kernels, numkit
from .errors import EtaTooLarge, MembershipViolated, NotApplicable, NotVlcp, SampleSingular, ShapeMismatch
from .model import as_block_vector, as_blocks, is_vlcp_form
from .wcheck import check_sdd, check_spectral, jacobi_iteration_matrix

GAMMA = "gamma"
DELTA = "delta"
GAMMA_VLCP = "gamma-vlcp"
DELTA_VLCP = "delta-vlcp"
ALPHA_SAMPLE = "alpha-sample"

VERTEX_LIMIT = 4096


@dataclass
class BoundSet:
    """Per-block constants; VLCP kinds cover blocks ``1..k`` only."""

    kind: str
    values: np.ndarray
    per_block_matrices: np.ndarray | None = None
    norm: str = "inf"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if np.any(self.values < 0) or not np.all(np.isfinite(self.values)):
            raise ValueError("bound constants must be finite and nonnegative")
        if self.kind in (GAMMA, GAMMA_VLCP) and self.per_block_matrices is None:
            raise ValueError("gamma bound sets must carry their matrices")

    @property
    def vlcp(self):
        return self.kind.endswith("-vlcp")

    def to_dict(self):
        return {"kind": self.kind, "norm": self.norm, "values": self.values.tolist()}


def _blocks_for(M, vlcp):
    M = as_blocks(M)
    if vlcp and not np.array_equal(M[0], np.eye(M.shape[1])):
        raise NotVlcp("VLCP bounds need M_0 = I")
    return M


def gamma_upper(M, vlcp=False):
    """``||(I - W)^{-1} diag(M_l)^{-1}||`` with ``W = max_i diag(M_i)^{-1}|C_i|``."""
    M = _blocks_for(M, vlcp)
    report = check_spectral(M, vlcp=vlcp)
    if not report.holds:
        raise NotApplicable("spectral condition does not hold", rho=report.certificate.get("rho"),
                            certificate=report.certificate)
    blocks = M[1:] if vlcp else M
    W = jacobi_iteration_matrix(blocks)
    n = W.shape[0]
    inv = numkit.inverse(np.eye(n) - W)
    gammas = np.array([inv / np.diag(B)[None, :] for B in blocks])
    values = [numkit.norm(g) for g in gammas]
    return BoundSet(GAMMA_VLCP if vlcp else GAMMA, values, per_block_matrices=gammas)


def delta_upper(M, vlcp=False):
    """``1 / min_s (<M_l> e)_s`` for every block (sdd hypothesis)."""
    M = _blocks_for(M, vlcp)
    blocks = M[1:] if vlcp else M
    report = check_sdd(blocks, positive_diagonal=vlcp) if len(blocks) > 1 else _single_sdd(blocks[0], vlcp)
    if not report.holds:
        raise NotApplicable("sdd condition does not hold", **report.certificate.get("violation", {}))
    gaps = np.array([numkit.comparison_matrix(B).sum(axis=1) for B in blocks])
    return BoundSet(DELTA_VLCP if vlcp else DELTA, 1.0 / gaps.min(axis=1))


def _single_sdd(B, positive):
    # check_sdd wants k >= 1; a VLCP with k = 1 has only one block to test.
    return check_sdd(np.array([B, B]), positive_diagonal=positive)


def _simplex_weights(rng, trials, K, n):
    e = rng.standard_exponential((trials, n, K))
    w = e / e.sum(axis=2, keepdims=True)
    return np.ascontiguousarray(w.transpose(0, 2, 1))


def _vertex_weights(K, n):
    codes = np.arange(K**n)
    W = np.zeros((codes.size, K, n))
    c = codes.copy()
    for s in range(n):
        W[np.arange(codes.size), c % K, s] = 1.0
        c //= K
    return W


def alpha_sample(M, i, trials=10_000, seed=0, vlcp=False):
    """Lower estimate of ``alpha_i`` from sampled selections plus all 0/1 vertices.

    Trial ``t`` draws its per-component simplex weights from a Philox stream
    keyed by ``(seed, t)``.  For a VLCP, ``i`` counts blocks from 1 and the
    identity block takes part in ``S``.
    """
    M = _blocks_for(M, vlcp)
    K, n = M.shape[0], M.shape[1]
    if not 0 <= i < K or (vlcp and i == 0):
        raise ValueError(f"block index {i} out of range")
    W = np.empty((trials, K, n))
    for t in range(trials):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), t])))
        W[t] = _simplex_weights(rng, 1, K, n)[0]
    if K**n <= VERTEX_LIMIT:
        W = np.concatenate([W, _vertex_weights(K, n)])
    best, _, n_sing, first = kernels.alpha_scan(np.ascontiguousarray(M), np.ascontiguousarray(W), i)
    if n_sing:
        raise SampleSingular(f"{n_sing} sampled S_M singular (first at sample {first})")
    return float(best)


def _qdiff_norms(a, b):
    a = as_block_vector(a)
    b = as_block_vector(b)
    if a.shape != b.shape:
        raise ShapeMismatch("block vectors differ in shape")
    return np.array([numkit.norm(d) for d in a - b])


def _offset(bset):
    return 1 if bset.vlcp else 0


def bound_q_perturbation(alpha_hat, q, q_tilde):
    """``sum_i alpha_i ||q~_i - q_i||`` (right-hand side perturbations only)."""
    d = _qdiff_norms(q_tilde, q)[_offset(alpha_hat):]
    if d.size != alpha_hat.values.size:
        raise ShapeMismatch("bound set and block vectors have different block counts")
    return float(alpha_hat.values @ d)


def membership(alpha_hat, M, A):
    """``sum_i alpha_i ||A_i - M_i||``."""
    o = _offset(alpha_hat)
    A, M = as_blocks(A), as_blocks(M)
    return float(sum(a * numkit.norm(Ai - Mi) for a, Ai, Mi in zip(alpha_hat.values, A[o:], M[o:])))


def bound_general(alpha_hat, eta, M, A, B, qbar, pbar):
    """Solution distance for two problems whose matrices lie within ``eta`` of ``M``.

    ``(sum tau_i ||A_i - B_i||)(sum tau_i ||pbar_i||) + sum tau_i ||qbar_i - pbar_i||``
    with ``tau_i = alpha_i / (1 - eta)``.
    """
    if eta >= 1:
        raise EtaTooLarge(f"eta = {eta} must be < 1")
    for name, X in (("A", A), ("B", B)):
        m = membership(alpha_hat, M, X)
        if m > eta * (1 + 1e-12) + 1e-15:
            raise MembershipViolated(f"{name}: sum alpha_i ||{name}_i - M_i|| = {m} exceeds eta = {eta}")
    tau = alpha_hat.values / (1.0 - eta)
    A, B = as_blocks(A), as_blocks(B)
    pbar = as_block_vector(pbar)
    dAB = np.array([numkit.norm(a - b) for a, b in zip(A, B)])
    p_norms = np.array([numkit.norm(p) for p in pbar])
    dqp = _qdiff_norms(qbar, pbar)
    return float((tau @ dAB) * (tau @ p_norms) + tau @ dqp)


def bound_vlcp(alpha_hat, eta, M, A, B, qhat, phat):
    """VLCP form over blocks ``1..k`` with ``||(-p_i)_+||`` in the second factor."""
    if not alpha_hat.vlcp:
        raise NotVlcp("bound_vlcp needs a VLCP bound set")
    if eta >= 1:
        raise EtaTooLarge(f"eta = {eta} must be < 1")
    A, B, M = as_blocks(A), as_blocks(B), as_blocks(M)
    qhat, phat = as_block_vector(qhat), as_block_vector(phat)
    for name, X, v in (("A", A, qhat), ("B", B, phat), ("M", M, np.zeros_like(qhat))):
        if not is_vlcp_form(X, v):
            raise NotVlcp(f"{name} is not in VLCP form (M_0 = I, q_0 = 0)")
    for name, X in (("A", A), ("B", B)):
        m = membership(alpha_hat, M, X)
        if m > eta * (1 + 1e-12) + 1e-15:
            raise MembershipViolated(f"{name}: membership sum {m} exceeds eta = {eta}")
    tau = alpha_hat.values / (1.0 - eta)
    dAB = np.array([numkit.norm(a - b) for a, b in zip(A[1:], B[1:])])
    pneg = np.array([numkit.norm(np.maximum(-p, 0.0)) for p in phat[1:]])
    dqp = _qdiff_norms(qhat, phat)[1:]
    return float((tau @ dAB) * (tau @ pneg) + tau @ dqp)


@dataclass
class BoundReport:
    """Relative bounds; ``None`` marks a quantity whose ``eta >= 1``."""

    eta: float
    tau: float | None
    tau_bar: float | None
    nu: float | None = None
    upsilon: float | None = None
    applicable: dict = field(default_factory=dict)


def relative_bounds(M, bound_set, eps, x_norm, dq_norms, dm_norms):
    """``eta = sum eps_i c_i ||M_i||``, ``tau = 2 eta/(1 - eta)`` and the data-dependent ``tau_bar``.

    ``c_i`` are the bound-set values; sequences run over the same blocks as
    the bound set.
    """
    o = _offset(bound_set)
    M = as_blocks(M)[o:]
    c = bound_set.values
    eps, dq_norms, dm_norms = (np.asarray(v, dtype=float) for v in (eps, dq_norms, dm_norms))
    if not (eps.size == dq_norms.size == dm_norms.size == c.size == len(M)):
        raise ShapeMismatch("per-block sequences must match the bound set")
    if np.any(eps < 0) or x_norm <= 0:
        raise ValueError("need eps >= 0 and x_norm > 0")
    eta = float(np.sum(eps * c * np.array([numkit.norm(Mi) for Mi in M])))
    if eta >= 1:
        return BoundReport(eta, None, None, applicable={"tau": False, "tau_bar": False})
    tau = 2.0 * eta / (1.0 - eta)
    tau_bar = (c @ dm_norms + (c @ dq_norms) / x_norm) / (1.0 - eta)
    report = BoundReport(eta, tau, float(tau_bar), applicable={"tau": True, "tau_bar": True})
    if bound_set.kind in (DELTA, DELTA_VLCP):
        report.upsilon = tau
    return report


def relative_bound_componentwise(M, gamma_set, eps):
    """``2 sum eps_i ||gamma_i |M_i| || / (1 - eta_hat)`` with ``eta_hat = sum eps_i ||gamma_i|| ||M_i||``."""
    if gamma_set.kind not in (GAMMA, GAMMA_VLCP):
        raise NotApplicable("componentwise bound needs a gamma bound set", kind=gamma_set.kind)
    o = _offset(gamma_set)
    M = as_blocks(M)[o:]
    eps = np.asarray(eps, dtype=float)
    if eps.size != len(M):
        raise ShapeMismatch("eps must have one entry per block")
    G = gamma_set.per_block_matrices
    eta_hat = float(sum(e * numkit.norm(g) * numkit.norm(Mi) for e, g, Mi in zip(eps, G, M)))
    if eta_hat >= 1:
        raise EtaTooLarge(f"eta_hat = {eta_hat} must be < 1")
    num = sum(e * numkit.norm(g @ np.abs(Mi)) for e, g, Mi in zip(eps, G, M))
    return float(2.0 * num / (1.0 - eta_hat))
