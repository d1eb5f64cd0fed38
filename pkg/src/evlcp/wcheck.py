"""Row W-property tests.

Two sufficient conditions (a spectral-radius test on the Jacobi-type
splitting and a per-block strict diagonal dominance test) and an exact
test that enumerates every representative matrix.  Sufficient tests never
report ``fails`` for "the property fails"; ``inconclusive`` means the test
could not certify it.
"""
from dataclasses import dataclass, field

import numpy as np

from . import kernels, numkit
from .errors import TooLarge
from .model import as_blocks

HOLDS = "holds"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"

SPECTRAL_MARGIN = 1e-10
DEFAULT_VERTEX_CAP = 10**6


@dataclass
class WCheckReport:
    method: str
    verdict: str
    certificate: dict = field(default_factory=dict)

    @property
    def holds(self):
        return self.verdict == HOLDS

    def to_dict(self):
        return {"method": self.method, "verdict": self.verdict, "certificate": _jsonable(self.certificate)}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def jacobi_iteration_matrix(Ms):
    """``max_i diag(M_i)^{-1} |C_i|`` where ``M_i = diag(M_i) - C_i``.

    Every block must have a positive diagonal.
    """
    parts = []
    for M in Ms:
        d = np.diag(M)
        C = np.abs(M - np.diag(d))
        parts.append(C / d[:, None])
    return numkit.elementwise_max(parts)


def _spectral_blocks(M, vlcp):
    # With M_0 = I the block contributes a zero matrix to the max, so the
    # VLCP form of the test reduces to blocks 1..k.
    return M[1:] if vlcp else M


def check_spectral(M, vlcp=False):
    M = as_blocks(M)
    blocks = _spectral_blocks(M, vlcp)
    diags = np.array([np.diag(B) for B in M])
    if np.any(diags <= 0):
        i, s = map(int, np.argwhere(diags <= 0)[0])
        return WCheckReport("spectral", FAILS, {"nonpositive_diagonal": {"block": i, "row": s}})
    W = jacobi_iteration_matrix(blocks)
    br = numkit.spectral_bracket(W)
    cert = {"rho": br.rho, "bracket": [br.lower, br.upper], "W": W}
    verdict = HOLDS if br.upper < 1.0 - SPECTRAL_MARGIN else INCONCLUSIVE
    return WCheckReport("spectral", verdict, cert)


def row_dominance_gaps(M):
    """``(<M_i> e)_s``: ``|m_ss| - sum_{j != s} |m_sj|`` for every block and row."""
    M = np.asarray(M, dtype=float)
    return np.array([numkit.comparison_matrix(B).sum(axis=1) for B in M])


def check_sdd(M, positive_diagonal=False):
    """Every block strictly row diagonally dominant with row-wise matching diagonal signs."""
    M = as_blocks(M)
    gaps = row_dominance_gaps(M)
    signs = np.sign(np.array([np.diag(B) for B in M]))
    cert = {"gaps": gaps, "diagonal_signs": signs}
    bad = np.argwhere(gaps <= 0)
    if bad.size:
        i, s = map(int, bad[0])
        cert["violation"] = {"block": i, "row": s, "reason": "not strictly diagonally dominant"}
        return WCheckReport("sdd", INCONCLUSIVE, cert)
    mixed = np.flatnonzero(np.any(signs != signs[0], axis=0))
    if mixed.size:
        s = int(mixed[0])
        i = int(np.flatnonzero(signs[:, s] != signs[0, s])[0])
        cert["violation"] = {"block": i, "row": s, "reason": "diagonal signs differ across blocks"}
        return WCheckReport("sdd", INCONCLUSIVE, cert)
    if positive_diagonal and np.any(signs < 0):
        i, s = map(int, np.argwhere(signs < 0)[0])
        cert["violation"] = {"block": i, "row": s, "reason": "negative diagonal"}
        return WCheckReport("sdd", INCONCLUSIVE, cert)
    return WCheckReport("sdd", HOLDS, cert)


def decode_sigma(code, k, n):
    K = k + 1
    sigma = []
    for _ in range(n):
        sigma.append(code % K)
        code //= K
    return sigma


def vertex_count(k, n):
    return (k + 1) ** n


def check_exact_vertex(M, cap=DEFAULT_VERTEX_CAP):
    """Exact row W-property test by the signs of all representative determinants.

    ``det(sum_i D_i M_i)`` is affine in each row's simplex weights, so it is
    a convex combination of the representative determinants; one strict
    common sign certifies nonsingularity over every selection, and a zero or
    a sign change yields a singular selection.
    """
    M = as_blocks(M)
    K, n = M.shape[0], M.shape[1]
    total = vertex_count(K - 1, n)
    if total > cap:
        raise TooLarge(total, cap)
    n_pos, n_neg, n_zero, f_pos, f_neg, f_zero = kernels.vertex_scan(np.ascontiguousarray(M), 0, total)
    cert = {"count": total, "positive": n_pos, "negative": n_neg, "zero": n_zero}
    if n_zero == 0 and (n_pos == 0 or n_neg == 0):
        cert["sign"] = 1 if n_pos else -1
        return WCheckReport("exact-vertex", HOLDS, cert)
    if n_zero:
        cert["witness"] = {"sigma": decode_sigma(f_zero, K - 1, n), "kind": "zero"}
    else:
        later = max(f_pos, f_neg)
        cert["witness"] = {
            "sigma": decode_sigma(later, K - 1, n),
            "kind": "opposite-sign",
            "reference": decode_sigma(min(f_pos, f_neg), K - 1, n),
        }
    return WCheckReport("exact-vertex", FAILS, cert)


def certify(M, vlcp=False, cap=DEFAULT_VERTEX_CAP):
    """First test that certifies the row W-property, or None.

    Tries the cheap sufficient tests before falling back to enumeration
    when the vertex count is within ``cap``.
    """
    M = as_blocks(M)
    for report in (check_sdd(M), check_spectral(M, vlcp=vlcp)):
        if report.holds:
            return report
    if vertex_count(M.shape[0] - 1, M.shape[1]) <= cap:
        report = check_exact_vertex(M, cap)
        if report.holds:
            return report
    return None
