"""EVLCP solvers: piecewise-linear Newton and exhaustive active-set enumeration."""
from dataclasses import dataclass

import numpy as np

from . import kernels, numkit
from .errors import MultipleSolutions, NoConvergence, NoSolution, SingularJacobian, SingularMatrix, TooLarge
from .model import active_map, representative, residuals
from .wcheck import vertex_count

ENUMERATE_CAP = 10**6


@dataclass
class SolveResult:
    x: np.ndarray
    residual_inf: float
    iterations: int
    active_map: list
    method: str

    def to_dict(self):
        return {
            "x": self.x.tolist(),
            "residual_inf": self.residual_inf,
            "iterations": self.iterations,
            "active_map": self.active_map,
            "method": self.method,
        }


def _result(P, x, iterations, method):
    rs = residuals(P, x)
    return SolveResult(x, numkit.norm(rs.min(axis=0)), iterations, active_map(rs), method)


def solve_newton(P, tol=1e-12, max_iter=100, x0=None, fallback=True):
    """Newton's method on ``F(x) = min_i (M_i x + q_i)``.

    The Jacobian takes row ``s`` from the block attaining the minimum in
    component ``s`` (smallest index on ties) and full steps are used.  If
    an active configuration recurs without a residual decrease, or the
    iteration limit is hit, the problem is handed to :func:`solve_enumerate`
    when it is small enough.
    """
    x = np.zeros(P.n) if x0 is None else np.array(x0, dtype=float)
    stop = tol * (1.0 + max(numkit.norm(qi) for qi in P.q))
    seen = {}
    for it in range(max_iter + 1):
        rs = residuals(P, x)
        F = rs.min(axis=0)
        res = numkit.norm(F)
        if res <= stop:
            return _result(P, x, it, "newton")
        if it == max_iter:
            break
        sigma = rs.argmin(axis=0)
        key = sigma.tobytes()
        if key in seen and res >= seen[key]:
            break
        seen[key] = min(res, seen.get(key, np.inf))
        J = representative(P.M, sigma)
        try:
            x = x + numkit.solve_linear(J, -F)
        except SingularMatrix as exc:
            raise SingularJacobian(f"active Jacobian singular at iteration {it}: {exc}") from exc
    if fallback and vertex_count(P.k, P.n) <= ENUMERATE_CAP:
        return solve_enumerate(P)
    raise NoConvergence(f"Newton iteration stalled with residual {res:.3e}")


def solve_enumerate(P, cap=ENUMERATE_CAP):
    """Solve every active linear system and keep the feasible solution.

    Raises MultipleSolutions when two feasible configurations disagree by
    more than ``1e-8`` and NoSolution when none is feasible.
    """
    total = vertex_count(P.k, P.n)
    if total > cap:
        raise TooLarge(total, cap)
    n_acc, _, first, _, other = kernels.enumerate_scan(
        np.ascontiguousarray(P.M), np.ascontiguousarray(P.q), 0, total
    )
    if n_acc == 0:
        raise NoSolution("no active configuration yields a feasible point")
    if other is not None:
        raise MultipleSolutions(np.asarray(first), np.asarray(other))
    return _result(P, np.asarray(first, dtype=float), total, "enumerate")


def solve(P, method="newton", tol=1e-12):
    if method == "newton":
        return solve_newton(P, tol=tol)
    if method == "enumerate":
        return solve_enumerate(P)
    raise ValueError(f"unknown method {method!r}")
