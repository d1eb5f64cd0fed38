"""Problem instances: the two small benchmark problems, an HJB discretisation,
random certified instances and the random relative perturbation recipe."""
from dataclasses import dataclass

import numpy as np

from . import numkit
from .errors import DegenerateSample
from .model import EvlcpProblem


def _philox(*key):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(v) for v in key])))


def gen_example51():
    M0 = [[3.0, -2.0], [-4.0, 5.0]]
    M1 = [[4.0, -4.0], [-1.0, 2.0]]
    q = [[-1.0, -1.0], [-1.0, -1.0]]
    return EvlcpProblem(np.array([M0, M1]), np.array(q), name="ex51")


def gen_example52():
    M0 = [[1.0, 0.75, 0.0], [0.75, 1.0, 0.0], [0.0, 0.75, 1.0]]
    M1 = [[1.0, 0.0, 0.75], [0.0, 1.0, 0.75], [0.75, 0.0, 1.0]]
    q = np.full((2, 3), -1.75)
    return EvlcpProblem(np.array([M0, M1]), q, name="ex52")


def gen_two_spd(q=None):
    """Two SPD blocks without the row W-property (a mixed representative is singular)."""
    M = np.array([[[2.0, 1.0], [1.0, 1.0]], [[1.0, 1.0], [1.0, 2.0]]])
    q = np.full((2, 2), -1.0) if q is None else np.asarray(q, dtype=float)
    return EvlcpProblem(M, q, name="two-spd")


def incomparable_pairs():
    """Block pairs separating the two sufficient tests.

    The first passes the spectral test (radius 0) but neither block is sdd;
    the second has two sdd blocks but spectral radius exactly 1.
    """
    spectral_only = np.array([[[1.0, 0.0], [-1.0, 1.0]], [[2.0, 0.0], [3.0, 2.0]]])
    sdd_only = np.array([
        [[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 1.0, 2.0]],
        [[2.0, 0.0, 1.0], [0.0, 2.0, 1.0], [1.0, 0.0, 2.0]],
    ])
    return spectral_only, sdd_only


HJB_COEFFS = ((0.002, 0.001, 20.0), (0.001, 0.001, 10.0))


@dataclass(frozen=True)
class HjbGrid:
    """Interior grid on (0, 2) x (0, 1); unknown ``(ix, iy)`` sits at ``ix * my + iy``."""

    mx: int
    my: int

    def __post_init__(self):
        if self.mx < 1 or self.my < 1:
            raise ValueError("grid needs at least one interior point per axis")

    @property
    def hx(self):
        return 2.0 / (self.mx + 1)

    @property
    def hy(self):
        return 1.0 / (self.my + 1)

    @property
    def n(self):
        return self.mx * self.my

    @classmethod
    def square(cls, n):
        m = int(round(np.sqrt(n)))
        if m * m != n:
            raise ValueError(f"n = {n} is not a perfect square")
        return cls(m, m)


def _second_difference(m):
    T = 2.0 * np.eye(m)
    idx = np.arange(m - 1)
    T[idx, idx + 1] = -1.0
    T[idx + 1, idx] = -1.0
    return T


def hjb_block(grid, a, b, c):
    """Central differences for ``-(a u_xx + b u_yy) + c u`` with zero Dirichlet data."""
    Tx = _second_difference(grid.mx) / grid.hx**2
    Ty = _second_difference(grid.my) / grid.hy**2
    return a * np.kron(Tx, np.eye(grid.my)) + b * np.kron(np.eye(grid.mx), Ty) + c * np.eye(grid.n)


def gen_hjb(grid):
    """Two-operator HJB problem ``max_i {L_i u + f_i} = 0`` written as ``min_i {-L_i u - f_i} = 0``."""
    M = np.array([hjb_block(grid, *coef) for coef in HJB_COEFFS])
    q = -np.ones((2, grid.n))
    return EvlcpProblem(M, q, name="hjb")


def gen_random_certified(n, k, seed):
    """Random blocks made sdd with positive diagonals by a diagonal shift."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    rng = _philox(seed, n, k)
    R = rng.uniform(-1.0, 1.0, size=(k + 1, n, n))
    shift = 1.0 + np.abs(R).sum(axis=2)
    M = R + shift[:, :, None] * np.eye(n)[None]
    q = rng.uniform(-1.0, 1.0, size=(k + 1, n))
    return EvlcpProblem(M, q, name=f"random-{n}-{k}-{seed}")


@dataclass(frozen=True)
class PerturbationSpec:
    eps: float
    seed: int
    dM: np.ndarray
    dq: np.ndarray
    dm_norms: tuple
    dq_norms: tuple
    q_neg_norms: tuple


MAX_RESAMPLE = 8


def _draw(rng, shape):
    for _ in range(MAX_RESAMPLE + 1):
        s = rng.standard_normal(shape)
        nrm = numkit.norm(s)
        if nrm > 0:
            return s, nrm
    raise DegenerateSample(f"random perturbation of shape {shape} had zero norm {MAX_RESAMPLE + 1} times")


def perturb(P, eps, seed):
    """Scale standard-normal ``S_i``, ``t_i`` so that ``||dM_i|| = eps ||M_i||`` and ``||dq_i|| = eps ||q_i||``.

    Block ``i`` draws from its own Philox stream keyed by ``(seed, i)``.
    For a VLCP the identity block and ``q_0 = 0`` stay fixed.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    dM = np.zeros_like(P.M)
    dq = np.zeros_like(P.q)
    for i in range(P.k + 1):
        if P.vlcp and i == 0:
            continue
        rng = _philox(seed, i)
        S, s_norm = _draw(rng, (P.n, P.n))
        t, t_norm = _draw(rng, (P.n,))
        dM[i] = (eps * numkit.norm(P.M[i]) / s_norm) * S
        q_norm = numkit.norm(P.q[i])
        if q_norm > 0:
            dq[i] = (eps * q_norm / t_norm) * t
    spec = PerturbationSpec(
        eps=float(eps),
        seed=int(seed),
        dM=dM,
        dq=dq,
        dm_norms=tuple(numkit.norm(d) for d in dM),
        dq_norms=tuple(numkit.norm(d) for d in dq),
        q_neg_norms=tuple(numkit.norm(np.maximum(-qi, 0.0)) for qi in P.q),
    )
    return P.with_data(M=P.M + dM, q=P.q + dq, name=P.name), spec
