"""Random relative-perturbation experiments and their CSV records.

For each ``eps`` and trial the base problem is perturbed, both problems are
solved, and the realized relative error ``r = ||x - y|| / ||x||`` is compared
with every applicable relative bound.
"""
import csv
import time
from dataclasses import dataclass

import numpy as np

from . import bounds, numkit, wcheck
from .errors import EtaTooLarge, EvlcpError, NotApplicable
from .probgen import perturb
from .solver import solve_newton

CSV_COLUMNS = ("problem", "n", "eps", "seed", "trial", "r", "tau_bar", "tau", "nu",
               "upsilon", "eta_gamma", "eta_delta", "flags")
BOUND_RTOL = 1e-9


class CertificateLost(EvlcpError):
    """A perturbed problem could not be certified to have the row W-property."""


class BoundViolation(EvlcpError):
    """A realized error exceeded a bound that theory guarantees."""


@dataclass
class ExperimentRecord:
    problem: str
    n: int
    eps: float
    seed: int
    trial: int
    r: float
    tau_bar: float | None
    tau: float | None
    nu: float | None
    upsilon: float | None
    eta_gamma: float | None
    eta_delta: float | None
    flags: str
    wall_time: float = 0.0

    def bounds_checked(self):
        """Bounds that ``r`` must respect (the componentwise ``nu`` is excluded, see flags)."""
        return {k: v for k, v in (("tau", self.tau), ("tau_bar", self.tau_bar),
                                  ("upsilon", self.upsilon)) if v is not None}


def trial_seed(seed, trial):
    state = np.random.SeedSequence([int(seed), int(trial)]).generate_state(2, np.uint32)
    return int(state[0]) << 32 | int(state[1])


def _try(fn, *args):
    try:
        return fn(*args)
    except (NotApplicable, EtaTooLarge):
        return None


@dataclass
class _Setup:
    x: np.ndarray
    x_norm: float
    gamma: object
    delta: object


def prepare(P):
    x = solve_newton(P).x
    x_norm = numkit.norm(x)
    if x_norm == 0:
        raise ValueError("relative bounds need a nonzero solution")
    return _Setup(x, x_norm, _try(bounds.gamma_upper, P.M), _try(bounds.delta_upper, P.M))


def evaluate_bounds(P, setup, eps, dm_norms=None, dq_norms=None):
    """Relative bounds for one ``eps``; norms default to the exact recipe scaling."""
    K = P.k + 1
    e = np.full(K, float(eps))
    if dm_norms is None:
        dm_norms = [eps * numkit.norm(Mi) for Mi in P.M]
    if dq_norms is None:
        dq_norms = [eps * numkit.norm(qi) for qi in P.q]
    out = {"tau": None, "tau_bar_gamma": None, "nu": None, "upsilon": None,
           "tau_bar_delta": None, "eta_gamma": None, "eta_delta": None}
    if setup.gamma is not None:
        rep = bounds.relative_bounds(P.M, setup.gamma, e, setup.x_norm, dq_norms, dm_norms)
        out.update(eta_gamma=rep.eta, tau=rep.tau, tau_bar_gamma=rep.tau_bar)
        out["nu"] = _try(bounds.relative_bound_componentwise, P.M, setup.gamma, e)
    if setup.delta is not None:
        rep = bounds.relative_bounds(P.M, setup.delta, e, setup.x_norm, dq_norms, dm_norms)
        out.update(eta_delta=rep.eta, upsilon=rep.upsilon, tau_bar_delta=rep.tau_bar)
    bars = [v for v in (out["tau_bar_gamma"], out["tau_bar_delta"]) if v is not None]
    out["tau_bar"] = min(bars) if bars else None
    return out


def run_trial(P, setup, eps, seed, trial):
    t0 = time.perf_counter()
    Pt, spec = perturb(P, eps, trial_seed(seed, trial))
    flags = []
    cert = wcheck.certify(Pt.M)
    if cert is None:
        raise CertificateLost(f"perturbed {P.name} (eps={eps}, trial={trial}) lost its row W-property certificate")
    y = solve_newton(Pt).x
    r = numkit.norm(setup.x - y) / setup.x_norm
    b = evaluate_bounds(P, setup, eps, spec.dm_norms, spec.dq_norms)
    if setup.gamma is None:
        flags.append("no-gamma")
    elif b["tau"] is None:
        flags.append("eta-gamma>=1")
    if setup.delta is None:
        flags.append("no-delta")
    elif b["upsilon"] is None:
        flags.append("eta-delta>=1")
    flags.append("cert-" + cert.method)
    if any(qn < nq for qn, nq in zip(spec.q_neg_norms, (numkit.norm(q) for q in P.q))):
        flags.append("q-not-nonpositive")
    if b["nu"] is not None and r > b["nu"]:
        flags.append("r>nu")
    rec = ExperimentRecord(
        problem=P.name, n=P.n, eps=float(eps), seed=int(seed), trial=int(trial), r=float(r),
        tau_bar=b["tau_bar"], tau=b["tau"], nu=b["nu"], upsilon=b["upsilon"],
        eta_gamma=b["eta_gamma"], eta_delta=b["eta_delta"], flags=";".join(flags),
        wall_time=time.perf_counter() - t0,
    )
    for name, value in rec.bounds_checked().items():
        if r > value * (1 + BOUND_RTOL):
            raise BoundViolation(f"r = {r} exceeds {name} = {value} (eps={eps}, trial={trial})")
    return rec


def run_experiment(P, eps_list, trials, seed):
    if trials < 1:
        raise ValueError("trials must be >= 1")
    setup = prepare(P)
    records = [run_trial(P, setup, eps, seed, t) for eps in eps_list for t in range(trials)]
    records.sort(key=lambda rec: (rec.eps, rec.trial))
    return records


def summarize(P, eps_list):
    """Deterministic columns per eps (they do not depend on the random draws)."""
    setup = prepare(P)
    rows = []
    for eps in eps_list:
        b = evaluate_bounds(P, setup, eps)
        rows.append({"eps": float(eps), **b})
    return rows


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def write_csv(records, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for rec in records:
            w.writerow([_fmt(getattr(rec, c)) for c in CSV_COLUMNS])


def _parse(name, text):
    if name in ("problem", "flags"):
        return text
    if text == "":
        return None
    if name in ("n", "seed", "trial"):
        return int(text)
    return float(text)


def read_csv(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        return [ExperimentRecord(**{c: _parse(c, row[c]) for c in CSV_COLUMNS}) for row in reader]
