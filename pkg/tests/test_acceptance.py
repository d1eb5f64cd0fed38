"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line (past output capture) and
then asserts, so ``pytest -v tests/test_acceptance.py`` doubles as the report.
"""
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import random_corpus
from evlcp import numkit, wcheck
from evlcp.experiment import run_experiment, summarize
from evlcp.model import assemble_S, min_map, residuals, selection_matrices
from evlcp.probgen import HjbGrid, gen_example51, gen_example52, gen_hjb, gen_two_spd, incomparable_pairs
from evlcp.solver import solve_enumerate, solve_newton

TABLE_EPS = (0.01, 0.001, 0.0001)
HJB_EPS = (0.01, 0.015, 0.02, 0.025, 0.03)
HJB_SIZES = (16, 36, 64, 100)


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail=""):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {title}" + (f" [{detail}]" if detail else ""))
        assert ok, f"criterion {number} failed: {detail}"
    return emit


def test_c01_example51_solution(report):
    P = gen_example51()
    ok, parts = True, []
    for solve in (solve_newton, solve_enumerate):
        t0 = time.perf_counter()
        res = solve(P)
        dt = time.perf_counter() - t0
        good = (numkit.norm(res.x - np.array([2.25, 2.0])) <= 1e-10
                and numkit.norm(min_map(P, res.x)) <= 1e-10 and dt < 0.1)
        ok &= good
        parts.append(f"{res.method}: x={res.x.tolist()} t={dt * 1e3:.2f}ms")
    report(1, "ex51 solution (2.25, 2) with both methods", ok, "; ".join(parts))


def test_c02_example51_spectral(report):
    rep = wcheck.check_spectral(gen_example51().M)
    rho = rep.certificate["rho"]
    ok = rep.holds and abs(rho - 0.8944) <= 5e-4
    report(2, "ex51 spectral certificate rho = 0.8944", ok, f"rho={rho:.10f}, verdict={rep.verdict}")


def test_c03_example52(report):
    P = gen_example52()
    x = solve_newton(P).x
    x_enum = solve_enumerate(P).x
    spec = wcheck.check_spectral(P.M)
    sdd = wcheck.check_sdd(P.M)
    rho = spec.certificate["rho"]
    ok = (numkit.norm(x - 1.0) <= 1e-10 and numkit.norm(x_enum - 1.0) <= 1e-10
          and abs(rho - 1.5) <= 1e-9 and spec.verdict == wcheck.INCONCLUSIVE and sdd.holds)
    report(3, "ex52 solution (1, 1, 1), spectral inconclusive, sdd holds", ok,
           f"x={x.tolist()}, rho={rho:.12f}, spectral={spec.verdict}, sdd={sdd.verdict}")


def test_c04_table1(report):
    rows = summarize(gen_example51(), TABLE_EPS)
    want_tau = (2.3478, 0.1142, 0.0109)
    want_nu = (1.5145, 0.0736, 0.0070)
    ok = all(abs(r["tau"] - t) <= 1e-3 and abs(r["nu"] - v) <= 1e-3
             for r, t, v in zip(rows, want_tau, want_nu))
    ok &= abs(rows[0]["tau_bar"] - 1.2359) <= 1e-3
    detail = "; ".join(f"eps={r['eps']:g}: tau={r['tau']:.4f} nu={r['nu']:.4f} tau_bar={r['tau_bar']:.4f}"
                       for r in rows)
    report(4, "ex51 deterministic columns tau, nu, tau_bar", ok, detail)


def test_c05_table2(report):
    rows = summarize(gen_example52(), TABLE_EPS)
    want = (0.3256, 0.0284, 0.0028)
    ok = all(abs(r["upsilon"] - w) <= 1e-3 and abs(r["tau_bar"] - w) <= 1e-3 for r, w in zip(rows, want))
    detail = "; ".join(f"eps={r['eps']:g}: upsilon={r['upsilon']:.4f} tau_bar={r['tau_bar']:.4f}" for r in rows)
    report(5, "ex52 upsilon = tau_bar_delta", ok, detail)


def test_c06_bound_validity(report):
    t0 = time.perf_counter()
    cases = ((gen_example51(), TABLE_EPS), (gen_example52(), TABLE_EPS), (gen_hjb(HjbGrid.square(16)), HJB_EPS))
    checked, bad = 0, []
    for P, eps_list in cases:
        # run_experiment raises BoundViolation (CLI exit 6) on any violated bound
        for rec in run_experiment(P, eps_list, 100, seed=2024):
            for name, value in rec.bounds_checked().items():
                checked += 1
                if rec.r > value:
                    bad.append((P.name, rec.eps, rec.trial, name))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 30
    report(6, "r <= every applicable relative bound over 100 trials per (problem, eps)", ok,
           f"{checked} comparisons, {len(bad)} violations, {dt:.1f}s")


def test_c07_oracle_equivalence(report):
    worst_diff = worst_rep = 0.0
    count = 0
    for P in random_corpus(500, seed0=7):
        x = solve_newton(P).x
        y = solve_enumerate(P).x
        D = selection_matrices(residuals(P, x))
        xr = -numkit.solve_linear(assemble_S(P.M, D), (D.weights * P.q).sum(axis=0))
        worst_diff = max(worst_diff, numkit.norm(x - y))
        worst_rep = max(worst_rep, numkit.norm(xr - x))
        count += 1
    ok = count >= 500 and worst_diff <= 1e-9 and worst_rep <= 1e-9
    report(7, "Newton = enumeration and the selection-matrix representation", ok,
           f"{count} instances, max |newton-enum|={worst_diff:.2e}, max |repr-x|={worst_rep:.2e}")


def test_c08_wcheck_consistency(report):
    rng = np.random.default_rng(8)
    implications = violations = 0
    for P in random_corpus(500, seed0=8):
        scaled = P.M.copy()
        scaled[:, range(P.n), range(P.n)] *= rng.uniform(0.2, 1.0)
        for M in (P.M, scaled):
            if wcheck.check_sdd(M).holds or wcheck.check_spectral(M).holds:
                implications += 1
                violations += not wcheck.check_exact_vertex(M).holds
    r33 = wcheck.check_exact_vertex(gen_two_spd().M)
    witness = r33.certificate.get("witness", {})
    spectral_only, sdd_only = incomparable_pairs()
    s1, d1 = wcheck.check_spectral(spectral_only), wcheck.check_sdd(spectral_only)
    s2, d2 = wcheck.check_spectral(sdd_only), wcheck.check_sdd(sdd_only)
    ok = (violations == 0 and r33.verdict == wcheck.FAILS and witness.get("kind") == "zero"
          and s1.holds and s1.certificate["rho"] == 0.0 and not d1.holds
          and s2.verdict == wcheck.INCONCLUSIVE and abs(s2.certificate["rho"] - 1.0) <= 1e-9 and d2.holds)
    report(8, "W-check consistency and the counterexample pairs", ok,
           f"{implications} sufficient-test passes, {violations} vertex disagreements, "
           f"two-SPD pair witness sigma={witness.get('sigma')} ({witness.get('kind')}), "
           f"spectral-only rho={s1.certificate['rho']}, sdd-only rho={s2.certificate['rho']:.12f}")


def test_c09_hjb_properties(report):
    t0 = time.perf_counter()
    stats, problems = {}, []
    for n in HJB_SIZES:
        P = gen_hjb(HjbGrid.square(n))
        # certificates of the perturbed problems are checked inside run_trial (exit 5)
        recs = run_experiment(P, HJB_EPS, 100, seed=9)
        for eps in HJB_EPS:
            rs = [r for r in recs if r.eps == eps]
            first = rs[0]
            if any(r.flags != "cert-sdd" for r in rs):
                problems.append(f"n={n} eps={eps}: flags {sorted({r.flags for r in rs})}")
            if any(not (r.r < r.upsilon and r.r < r.tau) for r in rs):
                problems.append(f"n={n} eps={eps}: r not below upsilon and tau")
            if not first.upsilon <= first.tau:
                problems.append(f"n={n} eps={eps}: upsilon > tau")
            stats[n, eps] = (float(np.median([r.r for r in rs])), first.tau, first.upsilon, first.nu)
    names = ("median r", "tau", "upsilon", "nu")
    for n in HJB_SIZES:
        for a, b in zip(HJB_EPS, HJB_EPS[1:]):
            for j, name in enumerate(names):
                if not stats[n, a][j] < stats[n, b][j]:
                    problems.append(f"n={n}: {name} not increasing from eps={a} to {b}")
    for eps in HJB_EPS:
        for a, b in zip(HJB_SIZES, HJB_SIZES[1:]):
            for j, name in enumerate(names[1:], start=1):
                if not stats[a, eps][j] < stats[b, eps][j]:
                    problems.append(f"eps={eps}: {name} not increasing from n={a} to {b}")
    dt = time.perf_counter() - t0
    ok = not problems and dt < 60
    r16, r100 = stats[16, 0.01], stats[100, 0.01]
    report(9, "HJB qualitative properties on square grids", ok,
           f"{dt:.1f}s; eps=0.01 n=16 (r,tau,upsilon,nu)=({r16[0]:.4f},{r16[1]:.4f},{r16[2]:.4f},{r16[3]:.4f}) "
           f"n=100 ({r100[0]:.4f},{r100[1]:.4f},{r100[2]:.4f},{r100[3]:.4f})"
           + (f"; problems: {problems[:5]}" if problems else ""))


def test_c10_cli_determinism(report, tmp_path):
    outputs = []
    for run in ("a", "b"):
        csv, svg = tmp_path / f"{run}.csv", tmp_path / f"{run}.svg"
        proc = subprocess.run(
            [sys.executable, "-m", "evlcp", "experiment", "--problem", "ex51", "--eps", "0.01,0.001,0.0001",
             "--trials", "20", "--seed", "5", "--out", str(csv), "--plot", str(svg)],
            capture_output=True, text=True)
        assert proc.returncode == 0, proc.stdout + proc.stderr
        outputs.append((csv.read_bytes(), svg.read_bytes()))
    ok = outputs[0] == outputs[1] and len(outputs[0][0]) > 0 and len(outputs[0][1]) > 0
    report(10, "identical experiment runs give byte-identical CSV and SVG", ok,
           f"csv {len(outputs[0][0])} bytes, svg {len(outputs[0][1])} bytes")
