"""``evlcp`` command line interface.

Exit codes: 0 ok, 1 input error, 2 solver failure, 3 no check holds,
4 enumeration too large, 5 perturbed certificate lost, 6 bound violation.
"""
import argparse
import json
import sys

import numpy as np

from . import bounds, wcheck
from .errors import EvlcpError, MultipleSolutions, NotApplicable, SampleSingular, TooLarge
from .experiment import BoundViolation, CertificateLost, run_experiment, summarize, write_csv
from .plot import emit_plot
from .probgen import HjbGrid, gen_example51, gen_example52, gen_hjb, gen_random_certified, gen_two_spd
from .problem_io import ProblemFormatError, load_problem, save_problem
from .solver import ENUMERATE_CAP, solve_enumerate, solve_newton

EXIT_OK, EXIT_INPUT, EXIT_SOLVER, EXIT_NO_CHECK, EXIT_TOO_LARGE, EXIT_CERT_LOST, EXIT_VIOLATION = range(7)


def _emit(obj):
    print(json.dumps(obj, indent=1, sort_keys=True))


def _error(kind, exc, **extra):
    payload = {"error": kind, "message": str(exc), **extra}
    _emit(payload)


def cmd_solve(args):
    P = load_problem(args.input)
    try:
        if args.method == "enumerate":
            result = solve_enumerate(P)
        else:
            result = solve_newton(P, tol=args.tol)
            # Without a certificate the Newton point may be one of several solutions.
            if wcheck.certify(P.M, vlcp=P.vlcp) is None and wcheck.vertex_count(P.k, P.n) <= ENUMERATE_CAP:
                solve_enumerate(P)
    except MultipleSolutions as exc:
        _error("MultipleSolutions", exc, solutions=[np.asarray(s).tolist() for s in exc.solutions])
        return EXIT_SOLVER
    except TooLarge as exc:
        _error("TooLarge", exc)
        return EXIT_TOO_LARGE
    except EvlcpError as exc:
        _error(type(exc).__name__, exc)
        return EXIT_SOLVER
    _emit(result.to_dict())
    return EXIT_OK


def cmd_check(args):
    P = load_problem(args.input)
    methods = ["spectral", "sdd", "vertex"] if args.method == "all" else [args.method]
    reports = []
    too_large = None
    for m in methods:
        if m == "spectral":
            reports.append(wcheck.check_spectral(P.M, vlcp=P.vlcp))
        elif m == "sdd":
            reports.append(wcheck.check_sdd(P.M))
        else:
            try:
                reports.append(wcheck.check_exact_vertex(P.M, cap=args.cap))
            except TooLarge as exc:
                too_large = exc
    out = {"reports": [r.to_dict() for r in reports]}
    if too_large is not None:
        out["error"] = {"method": "exact-vertex", "error": "TooLarge", "message": str(too_large)}
    _emit(out)
    if any(r.holds for r in reports):
        return EXIT_OK
    if too_large is not None:
        return EXIT_TOO_LARGE
    return EXIT_NO_CHECK


def cmd_bounds(args):
    P = load_problem(args.input)
    try:
        if args.which == "gamma":
            bset = bounds.gamma_upper(P.M, vlcp=P.vlcp)
        elif args.which == "delta":
            bset = bounds.delta_upper(P.M, vlcp=P.vlcp)
        else:
            start = 1 if P.vlcp else 0
            values = [bounds.alpha_sample(P.M, i, args.trials, args.seed, vlcp=P.vlcp)
                      for i in range(start, P.k + 1)]
            bset = bounds.BoundSet(bounds.ALPHA_SAMPLE, values)
    except NotApplicable as exc:
        _error("NotApplicable", exc, detail=wcheck._jsonable(
            {k: v for k, v in exc.detail.items() if k != "certificate"}))
        return EXIT_NO_CHECK
    except SampleSingular as exc:
        _error("SampleSingular", exc)
        return EXIT_SOLVER
    _emit(bset.to_dict())
    return EXIT_OK


def _problem_for(name, n):
    if name == "ex51":
        return gen_example51()
    if name == "ex52":
        return gen_example52()
    if name == "hjb":
        return gen_hjb(HjbGrid.square(n))
    raise ValueError(f"unknown problem {name!r}")


def _fmt(v):
    return "n/a" if v is None else f"{v:.4f}"


def cmd_experiment(args):
    P = _problem_for(args.problem, args.n)
    eps_list = args.eps
    try:
        records = run_experiment(P, eps_list, args.trials, args.seed)
    except CertificateLost as exc:
        _error("CertificateLost", exc)
        return EXIT_CERT_LOST
    except BoundViolation as exc:
        _error("BoundViolation", exc)
        return EXIT_VIOLATION
    if args.out:
        write_csv(records, args.out)
    if args.plot:
        emit_plot(records, args.plot)
    print(f"{P.name} n={P.n} trials={args.trials} seed={args.seed}")
    print(f"{'eps':>8} {'median r':>10} {'tau_bar':>8} {'tau':>8} {'nu':>8} {'upsilon':>8}")
    for row in summarize(P, eps_list):
        rs = sorted(rec.r for rec in records if rec.eps == row["eps"])
        med = float(np.median(rs))
        print(f"{row['eps']:>8g} {med:>10.4f} {_fmt(row['tau_bar']):>8} {_fmt(row['tau']):>8} "
              f"{_fmt(row['nu']):>8} {_fmt(row['upsilon']):>8}")
    return EXIT_OK


def cmd_gen(args):
    if args.problem == "two-spd":
        P = gen_two_spd()
    elif args.problem == "random":
        P = gen_random_certified(args.n, args.k, args.seed)
    else:
        P = _problem_for(args.problem, args.n)
    save_problem(P, args.out)
    return EXIT_OK


def _eps_list(text):
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad eps list {text!r}") from exc
    if not vals or any(v < 0 for v in vals):
        raise argparse.ArgumentTypeError("eps list must be nonempty and nonnegative")
    return vals


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="evlcp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve a problem file")
    s.add_argument("--input", required=True)
    s.add_argument("--method", choices=["newton", "enumerate"], default="newton")
    s.add_argument("--tol", type=float, default=1e-12)
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("check", help="row W-property tests")
    c.add_argument("--input", required=True)
    c.add_argument("--method", choices=["spectral", "sdd", "vertex", "all"], default="all")
    c.add_argument("--cap", type=int, default=wcheck.DEFAULT_VERTEX_CAP)
    c.set_defaults(func=cmd_check)

    b = sub.add_parser("bounds", help="condition constants gamma, delta or sampled alpha")
    b.add_argument("--input", required=True)
    b.add_argument("--which", choices=["gamma", "delta", "alpha-sample"], default="gamma")
    b.add_argument("--trials", type=int, default=10_000)
    b.add_argument("--seed", type=_nonneg_int, default=0)
    b.set_defaults(func=cmd_bounds)

    e = sub.add_parser("experiment", help="random relative perturbation experiment")
    e.add_argument("--problem", choices=["ex51", "ex52", "hjb"], required=True)
    e.add_argument("--n", type=int, default=16, help="unknowns for hjb (a perfect square)")
    e.add_argument("--eps", type=_eps_list, required=True, help="comma separated list")
    e.add_argument("--trials", type=int, default=100)
    e.add_argument("--seed", type=_nonneg_int, default=0)
    e.add_argument("--out", help="CSV output path")
    e.add_argument("--plot", help="SVG output path")
    e.set_defaults(func=cmd_experiment)

    g = sub.add_parser("gen", help="write a problem file")
    g.add_argument("--problem", choices=["ex51", "ex52", "hjb", "two-spd", "random"], required=True)
    g.add_argument("--n", type=int, default=16)
    g.add_argument("--k", type=int, default=1)
    g.add_argument("--seed", type=_nonneg_int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ProblemFormatError as exc:
        _error("InputError", exc)
        return EXIT_INPUT
    except ValueError as exc:
        _error("InputError", exc)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
