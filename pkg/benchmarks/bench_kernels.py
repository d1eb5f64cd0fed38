"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each line reports the best wall time per backend and the speedup; results
of the two backends are checked to agree.
"""
import argparse
import timeit

import numpy as np

from evlcp import _kernels_py, kernels
from evlcp.probgen import gen_random_certified


def cases():
    P = gen_random_certified(8, 2, 1)        # 3^8 = 6561 representatives
    Q = gen_random_certified(6, 3, 2)        # 4^6 = 4096 active systems
    M, q = np.ascontiguousarray(P.M), np.ascontiguousarray(P.q)
    MQ, qQ = np.ascontiguousarray(Q.M), np.ascontiguousarray(Q.q)
    rng = np.random.default_rng(0)
    W = rng.exponential(size=(10_000, 3, 8))
    W = np.ascontiguousarray(W / W.sum(axis=1, keepdims=True))
    return [
        ("vertex_scan n=8 k=2", "vertex_scan", (M, 0, 3**8)),
        ("enumerate_scan n=6 k=3", "enumerate_scan", (MQ, qQ, 0, 4**6)),
        ("alpha_scan 10^4 samples n=8", "alpha_scan", (M, W, 0)),
    ]


def _agree(a, b):
    return all(np.allclose(x, y, rtol=1e-12, atol=1e-14) if x is not None and y is not None else x is y
               for x, y in zip(a, b))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    ext = kernels.compiled()
    if ext is None:
        print("compiled kernels not built; only the numpy backend is available")
    print(f"{'case':<30} {'numpy [s]':>10} {'cython [s]':>11} {'speedup':>8}")
    for label, fn, a in cases():
        py = getattr(_kernels_py, fn)
        t_py = min(timeit.repeat(lambda: py(*a), number=1, repeat=args.repeat))
        if ext is None:
            print(f"{label:<30} {t_py:>10.4f} {'-':>11} {'-':>8}")
            continue
        cy = getattr(ext, fn)
        assert _agree(py(*a), cy(*a)), f"backends disagree on {label}"
        t_cy = min(timeit.repeat(lambda: cy(*a), number=1, repeat=args.repeat))
        print(f"{label:<30} {t_py:>10.4f} {t_cy:>11.4f} {t_py / t_cy:>7.1f}x")


if __name__ == "__main__":
    main()
