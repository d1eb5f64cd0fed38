"""numpy implementations of the compiled kernels.

Same signatures and semantics as ``_kernels.pyx``; batches of small
matrices are factored together by a vectorised partial-pivot LU that
follows the compiled routine's pivot order.
"""
import numpy as np

CHUNK = 8192


def _decode(codes, K, n):
    digits = np.empty((codes.size, n), dtype=np.int64)
    c = codes.copy()
    for s in range(n):
        digits[:, s] = c % K
        c //= K
    return digits


def batched_lu(A):
    """Factor a stack ``(B, n, n)`` in place; returns ``(lu, perm, det, minpiv)``."""
    lu = np.array(A, dtype=float)
    B, n, _ = lu.shape
    rows = np.arange(B)
    perm = np.empty((B, n), dtype=np.int64)
    sign = np.ones(B)
    prod = np.ones(B)
    minpiv = np.full(B, np.inf)
    for j in range(n):
        p = j + np.argmax(np.abs(lu[:, j:, j]), axis=1)
        perm[:, j] = p
        swap = p != j
        if swap.any():
            r = rows[swap]
            tmp = lu[r, j, :].copy()
            lu[r, j, :] = lu[r, p[swap], :]
            lu[r, p[swap], :] = tmp
            sign[swap] = -sign[swap]
        piv = lu[:, j, j]
        minpiv = np.minimum(minpiv, np.abs(piv))
        prod *= piv
        if j + 1 < n:
            safe = np.where(piv == 0.0, 1.0, piv)
            m = lu[:, j + 1:, j] / safe[:, None]
            m[piv == 0.0] = 0.0
            lu[:, j + 1:, j] = m
            lu[:, j + 1:, j + 1:] -= m[:, :, None] * lu[:, j, None, j + 1:]
    return lu, perm, sign * prod, minpiv


def batched_lu_solve(lu, perm, b):
    """Solve with factors from ``batched_lu``; ``b`` is ``(B, n)`` or ``(B, n, m)``."""
    x = np.array(b, dtype=float)
    B, n = lu.shape[:2]
    rows = np.arange(B)
    for j in range(n):
        p = perm[:, j]
        tmp = x[rows, j].copy()
        x[rows, j] = x[rows, p]
        x[rows, p] = tmp
    for r in range(n):
        if r:
            if x.ndim == 2:
                x[:, r] -= np.einsum("bj,bj->b", lu[:, r, :r], x[:, :r])
            else:
                x[:, r] -= np.einsum("bj,bjm->bm", lu[:, r, :r], x[:, :r])
    for r in range(n - 1, -1, -1):
        if r + 1 < n:
            if x.ndim == 2:
                x[:, r] -= np.einsum("bj,bj->b", lu[:, r, r + 1:], x[:, r + 1:])
            else:
                x[:, r] -= np.einsum("bj,bjm->bm", lu[:, r, r + 1:], x[:, r + 1:])
        d = lu[:, r, r]
        x[:, r] /= d if x.ndim == 2 else d[:, None]
    return x


def _representatives(blocks, codes):
    K, n = blocks.shape[:2]
    sigma = _decode(codes, K, n)
    return blocks[sigma, np.arange(n)[None, :], :], sigma


def vertex_scan(blocks, start, stop, det_rtol=1e-12):
    blocks = np.ascontiguousarray(blocks, dtype=float)
    n = blocks.shape[1]
    n_pos = n_neg = n_zero = 0
    f_pos = f_neg = f_zero = -1
    for lo in range(start, stop, CHUNK):
        codes = np.arange(lo, min(lo + CHUNK, stop), dtype=np.int64)
        R, _ = _representatives(blocks, codes)
        scale = np.abs(R).sum(axis=2).max(axis=1) ** n
        _, _, d, _ = batched_lu(R)
        zero = np.abs(d) <= det_rtol * scale
        pos = ~zero & (d > 0)
        neg = ~zero & (d < 0)
        for mask, name in ((pos, "pos"), (neg, "neg"), (zero, "zero")):
            count = int(mask.sum())
            if not count:
                continue
            first = int(codes[np.argmax(mask)])
            if name == "pos":
                n_pos += count
                f_pos = first if f_pos < 0 else f_pos
            elif name == "neg":
                n_neg += count
                f_neg = first if f_neg < 0 else f_neg
            else:
                n_zero += count
                f_zero = first if f_zero < 0 else f_zero
    return n_pos, n_neg, n_zero, f_pos, f_neg, f_zero


def enumerate_scan(blocks, q, start, stop, feas_rtol=1e-9, pivot_rtol=1e-14, distinct_tol=1e-8):
    blocks = np.ascontiguousarray(blocks, dtype=float)
    q = np.ascontiguousarray(q, dtype=float)
    n = blocks.shape[1]
    n_acc = 0
    f_code = o_code = -1
    first = other = None
    for lo in range(start, stop, CHUNK):
        codes = np.arange(lo, min(lo + CHUNK, stop), dtype=np.int64)
        A, sigma = _representatives(blocks, codes)
        b = -q[sigma, np.arange(n)[None, :]]
        anorm = np.abs(A).sum(axis=2).max(axis=1)
        lu, perm, _, minpiv = batched_lu(A)
        ok = ~((minpiv < pivot_rtol * anorm) | (minpiv == 0.0))
        if not ok.any():
            continue
        codes, lu, perm, b = codes[ok], lu[ok], perm[ok], b[ok]
        x = batched_lu_solve(lu, perm, b)
        xnorm = np.abs(x).max(axis=1)
        res = np.einsum("isc,bc->bis", blocks, x) + q[None]
        feasible = (res >= -feas_rtol * (1.0 + xnorm)[:, None, None]).all(axis=(1, 2))
        for code, xs in zip(codes[feasible], x[feasible]):
            n_acc += 1
            if f_code < 0:
                f_code, first = int(code), xs.copy()
            elif o_code < 0 and np.abs(xs - first).max() > distinct_tol:
                o_code, other = int(code), xs.copy()
    return n_acc, f_code, first, o_code, other


def alpha_scan(blocks, weights, block, pivot_rtol=1e-14):
    blocks = np.ascontiguousarray(blocks, dtype=float)
    weights = np.ascontiguousarray(weights, dtype=float)
    n = blocks.shape[1]
    best, best_t = 0.0, -1
    n_sing, f_sing = 0, -1
    for lo in range(0, weights.shape[0], CHUNK):
        w = weights[lo:lo + CHUNK]
        S = np.einsum("tis,isc->tsc", w, blocks)
        anorm = np.abs(S).sum(axis=2).max(axis=1)
        lu, perm, _, minpiv = batched_lu(S)
        sing = (minpiv < pivot_rtol * anorm) | (minpiv == 0.0)
        if sing.any():
            n_sing += int(sing.sum())
            if f_sing < 0:
                f_sing = lo + int(np.argmax(sing))
        ok = np.flatnonzero(~sing)
        if ok.size == 0:
            continue
        eye = np.broadcast_to(np.eye(n), (ok.size, n, n))
        X = batched_lu_solve(lu[ok], perm[ok], eye)
        vals = (np.abs(X) * w[ok, block][:, None, :]).sum(axis=2).max(axis=1)
        j = int(np.argmax(vals))
        if vals[j] > best or best_t < 0:
            best, best_t = float(vals[j]), lo + int(ok[j])
    return best, best_t, n_sing, f_sing
