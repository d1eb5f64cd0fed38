# cython: language_level=3
"""Compiled inner loops over representative matrices and sampled selections.

Every routine mirrors the function of the same name in ``_kernels_py``;
the two are expected to agree to rounding.  Representative matrices are
addressed by an integer code: digit ``s`` of ``code`` in base ``k+1``
(least significant first) is the block that row ``s`` is taken from.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, pow

cnp.import_array()


cdef inline void _decode(long long code, int K, int n, int* sigma) noexcept nogil:
    cdef int s
    for s in range(n):
        sigma[s] = <int>(code % K)
        code //= K


cdef inline double _norm_inf(double* a, int n) noexcept nogil:
    cdef int r, c
    cdef double best = 0.0, row
    for r in range(n):
        row = 0.0
        for c in range(n):
            row += fabs(a[r * n + c])
        if row > best:
            best = row
    return best


cdef int _lu(double* a, int n, int* perm, double* det, double* minpiv) noexcept nogil:
    """In-place partial-pivot LU; perm[j] is the row swapped into position j."""
    cdef int j, r, c, p
    cdef double big, v, piv, m, sign = 1.0, prod = 1.0, mp = 1e308
    for j in range(n):
        p = j
        big = fabs(a[j * n + j])
        for r in range(j + 1, n):
            v = fabs(a[r * n + j])
            if v > big:
                big = v
                p = r
        perm[j] = p
        if p != j:
            sign = -sign
            for c in range(n):
                v = a[j * n + c]
                a[j * n + c] = a[p * n + c]
                a[p * n + c] = v
        piv = a[j * n + j]
        if fabs(piv) < mp:
            mp = fabs(piv)
        prod *= piv
        if piv == 0.0:
            continue
        for r in range(j + 1, n):
            m = a[r * n + j] / piv
            a[r * n + j] = m
            if m != 0.0:
                for c in range(j + 1, n):
                    a[r * n + c] -= m * a[j * n + c]
    det[0] = sign * prod
    minpiv[0] = mp
    return 0


cdef void _lu_solve(double* lu, int n, int* perm, double* b) noexcept nogil:
    cdef int j, r
    cdef double v
    for j in range(n):
        if perm[j] != j:
            v = b[j]
            b[j] = b[perm[j]]
            b[perm[j]] = v
    for r in range(n):
        v = b[r]
        for j in range(r):
            v -= lu[r * n + j] * b[j]
        b[r] = v
    for r in range(n - 1, -1, -1):
        v = b[r]
        for j in range(r + 1, n):
            v -= lu[r * n + j] * b[j]
        b[r] = v / lu[r * n + r]


def vertex_scan(const double[:, :, ::1] blocks, long long start, long long stop, double det_rtol=1e-12):
    """Signs of det(R_code) for codes in [start, stop).

    Returns ``(n_pos, n_neg, n_zero, first_pos, first_neg, first_zero)``
    with ``-1`` for an absent witness.  A determinant counts as zero when
    ``|det| <= det_rtol * ||R||_inf ** n``.
    """
    cdef int K = blocks.shape[0], n = blocks.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] work = np.empty(n * n)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] sig = np.empty(n, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] perm = np.empty(n, dtype=np.int32)
    cdef double* a = &work[0]
    cdef int* sigma = <int*>&sig[0]
    cdef int* pp = <int*>&perm[0]
    cdef long long code, n_pos = 0, n_neg = 0, n_zero = 0
    cdef long long f_pos = -1, f_neg = -1, f_zero = -1
    cdef int s, c
    cdef double d, mp, scale
    with nogil:
        for code in range(start, stop):
            _decode(code, K, n, sigma)
            for s in range(n):
                for c in range(n):
                    a[s * n + c] = blocks[sigma[s], s, c]
            scale = pow(_norm_inf(a, n), n)
            _lu(a, n, pp, &d, &mp)
            if fabs(d) <= det_rtol * scale:
                n_zero += 1
                if f_zero < 0:
                    f_zero = code
            elif d > 0:
                n_pos += 1
                if f_pos < 0:
                    f_pos = code
            else:
                n_neg += 1
                if f_neg < 0:
                    f_neg = code
    return n_pos, n_neg, n_zero, f_pos, f_neg, f_zero


def enumerate_scan(const double[:, :, ::1] blocks, const double[:, ::1] q, long long start, long long stop,
                   double feas_rtol=1e-9, double pivot_rtol=1e-14, double distinct_tol=1e-8):
    """Solve every active system A_code x = b_code and keep feasible solutions.

    Returns ``(n_accepted, first_code, first_x, other_code, other_x)`` where
    ``other`` is the first accepted solution farther than ``distinct_tol``
    (inf-norm) from ``first``; absent entries are ``-1`` / ``None``.
    """
    cdef int K = blocks.shape[0], n = blocks.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] work = np.empty(n * n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xb = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] first = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] other = np.empty(n)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] sig = np.empty(n, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] perm = np.empty(n, dtype=np.int32)
    cdef double* a = &work[0]
    cdef double* x = &xb[0]
    cdef int* sigma = <int*>&sig[0]
    cdef int* pp = <int*>&perm[0]
    cdef long long code, n_acc = 0, f_code = -1, o_code = -1
    cdef int s, c, i
    cdef double d, mp, anorm, xnorm, r, floor, diff
    cdef bint ok
    with nogil:
        for code in range(start, stop):
            _decode(code, K, n, sigma)
            for s in range(n):
                for c in range(n):
                    a[s * n + c] = blocks[sigma[s], s, c]
                x[s] = -q[sigma[s], s]
            anorm = _norm_inf(a, n)
            _lu(a, n, pp, &d, &mp)
            if mp < pivot_rtol * anorm or mp == 0.0:
                continue
            _lu_solve(a, n, pp, x)
            xnorm = 0.0
            for s in range(n):
                if fabs(x[s]) > xnorm:
                    xnorm = fabs(x[s])
            floor = -feas_rtol * (1.0 + xnorm)
            ok = True
            for i in range(K):
                for s in range(n):
                    r = q[i, s]
                    for c in range(n):
                        r += blocks[i, s, c] * x[c]
                    if r < floor:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            n_acc += 1
            if f_code < 0:
                f_code = code
                for s in range(n):
                    first[s] = x[s]
            elif o_code < 0:
                diff = 0.0
                for s in range(n):
                    if fabs(x[s] - first[s]) > diff:
                        diff = fabs(x[s] - first[s])
                if diff > distinct_tol:
                    o_code = code
                    for s in range(n):
                        other[s] = x[s]
    return (n_acc, f_code, first if f_code >= 0 else None,
            o_code, other if o_code >= 0 else None)


def alpha_scan(const double[:, :, ::1] blocks, const double[:, :, ::1] weights, int block, double pivot_rtol=1e-14):
    """Maximum over trials of ||S^{-1} D_block||_inf with S = sum_i D_i M_i.

    ``weights`` has shape ``(trials, k+1, n)``.  Returns
    ``(best, best_trial, n_singular, first_singular)``.
    """
    cdef int K = blocks.shape[0], n = blocks.shape[1]
    cdef Py_ssize_t T = weights.shape[0], t
    cdef cnp.ndarray[cnp.float64_t, ndim=1] work = np.empty(n * n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] colb = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rowsum = np.empty(n)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] perm = np.empty(n, dtype=np.int32)
    cdef double* a = &work[0]
    cdef double* col = &colb[0]
    cdef double* rs = &rowsum[0]
    cdef int* pp = <int*>&perm[0]
    cdef long long n_sing = 0, f_sing = -1, best_t = -1
    cdef int s, c, i
    cdef double d, mp, anorm, v, w, best = -1.0, val
    with nogil:
        for t in range(T):
            for s in range(n):
                for c in range(n):
                    v = 0.0
                    for i in range(K):
                        v += weights[t, i, s] * blocks[i, s, c]
                    a[s * n + c] = v
            anorm = _norm_inf(a, n)
            _lu(a, n, pp, &d, &mp)
            if mp < pivot_rtol * anorm or mp == 0.0:
                n_sing += 1
                if f_sing < 0:
                    f_sing = t
                continue
            for s in range(n):
                rs[s] = 0.0
            for c in range(n):
                w = weights[t, block, c]
                if w == 0.0:
                    continue
                for s in range(n):
                    col[s] = 0.0
                col[c] = 1.0
                _lu_solve(a, n, pp, col)
                for s in range(n):
                    rs[s] += fabs(col[s]) * w
            val = 0.0
            for s in range(n):
                if rs[s] > val:
                    val = rs[s]
            if val > best:
                best = val
                best_t = t
    return (best if best_t >= 0 else 0.0), best_t, n_sing, f_sing
