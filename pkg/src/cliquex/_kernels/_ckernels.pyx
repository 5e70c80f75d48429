# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot kernels.

Semantics mirror :mod:`cliquex._kernels.pykernels`; see that module for the
contracts. Only the inner loops differ (typed C loops instead of vectorized
numpy), so results agree with the fallback to floating-point roundoff.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

ctypedef cnp.int64_t i64

DEF SNAP_EPS = 1e-12
DEF LAM_MIN = 1e-12
DEF LAM_MAX = 1e12


def lazy_push_step(const i64[::1] indptr, const i64[::1] indices, pverts_in, pmass_in):
    """One lazy-walk push over the sparse support; see pykernels.lazy_push_step."""
    cdef cnp.ndarray[i64, ndim=1] pverts = np.ascontiguousarray(pverts_in, dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1] pmass = np.ascontiguousarray(pmass_in, dtype=np.float64)
    cdef Py_ssize_t ns = pverts.shape[0]
    if ns == 0:
        return pverts.copy(), pmass.copy()

    cdef Py_ssize_t total = ns, i, j, a, b
    cdef i64 u
    for i in range(ns):
        u = pverts[i]
        total += indptr[u + 1] - indptr[u]

    cdef cnp.ndarray[i64, ndim=1] targets = np.empty(total, dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1] contrib = np.empty(total, dtype=np.float64)
    cdef double share
    cdef Py_ssize_t pos = 0
    for i in range(ns):
        u = pverts[i]
        a = indptr[u]
        b = indptr[u + 1]
        share = pmass[i] / <double>(b - a + 1)
        targets[pos] = u
        contrib[pos] = share
        pos += 1
        for j in range(a, b):
            targets[pos] = indices[j]
            contrib[pos] = share
            pos += 1

    cdef cnp.ndarray[i64, ndim=1] order = np.argsort(targets, kind="stable")
    cdef cnp.ndarray[i64, ndim=1] out_v = np.empty(total, dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1] out_m = np.empty(total, dtype=np.float64)
    cdef Py_ssize_t nout = 0
    cdef i64 t, prev = -1
    cdef double acc = 0.0
    for i in range(total):
        j = order[i]
        t = targets[j]
        if t != prev:
            if prev >= 0:
                out_v[nout] = prev
                out_m[nout] = acc
                nout += 1
            prev = t
            acc = contrib[j]
        else:
            acc += contrib[j]
    out_v[nout] = prev
    out_m[nout] = acc
    nout += 1
    return out_v[:nout].copy(), out_m[:nout].copy()


cdef void _matvec(const i64[::1] indptr, const i64[::1] indices,
                  const double[::1] deg, const double[::1] x, double[::1] out) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double s
    for i in range(deg.shape[0]):
        s = 0.0
        for j in range(indptr[i], indptr[i + 1]):
            s += x[indices[j]]
        out[i] = deg[i] * x[i] - s


cdef double _kkt_residual_norm(const double[::1] y, const double[::1] g,
                               const double[::1] lb) noexcept nogil:
    cdef Py_ssize_t i
    cdef double r, acc = 0.0
    for i in range(y.shape[0]):
        if y[i] <= lb[i] and y[i] >= 1.0:
            r = 0.0
        elif y[i] <= lb[i]:
            r = g[i] if g[i] < 0.0 else 0.0
        elif y[i] >= 1.0:
            r = g[i] if g[i] > 0.0 else 0.0
        else:
            r = g[i]
        acc += r * r
    return sqrt(acc)


cdef void _snap(double[::1] y, const double[::1] lb) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(y.shape[0]):
        if y[i] < lb[i]:
            y[i] = lb[i]
        elif y[i] > 1.0:
            y[i] = 1.0
        if y[i] - lb[i] <= SNAP_EPS:
            y[i] = lb[i]
        if 1.0 - y[i] <= SNAP_EPS:
            y[i] = 1.0


def box_qp(const i64[::1] indptr, const i64[::1] indices, deg_in, double alpha,
           lb_in, y0_in, double tol=1e-6, long max_iter=10000, long resync=64):
    """Box-constrained Laplacian QP by projected BB gradient; see pykernels.box_qp."""
    cdef cnp.ndarray[double, ndim=1] deg_a = np.ascontiguousarray(deg_in, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] lb_a = np.ascontiguousarray(lb_in, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] y_a = np.array(y0_in, dtype=np.float64, copy=True)
    cdef Py_ssize_t n = deg_a.shape[0]
    if n == 0:
        return np.empty(0), 0.0, 0, 0.0, True

    cdef cnp.ndarray[double, ndim=1] q_a = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] g_a = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] d_a = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] ld_a = np.empty(n, dtype=np.float64)
    cdef double[::1] deg = deg_a, lb = lb_a, y = y_a, q = q_a, g = g_a, d = d_a, ld = ld_a

    cdef Py_ssize_t i
    cdef long it = 0
    cdef double fy, pg, lam, dLd, gTd, beta, dTd, trial, maxdeg = 0.0
    cdef bint moved

    with nogil:
        _snap(y, lb)
        _matvec(indptr, indices, deg, y, q)
        fy = 0.0
        for i in range(n):
            g[i] = 2.0 * q[i] + alpha
            fy += y[i] * q[i] + alpha * y[i]
            if deg[i] > maxdeg:
                maxdeg = deg[i]
        pg = _kkt_residual_norm(y, g, lb)

    if pg <= tol:
        return y_a, pg, 0, fy, True

    lam = 1.0 / (4.0 * maxdeg if 4.0 * maxdeg > 1.0 else 1.0)
    with nogil:
        while it < max_iter:
            it += 1
            moved = False
            for i in range(n):
                trial = y[i] - lam * g[i]
                if trial < lb[i]:
                    trial = lb[i]
                elif trial > 1.0:
                    trial = 1.0
                d[i] = trial - y[i]
                if d[i] != 0.0:
                    moved = True
            if not moved:
                break
            _matvec(indptr, indices, deg, d, ld)
            dLd = 0.0
            gTd = 0.0
            dTd = 0.0
            for i in range(n):
                dLd += d[i] * ld[i]
                gTd += g[i] * d[i]
                dTd += d[i] * d[i]
            if dLd > 0.0:
                beta = -gTd / (2.0 * dLd)
                if beta > 1.0:
                    beta = 1.0
            else:
                beta = 1.0
            for i in range(n):
                y[i] += beta * d[i]
                q[i] += beta * ld[i]
                g[i] += 2.0 * beta * ld[i]
            fy += beta * gTd + beta * beta * dLd
            if it % resync == 0:
                _snap(y, lb)
                _matvec(indptr, indices, deg, y, q)
                fy = 0.0
                for i in range(n):
                    g[i] = 2.0 * q[i] + alpha
                    fy += y[i] * q[i] + alpha * y[i]
            pg = _kkt_residual_norm(y, g, lb)
            if pg <= tol:
                break
            if dLd > 0.0:
                lam = dTd / (2.0 * dLd)
            else:
                lam = LAM_MAX
            if lam < LAM_MIN:
                lam = LAM_MIN
            elif lam > LAM_MAX:
                lam = LAM_MAX

        _snap(y, lb)
        _matvec(indptr, indices, deg, y, q)
        fy = 0.0
        for i in range(n):
            g[i] = 2.0 * q[i] + alpha
            fy += y[i] * q[i] + alpha * y[i]
        pg = _kkt_residual_norm(y, g, lb)

    return y_a, pg, it, fy, pg <= tol


def sweep_profile(const i64[::1] indptr, const i64[::1] indices, order_in, long w):
    """Windowed first-local-minimum conductance sweep; see pykernels.sweep_profile."""
    cdef cnp.ndarray[i64, ndim=1] order = np.ascontiguousarray(order_in, dtype=np.int64)
    cdef Py_ssize_t n = order.shape[0]
    cdef Py_ssize_t max_k = n - 1
    cdef double total_vol = <double>indices.shape[0]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] in_set = np.zeros(n, dtype=np.uint8)
    cdef cnp.ndarray[double, ndim=1] phis = np.empty(max_k if max_k > 0 else 0, dtype=np.float64)
    cdef double cut = 0.0, vol = 0.0, side, dv, internal, phi_k
    cdef Py_ssize_t computed = 0, k = 0, i, j
    cdef i64 v
    cdef bint found = False, ok_window, truncated = False
    cdef Py_ssize_t k_star = 0

    # extend the incremental profile up to prefix length `target`
    cdef Py_ssize_t target

    while k + 1 + w <= max_k and not truncated:
        k += 1
        target = k + w
        while computed < target and not truncated:
            v = order[computed]
            internal = 0.0
            dv = <double>(indptr[v + 1] - indptr[v])
            for j in range(indptr[v], indptr[v + 1]):
                if in_set[indices[j]]:
                    internal += 1.0
            cut += dv - 2.0 * internal
            vol += dv
            in_set[v] = 1
            side = vol if vol < total_vol - vol else total_vol - vol
            if side <= 0.0:
                truncated = True
                break
            phis[computed] = cut / side
            computed += 1
        if truncated:
            break
        phi_k = phis[k - 1]
        ok_window = True
        for i in range(k, k + w):
            if not phis[i] > phi_k:
                ok_window = False
                break
        if ok_window:
            found = True
            k_star = k
            break

    if not found:
        while computed < max_k and not truncated:
            v = order[computed]
            internal = 0.0
            dv = <double>(indptr[v + 1] - indptr[v])
            for j in range(indptr[v], indptr[v + 1]):
                if in_set[indices[j]]:
                    internal += 1.0
            cut += dv - 2.0 * internal
            vol += dv
            in_set[v] = 1
            side = vol if vol < total_vol - vol else total_vol - vol
            if side <= 0.0:
                truncated = True
                break
            phis[computed] = cut / side
            computed += 1
        if computed == 0:
            return 0, False, phis[:0]
        k_star = 1
        for i in range(1, computed):
            if phis[i] < phis[k_star - 1]:
                k_star = i + 1
    return k_star, found, phis[:computed].copy()
