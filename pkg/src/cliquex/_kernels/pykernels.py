"""Pure numpy implementations of the hot kernels.

Same signatures and semantics as the compiled module ``_ckernels``; selected
as a fallback when the extension is not built. All routines are deterministic
functions of their inputs.
"""

from __future__ import annotations

import numpy as np

_SNAP_EPS = 1e-12
_LAM_MIN = 1e-12
_LAM_MAX = 1e12


def lazy_push_step(indptr, indices, pverts, pmass):
    """One lazy-walk push: each vertex u sends p(u)/(deg(u)+1) to itself and
    to every neighbor. Returns (vertices, masses) with vertices sorted
    ascending and masses > 0. Work is proportional to the support and its
    incident edges, never to the full vertex count.
    """
    pverts = np.asarray(pverts, dtype=np.int64)
    pmass = np.asarray(pmass, dtype=np.float64)
    if len(pverts) == 0:
        return pverts.copy(), pmass.copy()
    counts = (indptr[pverts + 1] - indptr[pverts]).astype(np.int64)
    share = pmass / (counts + 1.0)
    total = int(counts.sum())
    if total:
        starts = indptr[pverts]
        offsets = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(counts) - counts, counts)
        nbr_targets = indices[np.repeat(starts, counts) + offsets]
        targets = np.concatenate([pverts, nbr_targets])
        contrib = np.concatenate([share, np.repeat(share, counts)])
    else:
        targets, contrib = pverts, share
    order = np.argsort(targets, kind="stable")
    t = targets[order]
    c = contrib[order]
    seg_starts = np.flatnonzero(np.r_[True, t[1:] != t[:-1]])
    return t[seg_starts].copy(), np.add.reduceat(c, seg_starts)


def _kkt_residual(y, g, lb):
    r = g.copy()
    at_lb = y <= lb
    at_ub = y >= 1.0
    np.minimum(g, 0.0, out=r, where=at_lb)
    np.maximum(g, 0.0, out=r, where=at_ub)
    r[at_lb & at_ub] = 0.0
    return r


def _snap(y, lb):
    y = np.clip(y, lb, 1.0)
    near_lb = y - lb <= _SNAP_EPS
    y[near_lb] = lb[near_lb]
    y[1.0 - y <= _SNAP_EPS] = 1.0
    return y


def box_qp(indptr, indices, deg, alpha, lb, y0, tol=1e-6, max_iter=10000, resync=64):
    """Minimize y'Ly + alpha*sum(y) over lb <= y <= 1 for the graph Laplacian
    L = diag(deg) - A given in CSR form.

    Projected gradient with Barzilai-Borwein trial steps and exact line search
    along each projection-arc segment; monotone in the objective. Returns
    (y, kkt_residual_norm, iterations, objective, converged).
    """
    n = len(deg)
    deg = np.asarray(deg, dtype=np.float64)
    lb = np.asarray(lb, dtype=np.float64)
    if n == 0:
        return np.empty(0), 0.0, 0, 0.0, True

    rows = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))

    def matvec(x):
        if len(indices) == 0:
            return deg * x
        return deg * x - np.bincount(rows, weights=x[indices], minlength=n)

    y = _snap(np.asarray(y0, dtype=np.float64).copy(), lb)
    q = matvec(y)
    g = 2.0 * q + alpha
    fy = float(y @ q) + alpha * float(y.sum())
    pg = float(np.linalg.norm(_kkt_residual(y, g, lb)))
    if pg <= tol:
        return y, pg, 0, fy, True

    lam = 1.0 / max(4.0 * float(deg.max()), 1.0)
    it = 0
    while it < max_iter:
        it += 1
        d = np.clip(y - lam * g, lb, 1.0) - y
        if not np.any(d):
            break  # fixed point of the projection; residual check below decides
        Ld = matvec(d)
        dLd = float(d @ Ld)
        gTd = float(g @ d)
        beta = min(1.0, -gTd / (2.0 * dLd)) if dLd > 0.0 else 1.0
        y += beta * d
        q += beta * Ld
        g += 2.0 * beta * Ld
        fy += beta * gTd + beta * beta * dLd
        if it % resync == 0:
            # counter float drift in the incremental updates
            y = _snap(y, lb)
            q = matvec(y)
            g = 2.0 * q + alpha
            fy = float(y @ q) + alpha * float(y.sum())
        pg = float(np.linalg.norm(_kkt_residual(y, g, lb)))
        if pg <= tol:
            break
        lam = d @ d / (2.0 * dLd) if dLd > 0.0 else _LAM_MAX
        lam = min(max(lam, _LAM_MIN), _LAM_MAX)

    y = _snap(y, lb)
    q = matvec(y)
    g = 2.0 * q + alpha
    fy = float(y @ q) + alpha * float(y.sum())
    pg = float(np.linalg.norm(_kkt_residual(y, g, lb)))
    return y, pg, it, fy, pg <= tol


def sweep_profile(indptr, indices, order, w):
    """Conductance over growing prefixes of ``order``; windowed first local
    minimum.

    Prefix k covers the first k vertices of ``order`` (k = 1 .. n-1). The
    selected k* is the smallest k whose conductance is strictly below every
    one of the w following prefixes; if no such k exists within the scannable
    range the global argmin of the computed profile is returned (found=False).
    The profile stops early if a side of the split runs out of volume.

    Returns (k_star, found, phis) with phis[i] the conductance of prefix i+1.
    """
    n = len(order)
    total_vol = float(len(indices))
    in_set = np.zeros(n, dtype=bool)
    max_k = n - 1
    phis = np.empty(max_k, dtype=np.float64)
    cut = 0.0
    vol = 0.0
    computed = 0

    def extend_to(k):
        nonlocal cut, vol, computed
        while computed < k:
            v = int(order[computed])
            nbrs = indices[indptr[v] : indptr[v + 1]]
            internal = float(np.count_nonzero(in_set[nbrs])) if len(nbrs) else 0.0
            dv = float(len(nbrs))
            cut += dv - 2.0 * internal
            vol += dv
            in_set[v] = True
            side = min(vol, total_vol - vol)
            if side <= 0.0:
                return False  # degenerate split; profile ends here
            phis[computed] = cut / side
            computed += 1
        return True

    found = False
    k_star = 0
    k = 0
    while k + 1 + w <= max_k:
        k += 1
        if not extend_to(k + w):
            break
        phi_k = phis[k - 1]
        if np.all(phis[k : k + w] > phi_k):
            found = True
            k_star = k
            break
    if not found:
        extend_to(max_k)  # complete what is computable for the argmin fallback
        if computed == 0:
            return 0, False, phis[:0]
        k_star = int(np.argmin(phis[:computed])) + 1
    return k_star, found, phis[:computed].copy()
