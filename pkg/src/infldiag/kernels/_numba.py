"""Numba-compiled hot kernels.

Same contracts as ``_numpy``. Compiled lazily with on-disk caching; callers
should pass Fortran-ordered design matrices so column access is contiguous.
"""

import numpy as np
from numba import njit

CONVERGED = 0
MAX_SWEEPS = 1
OBJECTIVE_INCREASED = 2
SUPPORT_CYCLE = 3

PEN_CONVEX = 0
PEN_SCAD = 1
PEN_MCP = 2

_jit = njit(cache=True, nogil=True, fastmath=False)


@_jit
def _update(z, lam, l1w, pen, shape):
    if pen == PEN_CONVEX:
        t = lam * l1w
        if z > t:
            s = z - t
        elif z < -t:
            s = z + t
        else:
            s = 0.0
        return s / (1.0 + lam * (1.0 - l1w))
    az = abs(z)
    if pen == PEN_SCAD:
        if az <= 2.0 * lam:
            t = lam
            den = 1.0
        elif az <= shape * lam:
            t = shape * lam / (shape - 1.0)
            den = 1.0 - 1.0 / (shape - 1.0)
        else:
            return z
    else:  # MCP
        if az <= shape * lam:
            t = lam
            den = 1.0 - 1.0 / shape
        else:
            return z
    if z > t:
        return (z - t) / den
    if z < -t:
        return (z + t) / den
    return 0.0


@_jit
def _sweep(X, r, beta, lam, l1w, pen, shape, n, p, active_only):
    maxd = 0.0
    for j in range(p):
        bj = beta[j]
        if active_only and bj == 0.0:
            continue
        s = 0.0
        for i in range(n):
            s += X[i, j] * r[i]
        z = bj + s / n
        nb = _update(z, lam, l1w, pen, shape)
        d = nb - bj
        if d != 0.0:
            for i in range(n):
                r[i] -= d * X[i, j]
            beta[j] = nb
            ad = abs(d)
            if ad > maxd:
                maxd = ad
    return maxd


@_jit
def _objective(r, beta, n, lam, l1w):
    rs = 0.0
    for i in range(r.shape[0]):
        rs += r[i] * r[i]
    l1 = 0.0
    l2 = 0.0
    for j in range(beta.shape[0]):
        l1 += abs(beta[j])
        l2 += beta[j] * beta[j]
    return rs / (2.0 * n) + lam * (l1w * l1 + 0.5 * (1.0 - l1w) * l2)


@_jit
def _support_fp(beta):
    c = 0
    s1 = 0
    s2 = 0
    for j in range(beta.shape[0]):
        if beta[j] != 0.0:
            c += 1
            s1 += j
            s2 += j * j
    return c * 1000003 ^ s1 * 8191 ^ s2


@_jit
def cd_solve(X, r, beta, lam, l1w, pen, shape, tol, max_sweeps):
    n, p = X.shape
    sweeps = 0
    prev_obj = np.inf
    hist = np.zeros(64, dtype=np.int64)
    hlen = 0
    while sweeps < max_sweeps:
        maxd = _sweep(X, r, beta, lam, l1w, pen, shape, n, p, False)
        sweeps += 1
        if pen == PEN_CONVEX:
            obj = _objective(r, beta, n, lam, l1w)
            if obj > prev_obj + 1e-10 * (1.0 + abs(prev_obj)):
                return sweeps, OBJECTIVE_INCREASED
            prev_obj = obj
        else:
            fp = _support_fp(beta)
            seen = 0
            for t in range(hlen):
                if hist[t] == fp:
                    seen += 1
            if hlen > 8 and seen >= 16:
                return sweeps, SUPPORT_CYCLE
            if hlen == 64:
                for t in range(63):
                    hist[t] = hist[t + 1]
                hlen = 63
            hist[hlen] = fp
            hlen += 1
        if maxd < tol:
            return sweeps, CONVERGED
        while sweeps < max_sweeps:
            maxd = _sweep(X, r, beta, lam, l1w, pen, shape, n, p, True)
            sweeps += 1
            if maxd < tol:
                break
    return sweeps, MAX_SWEEPS


@_jit
def loo_corr(X, y, mean_div_n):
    n, p = X.shape
    sx = np.zeros(p)
    sxx = np.zeros(p)
    sxy = np.zeros(p)
    sy = 0.0
    syy = 0.0
    for i in range(n):
        yi = y[i]
        sy += yi
        syy += yi * yi
        for j in range(p):
            v = X[i, j]
            sx[j] += v
            sxx[j] += v * v
            sxy[j] += v * yi

    rho_full = np.empty(p)
    my = sy / n
    vy = syy - 2.0 * my * sy + n * my * my
    for j in range(p):
        mx = sx[j] / n
        cov = sxy[j] - my * sx[j] - mx * sy + n * mx * my
        vx = sxx[j] - 2.0 * mx * sx[j] + n * mx * mx
        if vx <= 1e-300 or vy <= 1e-300:
            rho_full[j] = np.nan
        else:
            rho_full[j] = cov / np.sqrt(vx * vy)

    rho_loo = np.empty((n, p))
    m = n - 1
    div = float(n) if mean_div_n else float(m)
    for i in range(n):
        yi = y[i]
        lsy = sy - yi
        lmy = lsy / div
        lvy = (syy - yi * yi) - 2.0 * lmy * lsy + m * lmy * lmy
        for j in range(p):
            v = X[i, j]
            lsx = sx[j] - v
            lmx = lsx / div
            cov = (sxy[j] - v * yi) - lmy * lsx - lmx * lsy + m * lmx * lmy
            vx = (sxx[j] - v * v) - 2.0 * lmx * lsx + m * lmx * lmx
            if vx <= 1e-300 or lvy <= 1e-300:
                rho_loo[i, j] = np.nan
            else:
                rho_loo[i, j] = cov / np.sqrt(vx * lvy)
    return rho_full, rho_loo


@_jit
def subset_corr_gap(X, y, subset_idx, i_row):
    p = X.shape[1]
    m = subset_idx.shape[0]
    sy = 0.0
    syy = 0.0
    for t in range(m):
        yi = y[subset_idx[t]]
        sy += yi
        syy += yi * yi
    yi = y[i_row]
    sy1 = sy + yi
    syy1 = syy + yi * yi

    vy0 = syy - sy * sy / m
    vy1 = syy1 - sy1 * sy1 / (m + 1)
    if vy0 <= 1e-300 or vy1 <= 1e-300:
        return np.nan

    total = 0.0
    for j in range(p):
        sx = 0.0
        sxx = 0.0
        sxy = 0.0
        for t in range(m):
            k = subset_idx[t]
            v = X[k, j]
            sx += v
            sxx += v * v
            sxy += v * y[k]
        xv = X[i_row, j]
        sx1 = sx + xv
        sxx1 = sxx + xv * xv
        sxy1 = sxy + xv * yi

        vx0 = sxx - sx * sx / m
        vx1 = sxx1 - sx1 * sx1 / (m + 1)
        if vx0 <= 1e-300 or vx1 <= 1e-300:
            return np.nan
        r0 = (sxy - sx * sy / m) / np.sqrt(vx0 * vy0)
        r1 = (sxy1 - sx1 * sy1 / (m + 1)) / np.sqrt(vx1 * vy1)
        d = r1 - r0
        total += d * d
    return total
