"""Pure-numpy fallback kernels.

Same contracts as ``_numba``; selected when INFLDIAG_DISABLE_NUMBA=1 or when
numba is unavailable. Coordinate descent is inherently sequential across
coordinates, so the fallback keeps the coordinate loop in Python and leans on
numpy dot products for the O(n) inner work.
"""

import numpy as np

# cd_solve status codes
CONVERGED = 0
MAX_SWEEPS = 1
OBJECTIVE_INCREASED = 2
SUPPORT_CYCLE = 3

# penalty codes
PEN_CONVEX = 0
PEN_SCAD = 1
PEN_MCP = 2


def _soft(z, t):
    if z > t:
        return z - t
    if z < -t:
        return z + t
    return 0.0


def _update(z, lam, l1w, pen, shape):
    # Unit-variance coordinate update for each penalty.
    if pen == PEN_CONVEX:
        return _soft(z, lam * l1w) / (1.0 + lam * (1.0 - l1w))
    if pen == PEN_SCAD:
        az = abs(z)
        if az <= 2.0 * lam:
            return _soft(z, lam)
        if az <= shape * lam:
            return _soft(z, shape * lam / (shape - 1.0)) / (1.0 - 1.0 / (shape - 1.0))
        return z
    az = abs(z)  # MCP
    if az <= shape * lam:
        return _soft(z, lam) / (1.0 - 1.0 / shape)
    return z


def _objective(r, beta, n, lam, l1w):
    return (r @ r) / (2.0 * n) + lam * (
        l1w * np.abs(beta).sum() + 0.5 * (1.0 - l1w) * (beta @ beta)
    )


def _support_fp(beta):
    nz = np.nonzero(beta)[0]
    return (nz.size, int(nz.sum()), int((nz * nz).sum()))


def _one_sweep(X, r, beta, lam, l1w, pen, shape, n, p, active_only):
    maxd = 0.0
    for j in range(p):
        bj = beta[j]
        if active_only and bj == 0.0:
            continue
        z = bj + (X[:, j] @ r) / n
        nb = _update(z, lam, l1w, pen, shape)
        d = nb - bj
        if d != 0.0:
            r -= d * X[:, j]
            beta[j] = nb
            ad = abs(d)
            if ad > maxd:
                maxd = ad
    return maxd


def cd_solve(X, r, beta, lam, l1w, pen, shape, tol, max_sweeps):
    """Cyclic coordinate descent on unit-variance centered columns.

    Mutates ``r`` (residual) and ``beta`` in place. Returns
    (sweeps_used, status). Full sweeps alternate with active-set sweeps;
    convergence is max absolute coefficient change < tol on a full sweep.
    """
    n, p = X.shape
    sweeps = 0
    prev_obj = np.inf
    fp_hist = []

    while sweeps < max_sweeps:
        maxd = _one_sweep(X, r, beta, lam, l1w, pen, shape, n, p, False)
        sweeps += 1
        if pen == PEN_CONVEX:
            obj = _objective(r, beta, n, lam, l1w)
            if obj > prev_obj + 1e-10 * (1.0 + abs(prev_obj)):
                return sweeps, OBJECTIVE_INCREASED
            prev_obj = obj
        else:
            fp = _support_fp(beta)
            fp_hist.append(fp)
            if len(fp_hist) > 8 and fp_hist[:-1].count(fp) >= 16:
                return sweeps, SUPPORT_CYCLE
            fp_hist = fp_hist[-64:]
        if maxd < tol:
            return sweeps, CONVERGED
        while sweeps < max_sweeps:
            maxd = _one_sweep(X, r, beta, lam, l1w, pen, shape, n, p, True)
            sweeps += 1
            if maxd < tol:
                break
    return sweeps, MAX_SWEEPS


def loo_corr(X, y, mean_div_n):
    """Full-data and all leave-one-out marginal correlations.

    Returns (rho_full (p,), rho_loo (n, p)). With ``mean_div_n`` the
    leave-one-out means divide the (n-1)-term sums by n instead of n-1;
    the variance terms always use the actual centered sums, and the common
    divisors cancel in the correlation ratio. Degenerate variances yield NaN.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = y.shape[0]

    sx = X.sum(axis=0)
    sy = y.sum()
    sxx = (X * X).sum(axis=0)
    syy = y @ y
    sxy = X.T @ y

    def corr_from(sx_, sy_, sxx_, syy_, sxy_, m, div):
        mx = sx_ / div
        my = sy_ / div
        cov = sxy_ - my * sx_ - mx * sy_ + m * mx * my
        vx = sxx_ - 2.0 * mx * sx_ + m * mx * mx
        vy = syy_ - 2.0 * my * sy_ + m * my * my
        with np.errstate(invalid="ignore", divide="ignore"):
            out = cov / np.sqrt(vx * vy)
        bad = (vx <= 1e-300) | (vy <= 1e-300)
        if np.ndim(out):
            out[bad] = np.nan
        elif bad:
            out = np.nan
        return out

    rho_full = corr_from(sx, sy, sxx, syy, sxy, n, float(n))

    lsx = sx[None, :] - X                      # (n, p)
    lsy = sy - y                               # (n,)
    lsxx = sxx[None, :] - X * X
    lsyy = syy - y * y
    lsxy = sxy[None, :] - X * y[:, None]
    m = n - 1
    div = float(n) if mean_div_n else float(m)
    mx = lsx / div
    my = (lsy / div)[:, None]
    cov = lsxy - my * lsx - mx * lsy[:, None] + m * mx * my
    vx = lsxx - 2.0 * mx * lsx + m * mx * mx
    vy = (lsyy - 2.0 * (lsy / div) * lsy + m * (lsy / div) ** 2)[:, None]
    with np.errstate(invalid="ignore", divide="ignore"):
        rho_loo = cov / np.sqrt(vx * vy)
    rho_loo[(vx <= 1e-300) | np.broadcast_to(vy <= 1e-300, vx.shape)] = np.nan
    return rho_full, rho_loo


def subset_corr_gap(X, y, subset_idx, i_row):
    """Sum over predictors of the squared change in marginal correlation when
    row ``i_row`` is appended to the rows in ``subset_idx`` (0-based).
    Returns NaN when either correlation is degenerate for any predictor."""
    Xs = X[subset_idx, :]
    ys = y[subset_idx]
    m = subset_idx.shape[0]

    sx = Xs.sum(axis=0)
    sy = ys.sum()
    sxx = (Xs * Xs).sum(axis=0)
    syy = ys @ ys
    sxy = Xs.T @ ys

    def corr(sx_, sy_, sxx_, syy_, sxy_, mm):
        cov = sxy_ - sx_ * sy_ / mm
        vx = sxx_ - sx_ * sx_ / mm
        vy = syy_ - sy_ * sy_ / mm
        if vy <= 1e-300:
            return np.full_like(sx_, np.nan)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = cov / np.sqrt(vx * vy)
        out[vx <= 1e-300] = np.nan
        return out

    r0 = corr(sx, sy, sxx, syy, sxy, float(m))
    xi = X[i_row, :]
    yi = y[i_row]
    r1 = corr(sx + xi, sy + yi, sxx + xi * xi, syy + yi * yi, sxy + xi * yi, float(m + 1))
    d = r1 - r0
    return float(d @ d)
