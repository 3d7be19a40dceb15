"""Sparse penalized regression: LASSO, elastic net, SCAD, MCP, scaled LASSO.

All solvers are cyclic coordinate descent on column-standardized predictors
(population scale) with an unpenalized intercept; coefficients are mapped
back to the original predictor scale on return. Fits are pure functions of
(data, spec, seed): the only randomness anywhere is the cross-validation fold
assignment, which is derived from a content hash of the row ids so results
cannot depend on row order.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .data import Dataset, canonical_order, content_seed, standardize_columns
from .errors import ConvergenceError, DegenerateNoiseError, InvalidSpecError

PENALTIES = ("lasso", "scaled_lasso", "elastic_net", "scad", "mcp")

SELECTOR_IDS = {
    "lasso": "lasso",
    "scaled_lasso": "slasso",
    "elastic_net": "enet",
    "scad": "scad",
    "mcp": "mcp",
}

CD_TOL = 1e-7
CD_MAX_SWEEPS = 10_000


@dataclass(frozen=True)
class SelectorSpec:
    """Which penalty to fit and how to tune it."""

    penalty: str = "lasso"
    scad_a: float = 3.7
    mcp_gamma: float = 3.0
    mixing_grid: tuple = (0.2, 0.4, 0.6, 0.8, 1.0)
    lambda_grid: tuple = None  # None -> auto log-spaced grid
    n_lambdas: int = 100
    lambda_min_ratio: float = None  # None -> 0.001, or 0.05 when p > n
    cv_folds: int = 10
    cv_rule: str = "min"  # "min" or "1se"
    seed: int = 0
    lambda0: float = None  # scaled lasso; None -> sqrt(2 log p / n)

    def __post_init__(self):
        if self.penalty not in PENALTIES:
            raise InvalidSpecError(f"unknown penalty {self.penalty!r}")
        if self.scad_a <= 2.0:
            raise InvalidSpecError("SCAD shape parameter must be > 2")
        if self.mcp_gamma <= 1.0:
            raise InvalidSpecError("MCP shape parameter must be > 1")
        if any(not 0.0 < w <= 1.0 for w in self.mixing_grid):
            raise InvalidSpecError("elastic-net mixing weights must lie in (0, 1]")
        if self.lambda_grid is not None:
            g = tuple(float(v) for v in self.lambda_grid)
            if any(v <= 0.0 for v in g) or any(
                g[k + 1] >= g[k] for k in range(len(g) - 1)
            ):
                raise InvalidSpecError("explicit lambda grid must be positive and strictly decreasing")
            object.__setattr__(self, "lambda_grid", g)
        if self.cv_folds < 2:
            raise InvalidSpecError("cv_folds must be at least 2")
        if self.cv_rule not in ("min", "1se"):
            raise InvalidSpecError("cv_rule must be 'min' or '1se'")
        if self.lambda0 is not None and self.lambda0 <= 0.0:
            raise InvalidSpecError("scaled-lasso lambda0 must be positive")

    @property
    def selector_id(self):
        return SELECTOR_IDS[self.penalty]


@dataclass(frozen=True)
class SparseFit:
    """A fitted sparse linear model on the original predictor scale."""

    beta: np.ndarray
    intercept: float
    support: tuple
    lambda_: float
    selector_id: str
    mixing: float = None
    sigma_hat: float = None
    lambda0: float = None  # scaled lasso only
    n_sweeps: int = 0

    def __post_init__(self):
        beta = np.asarray(self.beta, dtype=np.float64)
        beta.flags.writeable = False
        object.__setattr__(self, "beta", beta)
        sup = tuple(int(j) + 1 for j in np.nonzero(beta)[0])
        if tuple(self.support) != sup:
            object.__setattr__(self, "support", sup)
        if self.sigma_hat is not None and not self.sigma_hat > 0:
            raise InvalidSpecError("sigma_hat must be positive when present")

    def predict(self, x):
        return self.intercept + np.asarray(x) @ self.beta


def soft_threshold(z, t):
    """sign(z) * max(|z| - t, 0)."""
    if t < 0:
        raise InvalidSpecError("threshold must be nonnegative")
    if z > t:
        return z - t
    if z < -t:
        return z + t
    return 0.0


def support(fit: SparseFit):
    """Indices (1-based) of exactly-nonzero coefficients."""
    return set(fit.support)


# ---------------------------------------------------------------------------
# standardized-problem plumbing
# ---------------------------------------------------------------------------

def _problem(data: Dataset):
    ds, info = standardize_columns(data)
    xf = np.asfortranarray(ds.x)
    ybar = float(data.y.mean())
    yc = data.y - ybar
    return xf, yc, ybar, info


def lambda_max_value(xf, yc):
    n = yc.shape[0]
    return float(np.max(np.abs(yc @ xf)) / n)


def auto_lambda_grid(xf, yc, spec: SelectorSpec):
    if spec.lambda_grid is not None:
        return np.asarray(spec.lambda_grid, dtype=np.float64)
    n, p = xf.shape
    lam_max = max(lambda_max_value(xf, yc), 1e-12)
    ratio = spec.lambda_min_ratio
    if ratio is None:
        ratio = 0.05 if p > n else 0.001
    return np.geomspace(lam_max, lam_max * ratio, spec.n_lambdas)


def _cd(xf, yc, lam, l1w, pen, shape, beta0=None, tol=CD_TOL, max_sweeps=CD_MAX_SWEEPS):
    if beta0 is None:
        beta = np.zeros(xf.shape[1])
        r = yc.copy()
    else:
        beta = beta0.copy()
        r = yc - xf @ beta
    sweeps, status = kernels.cd_solve(
        xf, r, beta, float(lam), float(l1w), pen, float(shape), tol, max_sweeps
    )
    if status == kernels.MAX_SWEEPS:
        raise ConvergenceError(
            f"coordinate descent did not converge in {max_sweeps} sweeps (lam={lam:g})",
            last_iterate=beta,
        )
    if status == kernels.OBJECTIVE_INCREASED:
        raise ConvergenceError(
            f"objective increased during a convex sweep (lam={lam:g})", last_iterate=beta
        )
    if status == kernels.SUPPORT_CYCLE:
        raise ConvergenceError(
            f"support cycling detected for nonconvex penalty (lam={lam:g})",
            last_iterate=beta,
        )
    return beta, r, sweeps


def _finish(beta_std, ybar, info, lam, selector_id, mixing=None, sigma_hat=None,
            lambda0=None, sweeps=0):
    beta, intercept = info.to_original(beta_std, ybar)
    beta = np.where(beta_std == 0.0, 0.0, beta)  # keep hard zeros exact
    return SparseFit(
        beta=beta,
        intercept=intercept,
        support=tuple(int(j) + 1 for j in np.nonzero(beta)[0]),
        lambda_=float(lam),
        selector_id=selector_id,
        mixing=mixing,
        sigma_hat=sigma_hat,
        lambda0=lambda0,
        n_sweeps=sweeps,
    )


def lasso_kkt_gaps(data: Dataset, fit: SparseFit):
    """KKT residuals of a lasso fit on the standardized scale.

    Returns (max excess of |gradient| over lambda off the support,
    max |gradient - lambda * sign(beta)| on the support).
    """
    xf, yc, _, info = _problem(data)
    beta_std = fit.beta * info.column_scales
    r = yc - xf @ beta_std
    g = (r @ xf) / data.n
    lam = fit.lambda_ if fit.mixing is None else fit.lambda_ * fit.mixing
    active = beta_std != 0.0
    inact_gap = float(np.max(np.abs(g[~active]) - lam)) if (~active).any() else -np.inf
    act_gap = (
        float(np.max(np.abs(g[active] - lam * np.sign(beta_std[active]))))
        if active.any()
        else 0.0
    )
    return inact_gap, act_gap


# ---------------------------------------------------------------------------
# single-penalty fits
# ---------------------------------------------------------------------------

def lasso_fit(data: Dataset, lam, beta0=None) -> SparseFit:
    """L1-penalized least squares at a fixed penalty level.

    Minimizes (1/2n)||y - b0 - X beta||^2 + lam * ||beta||_1 on standardized
    predictors. The returned fit satisfies the KKT conditions to
    (1e-8 off-support, 1e-6 on-support); the solver re-runs with a tighter
    sweep tolerance if the first pass does not certify.
    """
    if lam < 0:
        raise InvalidSpecError("lambda must be nonnegative")
    xf, yc, ybar, info = _problem(data)
    tol = CD_TOL
    for _ in range(3):
        beta_std, _, sweeps = _cd(xf, yc, lam, 1.0, kernels.PEN_CONVEX, 0.0, beta0=beta0, tol=tol)
        fit = _finish(beta_std, ybar, info, lam, "lasso", sweeps=sweeps)
        inact, act = lasso_kkt_gaps(data, fit)
        if inact <= 1e-8 and act <= 1e-6:
            return fit
        beta0, tol = beta_std, tol / 100.0
    raise ConvergenceError(
        f"KKT certificate not met (off-support gap {inact:g}, on-support gap {act:g})",
        last_iterate=beta_std,
    )


def elastic_net_fit(data: Dataset, lam, mixing) -> SparseFit:
    """Elastic net: lam * [mixing * ||b||_1 + (1-mixing)/2 * ||b||_2^2].

    ``mixing=1`` runs the identical code path as :func:`lasso_fit`.
    """
    if not 0.0 < mixing <= 1.0:
        raise InvalidSpecError("mixing must lie in (0, 1]")
    if lam < 0:
        raise InvalidSpecError("lambda must be nonnegative")
    if mixing == 1.0:
        return lasso_fit(data, lam)
    xf, yc, ybar, info = _problem(data)
    beta_std, _, sweeps = _cd(xf, yc, lam, mixing, kernels.PEN_CONVEX, 0.0)
    return _finish(beta_std, ybar, info, lam, "enet", mixing=float(mixing), sweeps=sweeps)


def nonconvex_fit(data: Dataset, lam, spec: SelectorSpec) -> SparseFit:
    """SCAD or MCP fit at a fixed penalty level.

    Uses the univariate SCAD / firm-thresholding rules on unit-variance
    coordinates, warm-started down a short geometric path from lambda_max for
    a stable local solution.
    """
    if spec.penalty not in ("scad", "mcp"):
        raise InvalidSpecError(f"nonconvex_fit got penalty {spec.penalty!r}")
    if lam < 0:
        raise InvalidSpecError("lambda must be nonnegative")
    pen = kernels.PEN_SCAD if spec.penalty == "scad" else kernels.PEN_MCP
    shape = spec.scad_a if spec.penalty == "scad" else spec.mcp_gamma
    xf, yc, ybar, info = _problem(data)
    lam_max = max(lambda_max_value(xf, yc), 1e-12)
    beta = None
    sweeps = 0
    if lam < lam_max:
        for step_lam in np.geomspace(lam_max, lam, 20):
            beta, _, s = _cd(xf, yc, step_lam, 1.0, pen, shape, beta0=beta)
            sweeps += s
    else:
        beta, _, sweeps = _cd(xf, yc, lam, 1.0, pen, shape)
    return _finish(beta, ybar, info, lam, spec.selector_id, sweeps=sweeps)


def universal_lambda0(n, p):
    return math.sqrt(2.0 * math.log(p) / n)


def diagnostic_lambda0(n, p):
    """Scaled-lasso penalty level for influence diagnostics.

    The universal level sqrt(2 log p / n) is tuned for estimation and keeps
    the selected support so stable that deleting even a gross outlier often
    changes nothing, starving a support-change diagnostic of signal. Dropping
    the safety factor sqrt(2) puts the penalty where the support responds to
    the noise-scale shift an influential row causes, while staying well clear
    of the interpolation regime.
    """
    return math.sqrt(math.log(p) / n)


def _scaled_fit_std(xf, yc, lambda0, l1w=1.0, pen=kernels.PEN_CONVEX, shape=0.0,
                    sigma0=None, beta0=None, max_alternations=100,
                    raise_on_max=True, cd_max_sweeps=CD_MAX_SWEEPS):
    """Noise-adaptive alternation on the standardized problem.

    Alternates a penalized fit at lam = sigma * lambda0 with the stationary
    noise update sigma = ||r||_2 / sqrt(n); for the l1 penalty this descends
    the jointly convex scaled-lasso objective
    ||yc - X b||^2 / (2 n s) + s/2 + lambda0 ||b||_1. Stops when sigma is
    stable to 1e-6 relative. (That objective is nearly flat along the sigma
    valley, so an objective-based stop would quit while sigma is still far
    from its fixed point.) Returns (beta_std, sigma, sweeps).
    """
    n = yc.shape[0]
    sigma = float(np.linalg.norm(yc) / math.sqrt(n)) if sigma0 is None else float(sigma0)
    if sigma < 1e-10:
        raise DegenerateNoiseError("response has (numerically) zero variance")
    beta = beta0
    sweeps = 0
    prev_sigma = None
    hist = []
    for _t in range(max_alternations):
        beta, r, s = _cd(xf, yc, sigma * lambda0, l1w, pen, shape,
                         beta0=beta, max_sweeps=cd_max_sweeps)
        sweeps += s
        new_sigma = float(np.linalg.norm(r) / math.sqrt(n))
        if new_sigma < 1e-10:
            raise DegenerateNoiseError(
                f"noise estimate collapsed to {new_sigma:g}; response is interpolated"
            )
        if abs(new_sigma - sigma) < 1e-6 * sigma:
            return beta, new_sigma, sweeps
        if prev_sigma is not None and abs(new_sigma - prev_sigma) < 1e-9 * new_sigma:
            # the noise map has no fixed point here (a support flips exactly
            # at this penalty level, which nonconvex rules make possible):
            # settle deterministically on the cycle's smaller-penalty branch
            lo = min(sigma, new_sigma)
            beta, _, s = _cd(xf, yc, lo * lambda0, l1w, pen, shape,
                             beta0=beta, max_sweeps=cd_max_sweeps)
            sweeps += s
            return beta, lo, sweeps
        prev_sigma = sigma
        sigma = new_sigma
        # Aitken extrapolation: the noise map contracts geometrically, and
        # slow contractions would otherwise exhaust the alternation budget
        hist.append(new_sigma)
        if len(hist) >= 3:
            d2 = hist[-1] - hist[-2]
            d1 = hist[-2] - hist[-3]
            den = d2 - d1
            if den != 0.0:
                extr = hist[-1] - d2 * d2 / den
                if np.isfinite(extr) and extr > 1e-10 and abs(extr - hist[-1]) < 0.5 * hist[-1]:
                    sigma = float(extr)
                    hist.clear()
    if raise_on_max:
        raise ConvergenceError(
            f"scaled fit did not stabilize in {max_alternations} alternations",
            last_iterate=beta,
        )
    return beta, sigma, sweeps


def scaled_lasso_fit(
    data: Dataset,
    lambda0=None,
    sigma0=None,
    max_alternations=100,
    raise_on_max=True,
) -> SparseFit:
    """Joint coefficient and noise-scale estimation.

    Alternates a lasso step at lam = sigma_hat * lambda0 with the residual
    update sigma_hat = ||y - X beta||_2 / sqrt(n) until sigma_hat is stable
    to 1e-6 relative. Default lambda0 is the universal penalty
    sqrt(2 log p / n).
    """
    if lambda0 is None:
        lambda0 = universal_lambda0(data.n, data.p)
    if lambda0 <= 0:
        raise InvalidSpecError("lambda0 must be positive")
    xf, yc, ybar, info = _problem(data)
    beta, sigma, sweeps = _scaled_fit_std(
        xf, yc, lambda0, sigma0=sigma0, max_alternations=max_alternations,
        raise_on_max=raise_on_max,
    )
    return _finish(
        beta, ybar, info, sigma * lambda0, "slasso", sigma_hat=sigma,
        lambda0=float(lambda0), sweeps=sweeps,
    )


def scaled_penalty_fit(data: Dataset, lambda0, spec: SelectorSpec) -> SparseFit:
    """Noise-adaptive fit for any penalty family.

    The noise scale is estimated by the scaled-lasso alternation (jointly
    convex, guaranteed to settle); the family's own thresholding rule
    (elastic net / SCAD / MCP) is then applied once at lam = sigma_hat *
    lambda0, warm-started from the lasso solution. Iterating the noise
    update under a nonconvex rule instead can spiral (the support growth
    feeds back into the penalty level), so the noise estimate is plugged in.
    This is the refit rule behind the influence diagnostics.
    """
    if lambda0 <= 0:
        raise InvalidSpecError("lambda0 must be positive")
    if spec.penalty in ("lasso", "scaled_lasso"):
        return scaled_lasso_fit(data, lambda0=lambda0)
    xf, yc, ybar, info = _problem(data)
    beta_l1, sigma, sweeps = _scaled_fit_std(xf, yc, lambda0)
    if spec.penalty == "elastic_net":
        l1w, pen, shape = 0.5, kernels.PEN_CONVEX, 0.0
    elif spec.penalty == "scad":
        l1w, pen, shape = 1.0, kernels.PEN_SCAD, spec.scad_a
    else:
        l1w, pen, shape = 1.0, kernels.PEN_MCP, spec.mcp_gamma
    beta, _, s = _cd(xf, yc, sigma * lambda0, l1w, pen, shape, beta0=beta_l1)
    return _finish(
        beta, ybar, info, sigma * lambda0, spec.selector_id, sigma_hat=sigma,
        mixing=l1w if spec.penalty == "elastic_net" else None,
        lambda0=float(lambda0), sweeps=sweeps + s,
    )


# ---------------------------------------------------------------------------
# cross-validated selection
# ---------------------------------------------------------------------------

def cv_fold_ids(n, folds, seed):
    """Deterministic fold labels: a seeded permutation dealt round-robin."""
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    fold_of = np.empty(n, dtype=np.int64)
    fold_of[perm] = np.arange(n) % folds
    return fold_of


def _path(xf, yc, grid, l1w, pen, shape, truncate_on_error=False):
    """Warm-started coefficient path down a descending penalty grid.

    Returns (betas, n_valid). With ``truncate_on_error`` a non-converging
    grid value stops the path there (nonconvex fits can start cycling once
    the penalty gets small); callers treat the truncated tail as unusable.
    """
    p = xf.shape[1]
    betas = np.zeros((grid.shape[0], p))
    beta = np.zeros(p)
    for k, lam in enumerate(grid):
        try:
            beta, _, _ = _cd(xf, yc, lam, l1w, pen, shape, beta0=beta)
        except ConvergenceError:
            if truncate_on_error and pen != kernels.PEN_CONVEX:
                return betas, k
            raise
        betas[k] = beta
    return betas, grid.shape[0]


def _cv_curve(data, grid, l1w, pen, shape, fold_of, folds):
    """Held-out squared error per grid value: (pooled mean, SE of the mean).

    The SE is the spread of the per-fold mean errors over sqrt(folds), the
    usual yardstick for the one-standard-error rule.
    """
    n = data.n
    sqerr = np.zeros(grid.shape[0])
    fold_means = np.zeros((folds, grid.shape[0]))
    for f in range(folds):
        ho = fold_of == f
        tr = ~ho
        train = Dataset(y=data.y[tr], x=data.x[tr, :], row_ids=data.row_ids[tr])
        xf, yc, ybar, info = _problem(train)
        betas_std, n_valid = _path(xf, yc, grid, l1w, pen, shape, truncate_on_error=True)
        # map back and score the held-out block for every lambda
        betas = betas_std / info.column_scales[None, :]
        icpts = ybar - betas @ info.column_means
        preds = data.x[ho, :] @ betas.T + icpts[None, :]
        fold_err = ((data.y[ho, None] - preds) ** 2).sum(axis=0)
        if n_valid < grid.shape[0]:
            fold_err[n_valid:] = np.inf  # disqualify the unstable tail
        sqerr += fold_err
        fold_means[f] = fold_err / int(ho.sum())
    se = fold_means.std(axis=0, ddof=1) / math.sqrt(folds) if folds > 1 else np.zeros_like(sqerr)
    with np.errstate(invalid="ignore"):
        se = np.where(np.isfinite(sqerr), se, np.inf)
    return sqerr / n, se


def _pick_lambda(curve, se, rule):
    """Grid index under the CV rule. Index 0 is the most regularized value;
    exact ties go to the smaller index."""
    k_min = int(np.argmin(curve))
    if rule == "min":
        return k_min
    cutoff = curve[k_min] + se[k_min]
    return int(np.nonzero(curve <= cutoff)[0][0])


def cv_select(data: Dataset, spec: SelectorSpec) -> SparseFit:
    """Tuning by 10-fold (by default) cross-validation, then a full refit.

    The penalty grid is computed once from the full data; the minimizing
    grid value wins, with exact ties broken toward the first (most
    regularized) index. The scaled lasso tunes itself (universal lambda0 by
    default) and bypasses the CV grid.
    """
    data, _ = canonical_order(data)
    n = data.n
    if n < spec.cv_folds:
        raise InvalidSpecError(f"n={n} is smaller than cv_folds={spec.cv_folds}")
    if spec.penalty == "scaled_lasso":
        return scaled_lasso_fit(data, lambda0=spec.lambda0)
    xf, yc, _, _ = _problem(data)
    base_grid = auto_lambda_grid(xf, yc, spec)
    fold_of = cv_fold_ids(n, spec.cv_folds, content_seed(spec.seed, data.row_ids, tag=b"cv"))

    if spec.penalty == "lasso":
        curve, se = _cv_curve(data, base_grid, 1.0, kernels.PEN_CONVEX, 0.0, fold_of, spec.cv_folds)
        lam = float(base_grid[_pick_lambda(curve, se, spec.cv_rule)])
        return lasso_fit(data, lam)

    if spec.penalty == "elastic_net":
        best = None
        for mix in spec.mixing_grid:
            grid = base_grid / mix
            curve, se = _cv_curve(data, grid, mix, kernels.PEN_CONVEX, 0.0, fold_of, spec.cv_folds)
            k = _pick_lambda(curve, se, spec.cv_rule)
            score = curve[int(np.argmin(curve))]
            if best is None or score < best[0]:
                best = (float(score), float(grid[k]), float(mix))
        _, lam, mix = best
        return elastic_net_fit(data, lam, mix)

    pen = kernels.PEN_SCAD if spec.penalty == "scad" else kernels.PEN_MCP
    shape = spec.scad_a if spec.penalty == "scad" else spec.mcp_gamma
    curve, se = _cv_curve(data, base_grid, 1.0, pen, shape, fold_of, spec.cv_folds)
    lam = float(base_grid[_pick_lambda(curve, se, spec.cv_rule)])
    return nonconvex_fit(data, lam, spec)


def make_selector(spec: SelectorSpec):
    """Selector callable Dataset -> SparseFit used by the influence layer."""

    def fit(data: Dataset) -> SparseFit:
        return cv_select(data, spec)

    fit.selector_id = spec.selector_id
    return fit


@dataclass(frozen=True)
class DiagnosticFitter:
    """Noise-adaptive refit rule used by the influence diagnostics.

    Holds the penalty-to-noise ratio lambda0 fixed (frozen from the scored
    dataset) while the noise scale re-estimates on every subset, so deleting
    a row that inflates the noise moves the effective penalty and the
    selected support with it. Prediction-tuned penalty levels do not do
    this: an influential row corrupts the tuning curve itself and leaves the
    support either frozen or pure noise.
    """

    penalty: str
    lambda0: float
    scad_a: float = 3.7
    mcp_gamma: float = 3.0

    @property
    def selector_id(self):
        return SELECTOR_IDS[self.penalty]

    def __call__(self, data: Dataset) -> SparseFit:
        spec = SelectorSpec(
            penalty=self.penalty if self.penalty != "scaled_lasso" else "scaled_lasso",
            scad_a=self.scad_a,
            mcp_gamma=self.mcp_gamma,
        )
        return scaled_penalty_fit(data, self.lambda0, spec)


@dataclass(frozen=True)
class FixedTuningFitter:
    """Refit callable that reuses the tuning of an already-selected fit.

    Leave-one-out influence scores perturb the rows while the penalty level
    stays where cross-validation put it for the scored dataset, so the score
    reflects the influence of the row and not re-tuning randomness. The
    scaled lasso keeps lambda0 fixed but re-estimates its noise scale.
    """

    penalty: str
    lam: float = None
    mixing: float = None
    lambda0: float = None
    scad_a: float = 3.7
    mcp_gamma: float = 3.0

    @classmethod
    def from_fit(cls, spec: SelectorSpec, fit: SparseFit):
        return cls(
            penalty=spec.penalty,
            lam=fit.lambda_,
            mixing=fit.mixing,
            lambda0=fit.lambda0,
            scad_a=spec.scad_a,
            mcp_gamma=spec.mcp_gamma,
        )

    @property
    def selector_id(self):
        return SELECTOR_IDS[self.penalty]

    def __call__(self, data: Dataset) -> SparseFit:
        if self.penalty == "lasso":
            return lasso_fit(data, self.lam)
        if self.penalty == "elastic_net":
            return elastic_net_fit(data, self.lam, self.mixing)
        if self.penalty == "scaled_lasso":
            return scaled_lasso_fit(data, lambda0=self.lambda0)
        spec = SelectorSpec(
            penalty=self.penalty, scad_a=self.scad_a, mcp_gamma=self.mcp_gamma
        )
        return nonconvex_fit(data, self.lam, spec)


def reseeded(spec: SelectorSpec, seed) -> SelectorSpec:
    return replace(spec, seed=int(seed))
