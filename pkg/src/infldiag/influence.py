"""Per-observation influence scores.

Three measures:

* HIM: averaged squared change in the marginal response-predictor
  correlations when a row is deleted; n^2 * score is asymptotically chi^2(1)
  on clean data.
* GDF: size of the symmetric difference between the supports selected with
  and without a row, for any plugged-in model selector.
* DF(LASSO): the GDF specialised to the cross-validated lasso.

Leave-one-out fits are independent and may run in parallel; scores are
written to pre-indexed slots so serial and parallel execution agree bitwise.
"""

from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import kernels
from ._parallel import parallel_map
from .data import Dataset, canonical_order, drop_one
from .errors import DegenerateCorrelationError, InvalidSpecError
from .selectors import (
    DiagnosticFitter,
    FixedTuningFitter,
    SelectorSpec,
    cv_select,
    diagnostic_lambda0,
)


@dataclass(frozen=True)
class InfluenceScores:
    """Raw and standardized per-row scores, aligned with ``row_ids``."""

    row_ids: np.ndarray
    raw: np.ndarray
    standardized: np.ndarray
    p_values: np.ndarray
    measure_id: str
    selector_id: str = None
    mean_used: float = 0.0
    scale_used: float = 1.0
    degenerate: bool = False
    fit_count: int = 0

    def by_row_id(self, row_id):
        k = int(np.nonzero(self.row_ids == row_id)[0][0])
        return self.raw[k], self.standardized[k], self.p_values[k]


def standardize_scores(raw):
    """Center and scale by the sample mean / SD (m-1 divisor) and attach
    two-sided normal p-values.

    A zero-variance score vector is degenerate-but-valid: every standardized
    score is 0 and every p-value is 1.
    Returns (standardized, p_values, mean_used, scale_used, degenerate).
    """
    raw = np.asarray(raw, dtype=np.float64)
    if raw.size < 2:
        raise InvalidSpecError("need at least two scores to standardize")
    mean = float(raw.mean())
    scale = float(raw.std(ddof=1))
    if scale == 0.0:
        z = np.zeros_like(raw)
        return z, np.ones_like(raw), mean, 0.0, True
    z = (raw - mean) / scale
    p = np.clip(2.0 * stats.norm.sf(np.abs(z)), 0.0, 1.0)
    return z, p, mean, scale, False


# ---------------------------------------------------------------------------
# HIM
# ---------------------------------------------------------------------------

def _loo_corr_checked(data: Dataset, paper_divisor):
    rho_full, rho_loo = kernels.loo_corr(data.x, data.y, bool(paper_divisor))
    if np.isnan(rho_full).any():
        j = int(np.nonzero(np.isnan(rho_full))[0][0])
        raise DegenerateCorrelationError(column=j + 1)
    if np.isnan(rho_loo).any():
        i, j = map(int, np.argwhere(np.isnan(rho_loo))[0])
        raise DegenerateCorrelationError(
            column=j + 1,
            message=f"zero leave-one-out variance for column {j + 1} when dropping row "
            f"{int(data.row_ids[i])}",
        )
    return rho_full, rho_loo


def loo_marginal_correlations(data: Dataset, i, paper_divisor=False):
    """Marginal correlations between y and every predictor with row ``i``
    (1-based) removed; ``i=0`` returns the full-data correlations.

    By default leave-one-out means use the n-1 divisor; ``paper_divisor``
    switches to dividing the (n-1)-term sums by n.
    """
    if data.n < 3:
        raise InvalidSpecError("need n >= 3 for leave-one-out correlations")
    if not 0 <= i <= data.n:
        raise InvalidSpecError(f"row position {i} out of range")
    rho_full, rho_loo = _loo_corr_checked(data, paper_divisor)
    return rho_full if i == 0 else rho_loo[i - 1]


def him_scores(data: Dataset, paper_divisor=False) -> InfluenceScores:
    """HIM scores: D_i = mean_j (rho_j - rho_j^(-i))^2, standardized as
    n^2 D_i with upper-tail chi^2(1) p-values."""
    if data.n < 3:
        raise InvalidSpecError("need n >= 3 for HIM")
    rho_full, rho_loo = _loo_corr_checked(data, paper_divisor)
    d = ((rho_full[None, :] - rho_loo) ** 2).mean(axis=1)
    n2 = float(data.n) ** 2
    z = n2 * d
    p = stats.chi2.sf(z, df=1)
    return InfluenceScores(
        row_ids=data.row_ids.copy(),
        raw=d,
        standardized=z,
        p_values=p,
        measure_id="him",
        mean_used=0.0,
        scale_used=1.0 / n2,
    )


# ---------------------------------------------------------------------------
# GDF / DF(LASSO)
# ---------------------------------------------------------------------------

def _support_of(data, selector):
    fit = selector(data) if callable(selector) else cv_select(data, selector)
    sup = frozenset(fit.support) if hasattr(fit, "support") else frozenset(fit)
    return sup


def _symmetric_difference_size(sup_a, sup_b, p):
    # indicator-sum form and set form must agree; both are kept on purpose
    ind_a = np.zeros(p, dtype=np.int64)
    ind_b = np.zeros(p, dtype=np.int64)
    ind_a[[j - 1 for j in sup_a]] = 1
    ind_b[[j - 1 for j in sup_b]] = 1
    by_indicators = int(np.abs((1 - ind_a) - (1 - ind_b)).sum())
    by_sets = len(sup_a ^ sup_b)
    if by_indicators != by_sets:
        raise AssertionError(
            f"symmetric-difference identity violated: {by_indicators} != {by_sets}"
        )
    return by_sets


def _loo_support_worker(args):
    data, selector, k = args
    try:
        return _support_of(drop_one(data, k), selector)
    except Exception as e:
        raise type(e)(
            f"selector failed on leave-one-out fit dropping row_id "
            f"{int(data.row_ids[k - 1])}: {e}"
        ) from e


def gdf_scores(data: Dataset, selector, threads=1, measure_id="gdf",
               retune_loo=False, diagnostic_tuning=True) -> InfluenceScores:
    """Support-change score for every row.

    ``selector`` is a :class:`SelectorSpec` (fit via ``cv_select``) or any
    callable ``Dataset -> SparseFit`` / ``Dataset -> support set``. Raw score
    for row i is the size of the symmetric difference between the support
    selected on the full data and on the data without row i.

    For a :class:`SelectorSpec` the default is the diagnostic refit rule:
    the penalty-to-noise ratio lambda0 is frozen at a support-sensitive level
    computed from the scored data, and every (full and leave-one-out) fit
    re-estimates its noise scale under the selector family's own thresholding
    rule. Influential rows move the noise estimate, hence the penalty, hence
    the support; tuning noise cannot, because nothing is re-tuned.

    ``diagnostic_tuning=False`` reverts to cross-validated tuning: selected
    once on the scored data and held fixed across the refits, or re-run per
    refit with ``retune_loo=True`` (n+1 full CV runs; slow). An explicit
    ``lambda_grid`` or ``lambda0`` in the spec always wins over the
    diagnostic default.
    """
    if data.n < 3:
        raise InvalidSpecError("need n >= 3 for leave-one-out scores")
    can, order = canonical_order(data)
    if isinstance(selector, SelectorSpec):
        explicit_tuning = (
            selector.lambda0 is not None
            if selector.penalty == "scaled_lasso"
            else selector.lambda_grid is not None
        )
        if diagnostic_tuning and not explicit_tuning:
            loo_selector = DiagnosticFitter(
                penalty=selector.penalty,
                lambda0=diagnostic_lambda0(can.n, can.p),
                scad_a=selector.scad_a,
                mcp_gamma=selector.mcp_gamma,
            )
            full_support = frozenset(loo_selector(can).support)
        elif not retune_loo:
            full_fit = cv_select(can, selector)
            full_support = frozenset(full_fit.support)
            loo_selector = FixedTuningFitter.from_fit(selector, full_fit)
        else:
            full_support = _support_of(can, selector)
            loo_selector = selector
    else:
        full_support = _support_of(can, selector)
        loo_selector = selector
    jobs = [(can, loo_selector, k) for k in range(1, can.n + 1)]
    loo_supports = parallel_map(_loo_support_worker, jobs, threads)
    raw_can = np.array(
        [
            _symmetric_difference_size(full_support, s, can.p)
            for s in loo_supports
        ],
        dtype=np.float64,
    )
    # back to the caller's row order
    raw = np.empty_like(raw_can)
    raw[order] = raw_can
    z, p, mean, scale, degenerate = standardize_scores(raw)
    selector_id = getattr(selector, "selector_id", None)
    return InfluenceScores(
        row_ids=data.row_ids.copy(),
        raw=raw,
        standardized=z,
        p_values=p,
        measure_id=measure_id,
        selector_id=selector_id,
        mean_used=mean,
        scale_used=scale,
        degenerate=degenerate,
        fit_count=data.n + 1,
    )


def df_lasso_scores(data: Dataset, spec: SelectorSpec = None, threads=1) -> InfluenceScores:
    """GDF with the cross-validated lasso selector (the DF(LASSO) measure)."""
    spec = spec or SelectorSpec(penalty="lasso")
    if spec.penalty != "lasso":
        raise InvalidSpecError("DF(LASSO) requires the lasso penalty")
    return gdf_scores(data, spec, threads=threads, measure_id="df_lasso")
