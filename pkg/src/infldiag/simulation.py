"""Synthetic scenarios and the Monte Carlo evaluation harness.

Design matrices are zero-mean Gaussian with either a Toeplitz correlation
(rho^|i-j|) or a "spatial" one where only a centered block of columns is
correlated. Contamination replaces the first rows with one of three
perturbation schemes (response only, predictors only, both). The harness
runs replicates on independent RNG streams and aggregates power, FPR,
prediction MSE, true-support recovery, and wall time per procedure.
"""

import math
import time
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from ._parallel import parallel_map
from .data import Dataset, RowSubset, subset as row_subset
from .detection import RgdConfig, clusmip, detect_single_gdf, df_lasso_detect, him_detect, mip
from .errors import InfldiagError, InvalidSpecError
from .selectors import SelectorSpec, cv_select, reseeded

SCHEMES = ("I", "II", "III")
CONTAMINATED_COLUMNS = 10  # first predictors shifted by schemes II / III


@dataclass(frozen=True)
class ScenarioConfig:
    n: int = 100
    p: int = 1000
    design: str = "toeplitz"  # or "spatial"
    rho: float = 0.0
    block_size: int = 100  # spatial: width of the correlated center block
    beta: tuple = None  # None -> (2, 1, 1, 0, ..., 0)
    sigma2: float = 1.0
    scheme: str = None  # None -> clean control
    kappa_y: float = None
    kappa_x: float = None
    zeta: float = 0.0
    replicates: int = 1
    test_size: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.design not in ("toeplitz", "spatial"):
            raise InvalidSpecError(f"unknown design {self.design!r}")
        if not 0.0 <= self.rho < 1.0:
            raise InvalidSpecError("rho must lie in [0, 1)")
        if self.design == "spatial" and not 1 <= self.block_size <= self.p:
            raise InvalidSpecError("block_size must lie in [1, p]")
        if self.scheme is not None and self.scheme not in SCHEMES:
            raise InvalidSpecError(f"unknown scheme {self.scheme!r}")
        if self.scheme is not None:
            n_infl = self.zeta * self.n
            if abs(n_infl - round(n_infl)) > 1e-9 or round(n_infl) < 1:
                raise InvalidSpecError(f"zeta*n = {n_infl} must be a positive integer")
            if round(n_infl) >= self.n / 2:
                raise InvalidSpecError("contamination must stay below half the rows")
            if self.scheme in ("I", "III") and self.kappa_y is None:
                raise InvalidSpecError(f"scheme {self.scheme} needs kappa_y")
            if self.scheme in ("II", "III") and self.kappa_x is None:
                raise InvalidSpecError(f"scheme {self.scheme} needs kappa_x")
        if self.sigma2 < 0:
            raise InvalidSpecError("sigma2 must be nonnegative")

    @property
    def n_infl(self):
        return 0 if self.scheme is None else int(round(self.zeta * self.n))

    def beta_vector(self):
        beta = np.zeros(self.p)
        if self.beta is None:
            beta[:3] = (2.0, 1.0, 1.0)
        else:
            vals = np.asarray(self.beta, dtype=np.float64)
            beta[: vals.size] = vals
        return beta

    def true_support(self):
        return set(int(j) + 1 for j in np.nonzero(self.beta_vector())[0])


@dataclass(frozen=True)
class ContaminatedSample:
    data: Dataset
    truth: RowSubset  # 1-based rows that were replaced
    i_max: int  # argmax of the clean response, 1-based


@dataclass(frozen=True)
class MetricsReport:
    procedure: str
    metrics: dict  # name -> (mean, mc_standard_error, n_used)
    failures: int = 0


@lru_cache(maxsize=8)
def _chol_factor(design, rho, p, block_size):
    """Lower Cholesky factor of the design covariance (cached per shape)."""
    if design == "toeplitz":
        cov = rho ** np.abs(np.subtract.outer(np.arange(p), np.arange(p)))
    else:
        cov = np.eye(p)
        lo = (p - block_size) // 2
        idx = np.arange(lo, lo + block_size)
        cov[np.ix_(idx, idx)] = rho ** np.abs(np.subtract.outer(idx, idx))
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as e:  # unreachable for rho in [0, 1)
        raise InvalidSpecError(f"design covariance not positive definite: {e}") from e
    chol.flags.writeable = False
    return chol

def gen_design(cfg: ScenarioConfig, rng) -> np.ndarray:
    """n x p draw of rows i.i.d. N(0, Sigma) for the configured Sigma."""
    if cfg.rho == 0.0:
        return rng.standard_normal((cfg.n, cfg.p))
    chol = _chol_factor(cfg.design, cfg.rho, cfg.p, cfg.block_size)
    return rng.standard_normal((cfg.n, cfg.p)) @ chol.T


def gen_clean(x, beta, sigma2, rng) -> Dataset:
    """Linear-model responses y = X beta + eps, eps iid N(0, sigma2)."""
    x = np.asarray(x)
    beta = np.asarray(beta)
    if x.shape[1] != beta.shape[0]:
        raise InvalidSpecError("beta length must match the number of columns")
    y = x @ beta + math.sqrt(sigma2) * rng.standard_normal(x.shape[0])
    return Dataset.from_arrays(y, x)


def contaminate(clean: Dataset, cfg: ScenarioConfig, rng) -> ContaminatedSample:
    """Replace the first zeta*n rows according to the configured scheme."""
    if cfg.scheme is None:
        raise InvalidSpecError("config has no contamination scheme")
    ni = cfg.n_infl
    i_max = int(np.argmax(clean.y)) + 1
    y = clean.y.copy()
    x = clean.x.copy()
    k = min(CONTAMINATED_COLUMNS, cfg.p)
    if cfg.scheme == "I":
        y[:ni] = clean.y[i_max - 1] + rng.standard_normal(ni) + cfg.kappa_y
    elif cfg.scheme == "II":
        x[:ni, :k] += cfg.kappa_x
    else:  # III
        x[:ni, :] = clean.x[i_max - 1, :]
        x[:ni, :k] += 0.5 * cfg.kappa_x
        y[:ni] = x[:ni, :] @ cfg.beta_vector() + rng.standard_normal(ni) + cfg.kappa_y
    return ContaminatedSample(
        data=Dataset(y=y, x=x, row_ids=clean.row_ids),
        truth=RowSubset(tuple(range(1, ni + 1))),
        i_max=i_max,
    )


def draw_scenario(cfg: ScenarioConfig, rng):
    """One replicate's (sample, clean test set). ``truth`` is empty for a
    clean control configuration."""
    x = gen_design(cfg, rng)
    beta = cfg.beta_vector()
    clean = gen_clean(x, beta, cfg.sigma2, rng)
    if cfg.scheme is None:
        sample = ContaminatedSample(data=clean, truth=RowSubset(()), i_max=int(np.argmax(clean.y)) + 1)
    else:
        sample = contaminate(clean, cfg, rng)
    test = None
    if cfg.test_size:
        test_cfg = replace(
            cfg, n=cfg.test_size, scheme=None, zeta=0.0, kappa_y=None, kappa_x=None
        )
        xt = gen_design(test_cfg, rng)
        test = gen_clean(xt, beta, cfg.sigma2, rng)
    return sample, test


# ---------------------------------------------------------------------------
# procedures and per-replicate evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProcedureSpec:
    """A detection procedure plus everything needed to run it."""

    procedure: str  # gdf_single | clusmip | mip | df_lasso | him
    selector: SelectorSpec = None
    clustering: str = "kmeans_pp"
    alpha: float = 0.05
    alpha0: float = 0.05
    rgd: RgdConfig = field(default_factory=RgdConfig)
    threads: int = 1

    def __post_init__(self):
        if self.procedure not in ("gdf_single", "clusmip", "mip", "df_lasso", "him"):
            raise InvalidSpecError(f"unknown procedure {self.procedure!r}")
        if self.procedure in ("gdf_single", "clusmip") and self.selector is None:
            raise InvalidSpecError(f"{self.procedure} needs a selector")
        if self.procedure in ("mip", "him") and self.selector is not None:
            raise InvalidSpecError(f"{self.procedure} is selector-free")

    @property
    def label(self):
        if self.procedure == "clusmip":
            return f"clusmip({self.selector.selector_id})"
        if self.procedure == "gdf_single":
            return f"gdf_single({self.selector.selector_id})"
        if self.procedure == "df_lasso":
            return "df_lasso"
        return self.procedure

    @property
    def uses_model_metrics(self):
        # MIP and HIM select no submodel, so model-based metrics are skipped
        return self.procedure not in ("mip", "him")

    def run(self, data: Dataset, seed) -> "DetectionResult":
        if self.procedure == "clusmip":
            return clusmip(
                data, reseeded(self.selector, seed), clustering=self.clustering,
                alpha0=self.alpha0, threads=self.threads,
            )
        if self.procedure == "gdf_single":
            return detect_single_gdf(
                data, reseeded(self.selector, seed), alpha=self.alpha, threads=self.threads
            )
        if self.procedure == "df_lasso":
            base = self.selector or SelectorSpec(penalty="lasso")
            return df_lasso_detect(data, reseeded(base, seed), threads=self.threads)
        if self.procedure == "mip":
            return mip(data, replace(self.rgd, seed=seed), alpha=self.alpha, threads=self.threads)
        return him_detect(data, alpha=self.alpha)

    def metric_selector(self, seed) -> SelectorSpec:
        sel = self.selector or SelectorSpec(penalty="lasso")
        return reseeded(sel, seed)


def _insample_mse(fit, data: Dataset):
    r = data.y - fit.predict(data.x)
    return float(r @ r / data.n)


def evaluate(result, sample: ContaminatedSample, spec: SelectorSpec, test: Dataset = None,
             true_support=None, include_model_metrics=True) -> dict:
    """Single-replicate metrics for one detection result.

    power / fpr compare flagged row ids against the planted truth. MSE is the
    mean squared residual of the cross-validated refit on the data it was fit
    to (the full sample before removal, the reduced sample after); held-out
    MSE on a clean test set is reported alongside when a test set is given.
    """
    truth = set(int(r) for r in sample.truth)
    detected = set(int(r) for r in result.influential)
    n = sample.data.n
    out = {"time_seconds": result.wall_time}
    out["power"] = len(detected & truth) / len(truth) if truth else np.nan
    out["fpr"] = len(detected - truth) / (n - len(truth)) if n > len(truth) else np.nan

    if not include_model_metrics:
        return out

    fit_before = cv_select(sample.data, spec)
    out["mse_before"] = _insample_mse(fit_before, sample.data)
    if true_support is not None:
        out["select_prob_before"] = float(true_support <= set(fit_before.support))

    if detected:
        keep = tuple(
            pos for pos, rid in enumerate(sample.data.row_ids, start=1)
            if int(rid) not in detected
        )
        reduced = row_subset(sample.data, RowSubset(keep))
        fit_after = cv_select(reduced, spec)
        out["mse_after"] = _insample_mse(fit_after, reduced)
    else:
        reduced = sample.data
        fit_after = fit_before
        out["mse_after"] = out["mse_before"]
    if true_support is not None:
        out["select_prob_after"] = float(true_support <= set(fit_after.support))
    if test is not None:
        out["mse_test_before"] = _insample_mse(fit_before, test)
        out["mse_test_after"] = _insample_mse(fit_after, test)
    return out


# ---------------------------------------------------------------------------
# experiment driver
# ---------------------------------------------------------------------------

def _replicate_seed(master_seed, r):
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(r),))
    return ss


def _run_replicate(args):
    cfg, procedures, r = args
    ss = _replicate_seed(cfg.seed, r)
    rng = np.random.default_rng(ss)
    proc_seed = int(ss.generate_state(1, dtype=np.uint64)[0] >> 1)
    sample, test = draw_scenario(cfg, rng)
    true_support = cfg.true_support()
    records = []
    failures = []
    for proc in procedures:
        try:
            result = proc.run(sample.data, proc_seed)
            metrics = evaluate(
                result, sample, proc.metric_selector(proc_seed), test=test,
                true_support=true_support,
                include_model_metrics=proc.uses_model_metrics,
            )
        except InfldiagError as e:
            failures.append({"replicate": r, "procedure": proc.label, "error": str(e)})
            continue
        for name, value in metrics.items():
            records.append(
                {"replicate": r, "procedure": proc.label, "metric": name, "value": value}
            )
    return records, failures


def aggregate(records, procedures, failures=()):
    """Mean and Monte Carlo standard error per (procedure, metric)."""
    reports = []
    for proc in procedures:
        label = proc.label
        metrics = {}
        names = sorted({rec["metric"] for rec in records if rec["procedure"] == label})
        for name in names:
            vals = np.array(
                [
                    rec["value"]
                    for rec in records
                    if rec["procedure"] == label and rec["metric"] == name
                ],
                dtype=np.float64,
            )
            vals = vals[np.isfinite(vals)]
            if vals.size == 0:
                metrics[name] = (np.nan, np.nan, 0)
                continue
            mean = float(vals.mean())
            se = float(vals.std(ddof=1) / math.sqrt(vals.size)) if vals.size > 1 else 0.0
            metrics[name] = (mean, se, int(vals.size))
        nfail = sum(1 for f in failures if f["procedure"] == label)
        reports.append(MetricsReport(procedure=label, metrics=metrics, failures=nfail))
    return reports


def run_experiment(cfg: ScenarioConfig, procedures, threads=1):
    """Replicated scenario draws; returns (long records, failures, reports).

    Replicates use counter-split RNG streams from the master seed, run in
    parallel, and aggregate in replicate order, so the output is a pure
    function of the configuration.
    """
    jobs = [(cfg, tuple(procedures), r) for r in range(cfg.replicates)]
    outs = parallel_map(_run_replicate, jobs, threads)
    records = [rec for recs, _ in outs for rec in recs]
    failures = [f for _, fs in outs for f in fs]
    reports = aggregate(records, procedures, failures)
    return records, failures, reports
