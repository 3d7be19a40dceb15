"""Decision layer: which rows get flagged as influential.

Procedures:

* ``detect_single_gdf`` — one-shot GDF with a two-sided normal threshold.
* ``clusmip`` — cluster into suspect/clean, test each suspect's GDF against
  the leave-one-out scores of {suspect} U clean, BH-correct the suspect
  p-values.
* ``mip`` — selector-free baseline: random-group-deletion correlation
  statistics T_min / T_max against chi^2(1).
* ``df_lasso_detect`` — |standardized score| >= 2 rule with the lasso.
* ``him_detect`` — chi^2(1) threshold on n^2 D_i.
"""

import time
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from . import kernels
from ._parallel import parallel_map
from .clustering import ClusterPartition, cluster_rows
from .data import Dataset, RowSubset, canonical_order, content_seed, subset
from .errors import (
    AmbiguousEmbeddingError,
    DegenerateClusterError,
    InvalidSpecError,
)
from .influence import df_lasso_scores, gdf_scores, him_scores
from .selectors import SelectorSpec

PROCEDURES = ("gdf_single", "clusmip", "mip", "df_lasso", "him")


@dataclass(frozen=True)
class RgdConfig:
    """Random-group-deletion sampling plan for MIP."""

    m: int = 100
    n_sub: int = None  # None -> ceil(n / 2)
    seed: int = 0

    def resolve(self, n):
        n_sub = self.n_sub if self.n_sub is not None else int(np.ceil(n / 2))
        if self.m < 1:
            raise InvalidSpecError("need m >= 1 random subsets")
        if not 1 <= n_sub <= n - 1:
            raise InvalidSpecError(f"n_sub={n_sub} must lie in [1, {n - 1}]")
        return n_sub


@dataclass(frozen=True)
class PerPoint:
    row_id: int
    raw: float
    standardized: float
    p_value: float
    decision: str
    tested: bool = True


@dataclass(frozen=True)
class DetectionResult:
    procedure_id: str
    influential: tuple  # row ids, ascending
    per_point: tuple  # of PerPoint, in input row order
    selector_id: str = None
    alpha: float = None
    alpha0: float = None
    partition: ClusterPartition = None
    wall_time: float = 0.0
    fit_count: int = 0
    warnings: tuple = field(default_factory=tuple)

    def decision_of(self, row_id):
        for pp in self.per_point:
            if pp.row_id == row_id:
                return pp.decision
        raise KeyError(row_id)


def bh_reject(p_values, alpha0):
    """Benjamini-Hochberg step-up: indices (0-based) of rejected hypotheses."""
    p = np.asarray(p_values, dtype=np.float64)
    if p.size == 0:
        return set()
    if not 0.0 < alpha0 < 1.0:
        raise InvalidSpecError("alpha0 must lie in (0, 1)")
    if (p < 0).any() or (p > 1).any():
        raise InvalidSpecError("p-values must lie in [0, 1]")
    m = p.size
    order = np.argsort(p, kind="stable")
    sorted_p = p[order]
    line = np.arange(1, m + 1) * (alpha0 / m)
    hits = np.nonzero(sorted_p <= line)[0]
    if hits.size == 0:
        return set()
    threshold = sorted_p[hits[-1]]
    return {int(i) for i in np.nonzero(p <= threshold)[0]}


def _per_point_from_scores(scores, reject_mask):
    return tuple(
        PerPoint(
            row_id=int(rid),
            raw=float(raw),
            standardized=float(z),
            p_value=float(p),
            decision="reject" if rej else "keep",
        )
        for rid, raw, z, p, rej in zip(
            scores.row_ids, scores.raw, scores.standardized, scores.p_values, reject_mask
        )
    )


def detect_single_gdf(data: Dataset, spec: SelectorSpec, alpha=0.05, threads=1,
                      warnings=()) -> DetectionResult:
    """Single-point GDF rule: flag |standardized score| above the two-sided
    normal percentile. No multiplicity correction."""
    if not 0.0 < alpha < 1.0:
        raise InvalidSpecError("alpha must lie in (0, 1)")
    t0 = time.perf_counter()
    scores = gdf_scores(data, spec, threads=threads)
    gamma = stats.norm.ppf(1.0 - alpha / 2.0)
    reject = np.abs(scores.standardized) > gamma
    if scores.degenerate:
        reject[:] = False
    flagged = tuple(int(r) for r in np.sort(scores.row_ids[reject]))
    return DetectionResult(
        procedure_id="gdf_single",
        influential=flagged,
        per_point=_per_point_from_scores(scores, reject),
        selector_id=scores.selector_id,
        alpha=alpha,
        wall_time=time.perf_counter() - t0,
        fit_count=scores.fit_count,
        warnings=tuple(warnings),
    )


def df_lasso_detect(data: Dataset, spec: SelectorSpec = None, threads=1) -> DetectionResult:
    """DF(LASSO): flag rows whose standardized score has magnitude >= 2."""
    t0 = time.perf_counter()
    scores = df_lasso_scores(data, spec, threads=threads)
    reject = np.abs(scores.standardized) >= 2.0
    if scores.degenerate:
        reject[:] = False
    flagged = tuple(int(r) for r in np.sort(scores.row_ids[reject]))
    return DetectionResult(
        procedure_id="df_lasso",
        influential=flagged,
        per_point=_per_point_from_scores(scores, reject),
        selector_id="lasso",
        wall_time=time.perf_counter() - t0,
        fit_count=scores.fit_count,
    )


def him_detect(data: Dataset, alpha=0.05, paper_divisor=False) -> DetectionResult:
    """HIM rule: flag rows with n^2 D_i above the chi^2(1) percentile."""
    if not 0.0 < alpha < 1.0:
        raise InvalidSpecError("alpha must lie in (0, 1)")
    t0 = time.perf_counter()
    scores = him_scores(data, paper_divisor=paper_divisor)
    cutoff = stats.chi2.ppf(1.0 - alpha, df=1)
    reject = scores.standardized > cutoff
    flagged = tuple(int(r) for r in np.sort(scores.row_ids[reject]))
    return DetectionResult(
        procedure_id="him",
        influential=flagged,
        per_point=_per_point_from_scores(scores, reject),
        alpha=alpha,
        wall_time=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# ClusMIP
# ---------------------------------------------------------------------------

def _suspect_worker(args):
    data, spec, positions, suspect_pos = args
    w = subset(data, RowSubset(positions))
    sc = gdf_scores(w, spec, threads=1)
    rid = int(data.row_ids[suspect_pos - 1])
    raw, z, p = sc.by_row_id(rid)
    # exchangeability-exact p-value: rank of tau_j among the subset's scores
    others = sc.raw[sc.row_ids != rid]
    p_perm = (1.0 + float(np.sum(others >= raw))) / (others.size + 1.0)
    return rid, float(raw), float(z), float(p), float(p_perm), sc.fit_count


def clusmip(data: Dataset, spec: SelectorSpec, clustering="kmeans_pp", alpha0=0.05,
            threads=1, restarts=10, n_neighbors=None, standardize=False) -> DetectionResult:
    """Cluster-then-test multiple influential point detection.

    Stage 1 splits rows into suspect and clean groups. Stage 2 scores each
    suspect j on the subset {j} U clean: the leave-one-out GDF scores of that
    subset standardize tau_j, and the |suspect| p-values get BH correction at
    FDR level alpha0. The p-values fed to BH are the exchangeability-exact
    rank p-values of tau_j within its subset's scores; the reported
    standardized scores and normal p-values are informational (the normal
    tail is badly anti-conservative for the near-degenerate integer score
    vectors clean data produces). Degenerate clustering falls back to the
    single-point GDF rule with a warning recorded on the result.
    """
    if not 0.0 < alpha0 < 1.0:
        raise InvalidSpecError("alpha0 must lie in (0, 1)")
    if data.n < 10:
        raise InvalidSpecError("need n >= 10 for clusmip")
    t0 = time.perf_counter()
    try:
        part = cluster_rows(
            data, method=clustering, seed=spec.seed, restarts=restarts,
            n_neighbors=n_neighbors, standardize=standardize,
        )
    except (DegenerateClusterError, AmbiguousEmbeddingError) as e:
        res = detect_single_gdf(
            data, spec, alpha=alpha0, threads=threads,
            warnings=(f"degenerate clustering ({e}); fell back to gdf_single",),
        )
        return res

    suspect_pos = list(part.suspect)
    clean_pos = tuple(part.clean)
    jobs = [
        (data, spec, tuple(sorted((j,) + clean_pos)), j)
        for j in suspect_pos
    ]
    stage2 = parallel_map(_suspect_worker, jobs, threads)
    fit_count = sum(s[5] for s in stage2)

    pvals = [s[4] for s in stage2]
    rejected = bh_reject(pvals, alpha0)
    flagged = tuple(sorted(stage2[k][0] for k in rejected))

    by_rid = {s[0]: (s[1], s[2], s[4]) for s in stage2}
    per_point = []
    for pos, rid in enumerate(data.row_ids, start=1):
        rid = int(rid)
        if rid in by_rid:
            raw, z, p = by_rid[rid]
            per_point.append(
                PerPoint(rid, raw, z, p, "reject" if rid in flagged else "keep")
            )
        else:
            per_point.append(
                PerPoint(rid, np.nan, np.nan, np.nan, "clean_partition", tested=False)
            )
    return DetectionResult(
        procedure_id="clusmip",
        influential=flagged,
        per_point=tuple(per_point),
        selector_id=spec.selector_id,
        alpha0=alpha0,
        partition=part,
        wall_time=time.perf_counter() - t0,
        fit_count=fit_count,
    )


# ---------------------------------------------------------------------------
# MIP (random group deletion on the HIM statistic)
# ---------------------------------------------------------------------------

def rgd_sample(n, i, cfg: RgdConfig, rng) -> list:
    """m subsets of size n_sub drawn uniformly without replacement from
    {1..n} minus {i} (all positions 1-based)."""
    n_sub = cfg.resolve(n)
    others = np.array([k for k in range(1, n + 1) if k != i], dtype=np.int64)
    return [
        RowSubset(tuple(int(v) for v in rng.choice(others, size=n_sub, replace=False)))
        for _ in range(cfg.m)
    ]


def _mip_row_worker(args):
    can, cfg, n_sub, pos = args
    rid = int(can.row_ids[pos - 1])
    rng = np.random.default_rng(content_seed(cfg.seed, can.row_ids, tag=f"rgd:{rid}".encode()))
    others = np.array([k for k in range(pos - 1)] + [k for k in range(pos, can.n)],
                      dtype=np.int64)
    gaps = np.empty(cfg.m)
    skipped = 0
    for j in range(cfg.m):
        gap = np.nan
        for _attempt in range(2):  # degenerate subsets get one resample
            idx = rng.choice(others, size=n_sub, replace=False)
            gap = kernels.subset_corr_gap(can.x, can.y, np.sort(idx), pos - 1)
            if np.isfinite(gap):
                break
        if not np.isfinite(gap):
            skipped += 1
        gaps[j] = gap
    gaps = gaps / can.p
    valid = np.isfinite(gaps)
    if not valid.any():
        return rid, np.nan, np.nan, skipped
    scale = float(n_sub) ** 2
    return rid, scale * float(np.nanmax(gaps)), scale * float(np.nanmin(gaps)), skipped


def mip(data: Dataset, cfg: RgdConfig = None, alpha=0.05, threads=1) -> DetectionResult:
    """Random-group-deletion detector on the correlation-change statistic.

    For each row i, the HIM-style statistic is computed over m random clean
    candidate subsets; T_max screens (counters masking) via BH over its
    chi^2(1) p-values at level alpha, and T_min confirms (counters swamping)
    at the relaxed chi^2(1) median cutoff.
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidSpecError("alpha must lie in (0, 1)")
    cfg = cfg or RgdConfig()
    t0 = time.perf_counter()
    can, order = canonical_order(data)
    n_sub = cfg.resolve(can.n)
    jobs = [(can, cfg, n_sub, pos) for pos in range(1, can.n + 1)]
    rows = parallel_map(_mip_row_worker, jobs, threads)

    skipped = sum(r[3] for r in rows)
    t_max = np.array([r[1] for r in rows])
    t_min = np.array([r[2] for r in rows])
    p_max = np.where(np.isfinite(t_max), stats.chi2.sf(t_max, df=1), 1.0)
    stage1 = bh_reject(p_max, alpha)
    relaxed_cut = stats.chi2.ppf(0.5, df=1)
    keep = {k for k in stage1 if np.isfinite(t_min[k]) and t_min[k] > relaxed_cut}
    flagged = tuple(sorted(int(rows[k][0]) for k in keep))

    by_rid = {r[0]: (r[1], r[2], p) for r, p in zip(rows, p_max)}
    per_point = tuple(
        PerPoint(
            row_id=int(rid),
            raw=by_rid[int(rid)][0],
            standardized=by_rid[int(rid)][1],  # T_min: the confirmation statistic
            p_value=float(by_rid[int(rid)][2]),
            decision="reject" if int(rid) in flagged else "keep",
        )
        for rid in data.row_ids
    )
    warn = (f"{skipped} degenerate subsets skipped",) if skipped else ()
    return DetectionResult(
        procedure_id="mip",
        influential=flagged,
        per_point=per_point,
        alpha=alpha,
        wall_time=time.perf_counter() - t0,
        warnings=warn,
    )
