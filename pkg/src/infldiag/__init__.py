"""infldiag: influence diagnostics for high-dimensional variable selection.

Detects observations whose presence changes the submodel chosen by a sparse
regression selector. Single-point scores (HIM, DF(LASSO), GDF) and multi-point
detectors (ClusMIP, MIP) with a Monte Carlo evaluation harness.
"""

from .data import Dataset, RowSubset, StandardizationInfo, drop_one, standardize_columns, subset
from .detection import (
    DetectionResult,
    RgdConfig,
    bh_reject,
    clusmip,
    detect_single_gdf,
    df_lasso_detect,
    him_detect,
    mip,
    rgd_sample,
)
from .errors import (
    AmbiguousEmbeddingError,
    ColumnDegenerateError,
    ConfigError,
    ConvergenceError,
    DegenerateClusterError,
    DegenerateCorrelationError,
    DegenerateNoiseError,
    InfldiagError,
    InvalidSpecError,
    InvalidSubsetError,
)
from .influence import (
    InfluenceScores,
    df_lasso_scores,
    gdf_scores,
    him_scores,
    loo_marginal_correlations,
    standardize_scores,
)
from .clustering import ClusterPartition, cluster_rows, kmeans, kmeans_pp_init
from .selectors import (
    SelectorSpec,
    SparseFit,
    cv_select,
    elastic_net_fit,
    lasso_fit,
    nonconvex_fit,
    scaled_lasso_fit,
    soft_threshold,
    support,
)
from .simulation import (
    ContaminatedSample,
    MetricsReport,
    ProcedureSpec,
    ScenarioConfig,
    contaminate,
    evaluate,
    gen_clean,
    gen_design,
    run_experiment,
)

__version__ = "0.1.0"
