"""stablesep: causal/non-causal variable separation for stable prediction.

One conditional-independence test per variable, anchored at a known
causal "seed" variable and conditioned on the response, separates
causal from non-causal predictors even under biased sample selection;
models fit on the causal side predict stably across environments with
shifted spurious correlations.
"""

from .citest import (
    CiTestResult,
    RcitParams,
    fisher_z_test,
    hbe_pvalue,
    median_bandwidth,
    partial_correlation,
    rcit_test,
    rff_features,
)
from .data import Dataset, Scaler, VariableRanking, select_columns, standardize
from .evaluate import (
    EvaluationReport,
    average_error,
    precision_at_k,
    stability_error,
    unstable_rank,
)
from .experiments import ExperimentConfig, run_real, run_synthetic
from .predict import LinearModel, ols_fit, rmse
from .separation import (
    SeparationConfig,
    correlation_ranking,
    discover_seed,
    rank_by_ci,
    select_top_k,
)
from .synth import (
    EnvironmentSpec,
    biased_select,
    gen_predictors,
    gen_response,
    make_environment,
)

__version__ = "0.1.0"

__all__ = [
    "CiTestResult",
    "Dataset",
    "EnvironmentSpec",
    "EvaluationReport",
    "ExperimentConfig",
    "LinearModel",
    "RcitParams",
    "Scaler",
    "SeparationConfig",
    "VariableRanking",
    "average_error",
    "biased_select",
    "correlation_ranking",
    "discover_seed",
    "fisher_z_test",
    "gen_predictors",
    "gen_response",
    "hbe_pvalue",
    "make_environment",
    "median_bandwidth",
    "ols_fit",
    "partial_correlation",
    "precision_at_k",
    "rank_by_ci",
    "rcit_test",
    "rff_features",
    "rmse",
    "run_real",
    "run_synthetic",
    "select_columns",
    "select_top_k",
    "stability_error",
    "standardize",
    "unstable_rank",
]
