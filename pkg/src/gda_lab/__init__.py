"""Simulation lab for generative data augmentation on a two-class Gaussian mixture."""

from .bounds import (
    BoundBreakdown,
    BoundInputs,
    BoundMode,
    OptimalAugmentation,
    eval_bgmm_bound,
    eval_theorem2,
    eval_theorem3,
    optimal_mg,
)
from .classifier import (
    LinearClassifier,
    Loss,
    RiskReport,
    empirical_risk,
    fit_erm,
    mc_true_risk,
    nll_loss,
    point_losses,
)
from .config import ConfigError, ExperimentConfig, load_config_file, parse_config, serialize_config
from .divergence import (
    DivergenceMethod,
    DivergenceReport,
    IntegrationGrid,
    NonPositiveVariance,
    closed_form_report,
    kl_learned_vs_true,
    kl_numeric_1d,
    numeric_report_1d,
    tv_numeric_1d,
    tv_pinsker,
)
from .experiment import (
    MAX_REDRAWS,
    BoundRow,
    BoundTable,
    CellStats,
    RedrawLimitError,
    SweepGrid,
    SweepResult,
    TrialConfig,
    TrialResult,
    grid_from_values,
    predict_sweep,
    run_sweep,
    run_trial,
)
from .generator import (
    FittedGenerator,
    InsufficientClassData,
    as_ratio,
    augment,
    fit_conditional_gmm,
    sample_synthetic,
    synthetic_count,
)
from .mixture import (
    DimensionMismatchError,
    EmptyDatasetError,
    LabeledDataset,
    LabeledPoint,
    MixtureParams,
    Source,
    sample_dataset,
    standard_mean,
    zero_one_error,
)
from .reports import BOUND_HEADER, SWEEP_HEADER, emit_csv, render_csv
from .rng import mix64, stream

__version__ = "0.1.0"

__all__ = [
    "BOUND_HEADER",
    "BoundBreakdown",
    "BoundInputs",
    "BoundMode",
    "BoundRow",
    "BoundTable",
    "CellStats",
    "ConfigError",
    "DimensionMismatchError",
    "DivergenceMethod",
    "DivergenceReport",
    "EmptyDatasetError",
    "ExperimentConfig",
    "FittedGenerator",
    "InsufficientClassData",
    "IntegrationGrid",
    "LabeledDataset",
    "LabeledPoint",
    "LinearClassifier",
    "Loss",
    "MAX_REDRAWS",
    "MixtureParams",
    "NonPositiveVariance",
    "OptimalAugmentation",
    "RedrawLimitError",
    "RiskReport",
    "SWEEP_HEADER",
    "Source",
    "SweepGrid",
    "SweepResult",
    "TrialConfig",
    "TrialResult",
    "as_ratio",
    "augment",
    "closed_form_report",
    "empirical_risk",
    "emit_csv",
    "eval_bgmm_bound",
    "eval_theorem2",
    "eval_theorem3",
    "fit_conditional_gmm",
    "fit_erm",
    "grid_from_values",
    "kl_learned_vs_true",
    "kl_numeric_1d",
    "load_config_file",
    "mc_true_risk",
    "mix64",
    "nll_loss",
    "numeric_report_1d",
    "optimal_mg",
    "parse_config",
    "point_losses",
    "predict_sweep",
    "render_csv",
    "run_sweep",
    "run_trial",
    "sample_dataset",
    "sample_synthetic",
    "serialize_config",
    "standard_mean",
    "stream",
    "synthetic_count",
    "tv_numeric_1d",
    "tv_pinsker",
    "zero_one_error",
]
