"""Analytic Bayesian binary outcome prediction in any number of dimensions."""
from .data import (
    ClassSummary,
    Dataset,
    LabeledSample,
    SimConfig,
    project_features,
    rank_features_by_correlation,
    simulate_dataset,
    summarize_class,
)
from .exceptions import (
    BayesOutcomeError,
    ComputationError,
    DegenerateClassError,
    DimensionError,
    EmptyClassError,
    QuadratureConvergenceWarning,
    ValidationError,
    ZeroVarianceError,
)
from .posterior import (
    LOG_E_SIGN,
    ClassPosterior,
    PredictiveStats,
    fit_hyperparameters,
    lambda10,
    predictive_statistics,
)
from .predictors import (
    FittedModel,
    Method,
    PredictorConfig,
    classify,
    fit_model,
    predict_fd,
    predict_ld,
    predict_lold,
    predict_plugin_baseline,
    predict_proba,
)
from .quadrature import (
    McEstimate,
    QuadratureRule,
    chisquare_rule,
    hermite_rule,
    mc_oracle_probability,
    w_log_density,
)

__version__ = "0.1.0"
