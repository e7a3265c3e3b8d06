"""Lasso fits and the alternate features missing from them."""

from .alternates import (
    AlternatePair,
    AlternateReport,
    PartialPrediction,
    find_alternates,
    partial_prediction,
    rank_alternates,
    score_pair,
    screen_candidates,
)
from .datamodel import Dataset, FeatureMatrix, load_csv, load_libsvm, load_text, vectorize_text
from .loss import LossModel, curvature_bound, loss_gradient, loss_value
from .solver import (
    LassoSolution,
    RegParam,
    SolverOptions,
    fit_lasso,
    kkt_residual,
    null_threshold,
    solve_univariate,
)

__all__ = [
    "AlternatePair", "AlternateReport", "PartialPrediction", "find_alternates",
    "partial_prediction", "rank_alternates", "score_pair", "screen_candidates",
    "Dataset", "FeatureMatrix", "load_csv", "load_libsvm", "load_text", "vectorize_text",
    "LossModel", "curvature_bound", "loss_gradient", "loss_value",
    "LassoSolution", "RegParam", "SolverOptions", "fit_lasso", "kkt_residual",
    "null_threshold", "solve_univariate",
]
