"""
Statistics module - logistic fitting, inference, goodness of fit, validation,
diagnostics and model selection
"""

from app.stats.irls import fit_design, fit_logistic, fitted_probabilities
from app.stats.inference import (
    aicc,
    aicc_delta,
    corrected_aic,
    holm_adjust,
    likelihood_ratio_test,
    odds_ratio_table,
    overall_model_test,
    profile_ci,
    wald_inference,
)
from app.stats.goodness import classify_accuracy, goodness_of_fit, hosmer_lemeshow_c, pseudo_r2, roc
from app.stats.validation import repeated_kfold_cv
from app.stats.diagnostics import diagnostics
from app.stats.selection import candidate_ledger, interaction_screen, select_model

__all__ = [
    "fit_design",
    "fit_logistic",
    "fitted_probabilities",
    "aicc",
    "aicc_delta",
    "corrected_aic",
    "holm_adjust",
    "likelihood_ratio_test",
    "odds_ratio_table",
    "overall_model_test",
    "profile_ci",
    "wald_inference",
    "classify_accuracy",
    "goodness_of_fit",
    "hosmer_lemeshow_c",
    "pseudo_r2",
    "roc",
    "repeated_kfold_cv",
    "diagnostics",
    "candidate_ledger",
    "interaction_screen",
    "select_model",
]
