"""
Goodness of fit - pseudo-R² family, Hosmer-Lemeshow C, classification accuracy, ROC
"""

import math
from typing import Optional

import numpy as np
from loguru import logger
from scipy import stats
from sklearn.metrics import confusion_matrix, roc_auc_score, roc_curve

from app.core.config import settings
from app.models.dataset import Dataset
from app.models.risk import RESPONSES
from app.models.reports import ClassificationResult, FitResult, GofReport, HosmerLemeshowResult, RocCurve
from app.stats.irls import fitted_probabilities, predict


def pseudo_r2(fit: FitResult) -> GofReport:
    """
    McFadden, Hosmer & Lemeshow (model chi2 / -2LL0, equal to McFadden),
    Cox & Snell and Nagelkerke R².
    """
    ll, ll0, n = fit.log_likelihood, fit.null_log_likelihood, fit.n
    mcfadden = 1.0 - ll / ll0 if ll0 else 0.0
    hosmer_lemeshow = (fit.null_deviance - fit.deviance) / fit.null_deviance if fit.null_deviance else 0.0
    cox_snell = 1.0 - math.exp(2.0 * (ll0 - ll) / n)
    max_cox_snell = 1.0 - math.exp(2.0 * ll0 / n)
    nagelkerke = cox_snell / max_cox_snell if max_cox_snell else 0.0
    return GofReport(
        r2_hosmer_lemeshow=hosmer_lemeshow,
        r2_cox_snell=cox_snell,
        r2_nagelkerke=nagelkerke,
        r2_mcfadden=mcfadden,
    )


def hl_statistic(probabilities: np.ndarray, outcomes: np.ndarray, groups: Optional[int] = None) -> HosmerLemeshowResult:
    """
    Hosmer-Lemeshow C over deciles of risk.

    Groups are bounded by quantiles of the fitted probabilities so tied values
    always share a group; when ties merge groups the df shrinks accordingly.
    """
    groups = groups or settings.HL_GROUPS
    p = np.asarray(probabilities, dtype=float)
    y = np.asarray(outcomes, dtype=float)
    if len(p) < groups:
        logger.warning(f"⚠️  {len(p)} rows for {groups} Hosmer-Lemeshow groups, using {len(p)}")
        groups = len(p)

    breaks = np.unique(np.quantile(p, np.linspace(0.0, 1.0, groups + 1)))
    index = np.clip(np.searchsorted(breaks, p, side="left") - 1, 0, None)

    statistic = 0.0
    used = 0
    for g in np.unique(index):
        members = index == g
        n_g = members.sum()
        observed = y[members].sum()
        expected = p[members].sum()
        denominator = expected * (1.0 - expected / n_g)
        if denominator > 0:
            statistic += (observed - expected) ** 2 / denominator
        used += 1

    collapsed = used < groups
    if collapsed:
        logger.warning(f"⚠️  Hosmer-Lemeshow groups collapsed from {groups} to {used} by tied fitted values")
    df = used - 2
    p_value = float(stats.chi2.sf(statistic, df)) if df > 0 else float("nan")
    return HosmerLemeshowResult(
        chi2=float(statistic),
        df=df,
        p=p_value,
        groups_requested=groups,
        groups_used=used,
        collapsed=collapsed,
    )


def hosmer_lemeshow_c(fit: FitResult, groups: Optional[int] = None) -> HosmerLemeshowResult:
    return hl_statistic(fitted_probabilities(fit), fit.response, groups)


def _probabilities_for(fit: FitResult, data: Optional[Dataset]):
    if data is None:
        return fitted_probabilities(fit), fit.response
    X, _ = data.design(fit.predictors, intercept="(Intercept)" in fit.terms)
    if fit.response_name in RESPONSES:
        data = data.for_response(fit.response_name)
    return predict(fit, X), data.response()


def classify_accuracy(fit: FitResult, data: Optional[Dataset] = None, threshold: float = 0.5) -> ClassificationResult:
    """Predict 1 iff p >= threshold"""
    p, y = _probabilities_for(fit, data)
    predicted = (p >= threshold).astype(int)
    tn, fp, fn, tp = confusion_matrix(y.astype(int), predicted, labels=[0, 1]).ravel()
    return ClassificationResult(
        threshold=threshold,
        accuracy=float((tp + tn) / len(y)),
        true_positive=int(tp),
        false_positive=int(fp),
        true_negative=int(tn),
        false_negative=int(fn),
    )


def roc(fit: FitResult, data: Optional[Dataset] = None) -> RocCurve:
    p, y = _probabilities_for(fit, data)
    fpr, tpr, thresholds = roc_curve(y.astype(int), p)
    return RocCurve(
        fpr=fpr.tolist(),
        tpr=tpr.tolist(),
        thresholds=np.minimum(thresholds, 1.0).tolist(),
        auc=float(roc_auc_score(y.astype(int), p)),
    )


def goodness_of_fit(fit: FitResult, groups: Optional[int] = None) -> GofReport:
    """Pseudo-R² family with the HL test, accuracy and AUC"""
    report = pseudo_r2(fit)
    hl = hosmer_lemeshow_c(fit, groups)
    return report.model_copy(
        update={
            "hl_chi2": hl.chi2,
            "hl_df": hl.df,
            "hl_p": hl.p,
            "accuracy": classify_accuracy(fit).accuracy,
            "auc": roc(fit).auc,
        }
    )
