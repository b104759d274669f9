"""
Case-wise influence diagnostics and variance inflation factors
"""

from typing import Dict, Optional

import numpy as np

from app.models.dataset import Dataset
from app.models.reports import DiagnosticsReport, FitResult
from app.stats.irls import fit_logistic, fitted_probabilities

INTERCEPT = "(Intercept)"


def variance_inflation(fit: FitResult) -> Dict[str, float]:
    """VIF from the correlation structure of the non-intercept coefficient covariance"""
    names = fit.predictors
    if not names:
        return {}
    if len(names) == 1:
        return {names[0]: 1.0}
    index = [fit.terms.index(name) for name in names]
    covariance = fit.cov[np.ix_(index, index)]
    scale = np.sqrt(np.diag(covariance))
    correlation = covariance / np.outer(scale, scale)
    vif = np.diag(np.linalg.inv(correlation))
    return {name: float(value) for name, value in zip(names, vif)}


def diagnostics(fit: FitResult, data: Optional[Dataset] = None) -> DiagnosticsReport:
    """
    Leverage from the weighted hat matrix, standardized Pearson residuals,
    one-step DFbetas scaled by the coefficient SE, Cook's distance and VIF.
    """
    if data is not None and not fit.has_data:
        fit = fit_logistic(data.for_response(fit.response_name), fit.predictors)

    X = fit.design
    y = fit.response
    p = fitted_probabilities(fit)
    w = p * (1.0 - p)
    covariance = fit.cov

    leverage = w * np.einsum("ij,jk,ik->i", X, covariance, X)
    leverage = np.clip(leverage, 0.0, 1.0)
    residual_scale = np.maximum(1.0 - leverage, np.finfo(float).eps)

    pearson = (y - p) / np.sqrt(np.maximum(w, np.finfo(float).tiny))
    standardized = pearson / np.sqrt(residual_scale)

    dfbeta = (X @ covariance) * ((y - p) / residual_scale)[:, None]
    se = np.sqrt(np.clip(np.diag(covariance), np.finfo(float).tiny, None))
    dfbetas = dfbeta / se

    cooks = standardized ** 2 * leverage / (fit.k * residual_scale)

    vif = variance_inflation(fit)
    return DiagnosticsReport(
        standardized_residuals=standardized.tolist(),
        leverage=leverage.tolist(),
        dfbetas=dfbetas.tolist(),
        cooks_distance=cooks.tolist(),
        vif=vif,
        mean_vif=float(np.mean(list(vif.values()))) if vif else 1.0,
        large_residuals=int(np.sum(np.abs(standardized) > 2.0)),
        high_leverage=int(np.sum(leverage > 2.0 * leverage.mean())),
        max_abs_dfbetas=float(np.max(np.abs(dfbetas))) if dfbetas.size else 0.0,
        max_cooks_distance=float(np.max(cooks)) if cooks.size else 0.0,
    )
