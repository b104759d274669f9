"""
Binomial logistic regression by iteratively reweighted least squares
"""

from typing import List, Optional, Sequence

import numpy as np
from loguru import logger
from scipy.special import expit, log_expit

from app.core.config import settings
from app.core.exceptions import DegenerateResponseError, RankDeficiencyError
from app.models.dataset import Dataset
from app.models.reports import FitResult

ETA_LIMIT = 30.0
MIN_WEIGHT = 1e-12


def log_likelihood(X: np.ndarray, y: np.ndarray, beta: np.ndarray, offset: Optional[np.ndarray] = None) -> float:
    eta = X @ beta if X.shape[1] else np.zeros(len(y))
    if offset is not None:
        eta = eta + offset
    return float(np.sum(y * log_expit(eta) + (1.0 - y) * log_expit(-eta)))


def score(X: np.ndarray, y: np.ndarray, beta: np.ndarray, offset: Optional[np.ndarray] = None) -> np.ndarray:
    """Gradient of the log-likelihood, X'(y - p)"""
    eta = X @ beta if X.shape[1] else np.zeros(len(y))
    if offset is not None:
        eta = eta + offset
    return X.T @ (y - expit(eta))


def _null_log_likelihood(X: np.ndarray, y: np.ndarray, offset: np.ndarray) -> float:
    has_intercept = X.shape[1] > 0 and bool(np.any(np.all(X == 1.0, axis=0)))
    if has_intercept and not np.any(offset):
        p = y.mean()
        return float(len(y) * (p * np.log(p) + (1.0 - p) * np.log1p(-p)))
    return log_likelihood(np.empty((len(y), 0)), y, np.empty(0), offset)


def _covariance(X: np.ndarray, eta: np.ndarray) -> np.ndarray:
    mu = expit(np.clip(eta, -ETA_LIMIT, ETA_LIMIT))
    w = np.maximum(mu * (1.0 - mu), MIN_WEIGHT)
    information = X.T @ (w[:, None] * X)
    try:
        return np.linalg.inv(information)
    except np.linalg.LinAlgError:
        logger.warning("Information matrix singular, using pseudo-inverse")
        return np.linalg.pinv(information)


def fit_design(
    X: np.ndarray,
    y: np.ndarray,
    terms: Sequence[str],
    offset: Optional[np.ndarray] = None,
    response_name: str = "response",
) -> FitResult:
    """
    Maximum-likelihood fit of y ~ X (plus a fixed offset).

    IRLS from beta = 0 with step halving whenever the deviance increases;
    converged when the relative deviance change drops below IRLS_TOL.

    Args:
        X: n x k design matrix (include a column of ones for an intercept)
        y: 0/1 response vector
        terms: Column names of X
        offset: Fixed part of the linear predictor

    Returns:
        FitResult with the design, response and offset attached
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, k = X.shape
    offset_vec = np.zeros(n) if offset is None else np.asarray(offset, dtype=float)

    if n == 0 or np.all(y == y[0]):
        raise DegenerateResponseError(response_name, int(y[0]) if n else 0)
    if k and np.linalg.matrix_rank(X) < k:
        raise RankDeficiencyError(
            f"design matrix has rank {np.linalg.matrix_rank(X)} < {k} columns",
            terms=list(terms),
        )

    beta = np.zeros(k)
    deviance = -2.0 * log_likelihood(X, y, beta, offset_vec)
    trace: List[float] = [deviance]
    iterations = 0
    halvings = 0
    converged = k == 0

    while not converged and iterations < settings.IRLS_MAX_ITER:
        iterations += 1
        eta = X @ beta + offset_vec
        mu = expit(np.clip(eta, -ETA_LIMIT, ETA_LIMIT))
        w = np.maximum(mu * (1.0 - mu), MIN_WEIGHT)
        z = eta - offset_vec + (y - mu) / w

        sqrt_w = np.sqrt(w)
        candidate = np.linalg.lstsq(sqrt_w[:, None] * X, sqrt_w * z, rcond=None)[0]
        candidate_deviance = -2.0 * log_likelihood(X, y, candidate, offset_vec)

        step = 0
        while (
            not np.isfinite(candidate_deviance) or candidate_deviance > deviance * (1.0 + 1e-12) + 1e-12
        ) and step < settings.IRLS_MAX_HALVINGS:
            step += 1
            candidate = (beta + candidate) / 2.0
            candidate_deviance = -2.0 * log_likelihood(X, y, candidate, offset_vec)
        halvings += step

        if candidate_deviance > deviance * (1.0 + 1e-12) + 1e-12:
            logger.warning(f"Step halving could not reduce the deviance at iteration {iterations}")
            break

        change = abs(candidate_deviance - deviance) / (abs(candidate_deviance) + 0.1)
        beta, deviance = candidate, candidate_deviance
        trace.append(deviance)
        converged = change < settings.IRLS_TOL

    eta = X @ beta + offset_vec
    covariance = _covariance(X, eta) if k else np.empty((0, 0))
    se = np.sqrt(np.clip(np.diag(covariance), 0.0, None)) if k else np.empty(0)
    separation = bool(
        np.any(np.abs(beta) > settings.SEPARATION_COEF_LIMIT) or np.any(se > settings.SEPARATION_SE_LIMIT)
    )

    ll = -deviance / 2.0
    ll0 = _null_log_likelihood(X, y, offset_vec)
    fit = FitResult(
        response_name=response_name,
        terms=list(terms),
        coefficients={term: float(b) for term, b in zip(terms, beta)},
        covariance=covariance.tolist(),
        log_likelihood=ll,
        null_log_likelihood=ll0,
        deviance=deviance,
        null_deviance=-2.0 * ll0,
        n=n,
        k=k,
        iterations=iterations,
        converged=converged,
        separation_warning=separation,
        step_halvings=halvings,
        deviance_trace=trace,
    ).attach_data(X, y, None if offset is None else offset_vec)

    if not converged:
        logger.warning(f"⚠️  IRLS did not converge for {response_name} after {iterations} iterations")
    if separation:
        logger.warning(f"⚠️  Possible separation in {response_name} fit: |beta| > {settings.SEPARATION_COEF_LIMIT} or SE > {settings.SEPARATION_SE_LIMIT}")
    logger.debug(f"Fitted {response_name} ~ {' + '.join(terms)}: deviance={deviance:.4f}, iterations={iterations}")
    return fit


def fit_logistic(data: Dataset, predictors: Sequence[str]) -> FitResult:
    """Fit the dataset's response on an intercept plus `predictors`"""
    X, terms = data.design(predictors)
    return fit_design(X, data.response(), terms, response_name=data.response_name)


def fitted_probabilities(fit: FitResult) -> np.ndarray:
    return expit(fit.linear_predictor())


def predict(fit: FitResult, X: np.ndarray, offset: Optional[np.ndarray] = None) -> np.ndarray:
    eta = np.asarray(X, dtype=float) @ fit.beta
    if offset is not None:
        eta = eta + offset
    return expit(eta)
