"""
Inference on fitted logistic models - Wald and likelihood-ratio tests,
information criteria, profile-likelihood intervals, multiplicity adjustment
"""

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy import stats
from scipy.optimize import brentq

from app.core.config import settings
from app.core.exceptions import (
    ModelMismatchError,
    NonNestedModelsError,
    UnboundedIntervalError,
    UndefinedCorrectionError,
)
from app.models.reports import ChiSquareTest, CoefficientRow, FitResult, OddsRatioRow, OverallModelTest
from app.stats.irls import fit_design, log_likelihood

INTERCEPT = "(Intercept)"
MAX_BRACKET_STEPS = 40
MAX_PROFILE_DISTANCE = 50.0


def wald_inference(fit: FitResult) -> List[CoefficientRow]:
    """z = estimate / SE with two-sided normal p-values"""
    se = fit.standard_errors
    rows = []
    for term in fit.terms:
        estimate = fit.coefficients[term]
        z = estimate / se[term] if se[term] > 0 else 0.0
        rows.append(CoefficientRow(term=term, estimate=estimate, se=se[term], z=z, p=float(2.0 * stats.norm.sf(abs(z)))))
    return rows


def _check_nested(full: FitResult, reduced: FitResult) -> None:
    if not set(reduced.terms) <= set(full.terms):
        raise NonNestedModelsError(
            "reduced model terms are not a subset of the full model terms",
            full=full.terms,
            reduced=reduced.terms,
        )
    if full.n != reduced.n or not np.array_equal(full.response, reduced.response):
        raise NonNestedModelsError("models were not fitted on the same data", full_n=full.n, reduced_n=reduced.n)


def _chi2_test(label: str, statistic: float, df: int) -> ChiSquareTest:
    statistic = max(0.0, float(statistic))
    p = float(stats.chi2.sf(statistic, df)) if df > 0 else 1.0
    return ChiSquareTest(label=label, chi2=statistic if df > 0 else 0.0, df=df, p=p)


def likelihood_ratio_test(full: FitResult, reduced: FitResult) -> ChiSquareTest:
    """chi2 = deviance(reduced) - deviance(full) on the parameter-count difference"""
    _check_nested(full, reduced)
    return _chi2_test("LR", reduced.deviance - full.deviance, full.k - reduced.k)


def null_fit(fit: FitResult) -> FitResult:
    """Intercept-only refit on the data of `fit`"""
    if INTERCEPT not in fit.terms:
        return fit_design(np.empty((fit.n, 0)), fit.response, [], response_name=fit.response_name)
    column = fit.terms.index(INTERCEPT)
    return fit_design(fit.design[:, [column]], fit.response, [INTERCEPT], response_name=fit.response_name)


def wald_test(fit: FitResult, terms: Sequence[str]) -> ChiSquareTest:
    """Joint Wald test that the named coefficients are all zero"""
    if not terms:
        return _chi2_test("Wald", 0.0, 0)
    index = [fit.terms.index(term) for term in terms]
    beta = fit.beta[index]
    covariance = fit.cov[np.ix_(index, index)]
    try:
        statistic = float(beta @ np.linalg.solve(covariance, beta))
    except np.linalg.LinAlgError:
        statistic = float(beta @ np.linalg.pinv(covariance) @ beta)
    return _chi2_test("Wald", statistic, len(index))


def overall_model_test(fit: FitResult, null: Optional[FitResult] = None) -> OverallModelTest:
    """Overall model test in likelihood-ratio and Wald form"""
    null = null if null is not None else null_fit(fit)
    lr = likelihood_ratio_test(fit, null)
    wald = wald_test(fit, [term for term in fit.terms if term not in null.terms])
    return OverallModelTest(lr=lr, wald=wald)


def aic(fit: FitResult) -> float:
    return fit.deviance + 2.0 * fit.k


def corrected_aic(aic_value: float, k: int, n: int) -> float:
    """AIC + 2k(k+1)/(n-k-1)"""
    if n <= k + 1:
        raise UndefinedCorrectionError(f"AIC_c undefined for n={n}, k={k}", n=n, k=k)
    return aic_value + 2.0 * k * (k + 1) / (n - k - 1)


def aicc(fit: FitResult) -> float:
    return corrected_aic(aic(fit), fit.k, fit.n)


def aicc_delta(model: FitResult, reference: FitResult) -> Tuple[float, float]:
    """(AIC_c(model) - AIC_c(reference), exp(-delta / 2))"""
    if model.n != reference.n or not np.array_equal(model.response, reference.response):
        raise NonNestedModelsError("AIC_c differences need fits on the same data", n=model.n, reference_n=reference.n)
    delta = aicc(model) - aicc(reference)
    return delta, math.exp(-delta / 2.0)


def _profile_log_likelihood(fit: FitResult, column: int, value: float) -> float:
    X = fit.design
    others = [i for i in range(fit.k) if i != column]
    offset = fit.offset + X[:, column] * value
    if not others:
        return log_likelihood(np.empty((fit.n, 0)), fit.response, np.empty(0), offset)
    refit = fit_design(
        X[:, others],
        fit.response,
        [fit.terms[i] for i in others],
        offset=offset,
        response_name=fit.response_name,
    )
    return refit.log_likelihood


def profile_ci(fit: FitResult, coefficient: str, level: Optional[float] = None) -> Tuple[float, float]:
    """
    Profile-likelihood interval on a coefficient.

    Endpoints solve 2 * (LL_max - LL_profile(beta)) = chi2_1(level); exponentiate
    for the odds-ratio interval.
    """
    level = level if level is not None else settings.CONFIDENCE_LEVEL
    if coefficient not in fit.terms:
        raise ModelMismatchError(f"'{coefficient}' is not a term of the fit", coefficient=coefficient)

    column = fit.terms.index(coefficient)
    estimate = fit.coefficients[coefficient]
    se = fit.standard_errors[coefficient]
    if abs(estimate) > settings.SEPARATION_COEF_LIMIT or se > settings.SEPARATION_SE_LIMIT:
        raise UnboundedIntervalError(coefficient, "upper" if estimate > 0 else "lower")

    critical = float(stats.chi2.ppf(level, 1))

    def gap(value: float) -> float:
        return 2.0 * (fit.log_likelihood - _profile_log_likelihood(fit, column, value)) - critical

    limits = []
    for direction, sign in (("lower", -1.0), ("upper", 1.0)):
        step = max(se, 0.1)
        inner, outer = estimate, estimate + sign * step
        for _ in range(MAX_BRACKET_STEPS):
            if gap(outer) > 0:
                break
            if abs(outer - estimate) > MAX_PROFILE_DISTANCE:
                raise UnboundedIntervalError(coefficient, direction)
            inner, outer = outer, outer + sign * step
            step *= 2.0
        else:
            raise UnboundedIntervalError(coefficient, direction)
        a, b = sorted((inner, outer))
        limits.append(brentq(gap, a, b, xtol=settings.PROFILE_TOL))

    logger.debug(f"Profile interval for {coefficient}: [{limits[0]:.4f}, {limits[1]:.4f}]")
    return limits[0], limits[1]


def odds_ratio_table(fit: FitResult, level: Optional[float] = None) -> List[OddsRatioRow]:
    """Odds ratios with profile-likelihood limits; unbounded limits are reported, not raised"""
    rows = []
    for term in fit.terms:
        odds = math.exp(fit.coefficients[term]) if fit.coefficients[term] < 700 else math.inf
        try:
            lower, upper = profile_ci(fit, term, level)
            rows.append(OddsRatioRow(term=term, odds_ratio=odds, lower=math.exp(lower), upper=math.exp(upper)))
        except UnboundedIntervalError as e:
            rows.append(OddsRatioRow(term=term, odds_ratio=odds, note=f"unbounded ({e.direction})"))
    return rows


def holm_adjust(p_values: Sequence[float]) -> List[float]:
    """Step-down Holm adjustment, monotone and capped at 1"""
    p = np.asarray(p_values, dtype=float)
    m = len(p)
    if m == 0:
        return []
    order = np.argsort(p, kind="stable")
    adjusted = np.minimum(1.0, np.maximum.accumulate((m - np.arange(m)) * p[order]))
    result = np.empty(m)
    result[order] = adjusted
    return result.tolist()
