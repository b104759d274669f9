import math

import numpy as np
import pytest
from scipy import stats

from app.core.exceptions import ModelMismatchError, NonNestedModelsError, UnboundedIntervalError, UndefinedCorrectionError
from app.stats.formatting import format_p
from app.stats.inference import (
    aic,
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
from app.stats.irls import fit_design
from tests.test_irls import two_by_two

TERMS = ["(Intercept)", "x1", "x2"]


def test_wald_rows(logistic_sample):
    X, y = logistic_sample()
    fit = fit_design(X, y, TERMS)
    for row in wald_inference(fit):
        assert row.z == pytest.approx(row.estimate / row.se)
        assert row.p == pytest.approx(2 * stats.norm.sf(abs(row.z)))


def test_wald_z_from_published_row():
    assert 1.893 / 0.727 == pytest.approx(2.604, abs=0.01)
    assert format_p(2 * stats.norm.sf(3.41)) == "<.001***"


def test_zero_estimate_has_unit_p():
    X, y = two_by_two(10, 10, 10, 10)
    row = wald_inference(fit_design(X, y, ["(Intercept)", "x"]))[1]
    assert row.z == pytest.approx(0.0, abs=1e-12)
    assert row.p == pytest.approx(1.0)


def test_lr_of_identical_models():
    X, y = two_by_two(12, 8, 5, 15)
    fit = fit_design(X, y, ["(Intercept)", "x"])
    test = likelihood_ratio_test(fit, fit)
    assert (test.chi2, test.df, test.p) == (0.0, 0, 1.0)


def test_lr_requires_nesting(logistic_sample):
    X, y = logistic_sample(n=300)
    a = fit_design(X[:, [0, 1]], y, ["(Intercept)", "x1"])
    b = fit_design(X[:, [0, 2]], y, ["(Intercept)", "x2"])
    with pytest.raises(NonNestedModelsError):
        likelihood_ratio_test(a, b)
    other = fit_design(X[:200, [0]], y[:200], ["(Intercept)"])
    with pytest.raises(NonNestedModelsError):
        likelihood_ratio_test(a, other)


def test_overall_model_forms(logistic_sample):
    X, y = logistic_sample()
    overall = overall_model_test(fit_design(X, y, TERMS))
    assert overall.lr.label == "LR" and overall.wald.label == "Wald"
    assert overall.lr.df == overall.wald.df == 2
    assert overall.lr.p < 0.001 and overall.wald.p < 0.001
    # both forms agree asymptotically
    assert overall.wald.chi2 == pytest.approx(overall.lr.chi2, rel=0.2)


def test_lr_noise_predictor_is_chi2_one():
    rng = np.random.default_rng(2718)
    statistics = []
    for _ in range(2000):
        n = 300
        x = rng.normal(size=n)
        y = (rng.random(n) < 0.4).astype(float)
        full = fit_design(np.column_stack([np.ones(n), x]), y, ["(Intercept)", "x"])
        reduced = fit_design(np.ones((n, 1)), y, ["(Intercept)"])
        statistics.append(likelihood_ratio_test(full, reduced).chi2)
    assert np.mean(statistics) == pytest.approx(1.0, rel=0.1)


def test_aicc_arithmetic():
    assert corrected_aic(10.0, 2, 10) == pytest.approx(11.714, abs=1e-3)
    assert corrected_aic(10.0, 2, 10**9) - 10.0 < 1e-6
    with pytest.raises(UndefinedCorrectionError):
        corrected_aic(10.0, 3, 4)


def test_aicc_of_fit_and_delta(logistic_sample):
    X, y = logistic_sample(n=400)
    full = fit_design(X, y, TERMS)
    reduced = fit_design(X[:, [0, 1]], y, ["(Intercept)", "x1"])
    assert aic(full) == pytest.approx(full.deviance + 6)
    delta, relative = aicc_delta(reduced, full)
    assert delta == pytest.approx(aicc(reduced) - aicc(full))
    assert relative == pytest.approx(math.exp(-delta / 2))


def test_profile_ci_contains_zero_for_null_effect():
    rng = np.random.default_rng(8)
    n = 4000
    x = rng.integers(0, 2, n).astype(float)
    y = (rng.random(n) < 0.3).astype(float)
    fit = fit_design(np.column_stack([np.ones(n), x]), y, ["(Intercept)", "x"])
    lower, upper = profile_ci(fit, "x")
    assert lower < 0 < upper
    assert math.exp(lower) < 1 < math.exp(upper)


def test_profile_ci_close_to_wald_for_large_n(logistic_sample):
    X, y = logistic_sample(n=5000)
    fit = fit_design(X, y, TERMS)
    se = fit.standard_errors["x1"]
    estimate = fit.coefficients["x1"]
    lower, upper = profile_ci(fit, "x1")
    z = stats.norm.ppf(0.975)
    assert lower == pytest.approx(estimate - z * se, rel=0.05)
    assert upper == pytest.approx(estimate + z * se, rel=0.05)
    # endpoints solve the deviance equation
    assert lower < estimate < upper


def test_profile_ci_unknown_term(logistic_sample):
    X, y = logistic_sample(n=300)
    with pytest.raises(ModelMismatchError):
        profile_ci(fit_design(X, y, TERMS), "x9")


def test_separated_coefficient_is_unbounded():
    X, y = two_by_two(20, 0, 8, 12)
    fit = fit_design(X, y, ["(Intercept)", "x"])
    with pytest.raises(UnboundedIntervalError) as info:
        profile_ci(fit, "x")
    assert info.value.direction == "upper"
    row = odds_ratio_table(fit)[1]
    assert row.lower is None and row.note == "unbounded (upper)"


def test_odds_ratio_table(logistic_sample):
    X, y = logistic_sample(n=1000)
    fit = fit_design(X, y, TERMS)
    for row in odds_ratio_table(fit):
        assert row.lower < row.odds_ratio < row.upper
        assert row.odds_ratio == pytest.approx(math.exp(fit.coefficients[row.term]))


@pytest.mark.parametrize(
    "p_values,expected",
    [
        ([0.2], [0.2]),
        ([0.01, 0.04, 0.03], [0.03, 0.06, 0.06]),
        ([0.0001, 0.0001, 0.0001], [0.0003, 0.0003, 0.0003]),
        ([0.5, 0.6], [1.0, 1.0]),
        ([], []),
    ],
)
def test_holm_adjust(p_values, expected):
    assert holm_adjust(p_values) == pytest.approx(expected)
