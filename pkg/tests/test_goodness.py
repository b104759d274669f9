import numpy as np
import pytest

from app.stats.goodness import classify_accuracy, goodness_of_fit, hl_statistic, hosmer_lemeshow_c, pseudo_r2, roc
from app.stats.irls import fit_design, fitted_probabilities
from tests.test_irls import two_by_two


def test_null_model_has_zero_r2():
    X, y = two_by_two(6, 4, 3, 7)
    report = pseudo_r2(fit_design(X[:, :1], y, ["(Intercept)"]))
    assert report.r2_mcfadden == pytest.approx(0.0, abs=1e-12)
    assert report.r2_hosmer_lemeshow == pytest.approx(0.0, abs=1e-12)
    assert report.r2_cox_snell == pytest.approx(0.0, abs=1e-12)
    assert report.r2_nagelkerke == pytest.approx(0.0, abs=1e-12)


def test_r2_family_relations(logistic_sample):
    X, y = logistic_sample()
    report = pseudo_r2(fit_design(X, y, ["(Intercept)", "x1", "x2"]))
    assert report.r2_hosmer_lemeshow == pytest.approx(report.r2_mcfadden)
    assert 0 < report.r2_cox_snell <= report.r2_nagelkerke < 1
    assert 0 < report.r2_mcfadden < 1


def test_near_perfect_fit_approaches_one():
    X, y = two_by_two(20, 0, 0, 20)
    report = pseudo_r2(fit_design(X, y, ["(Intercept)", "x"]))
    assert report.r2_mcfadden > 0.99
    assert report.r2_nagelkerke > 0.99


def test_hl_on_well_calibrated_fits_is_chi2_eight():
    rng = np.random.default_rng(404)
    statistics = []
    for _ in range(200):
        n = 10_000
        x = rng.normal(size=n)
        X = np.column_stack([np.ones(n), x])
        y = (rng.random(n) < 1.0 / (1.0 + np.exp(-(-0.3 + 0.9 * x)))).astype(float)
        result = hosmer_lemeshow_c(fit_design(X, y, ["(Intercept)", "x"]))
        assert result.df == 8
        statistics.append(result.chi2)
    assert np.mean(statistics) == pytest.approx(8.0, rel=0.15)


def test_hl_rejects_miscalibrated_probabilities():
    rng = np.random.default_rng(5)
    p = rng.uniform(0.2, 0.9, size=5000)
    y = (rng.random(5000) < p).astype(float)
    assert hl_statistic(p**2, y).p < 0.05


def test_hl_collapses_tied_groups():
    # two distinct fitted values can only form two groups
    X, y = two_by_two(12, 8, 5, 15)
    result = hosmer_lemeshow_c(fit_design(X, y, ["(Intercept)", "x"]))
    assert result.collapsed
    assert result.groups_used == 2
    assert result.df == 0
    assert np.isnan(result.p)


def test_constant_half_probability_is_coin_flip_accuracy():
    X, y = two_by_two(10, 10, 10, 10)
    fit = fit_design(X[:, :1], y, ["(Intercept)"])
    assert fitted_probabilities(fit) == pytest.approx(np.full(40, 0.5))
    result = classify_accuracy(fit)
    assert result.accuracy == pytest.approx(0.5)
    # p >= 0.5 predicts 1
    assert result.true_positive == 20 and result.false_positive == 20


def test_confusion_counts_add_up(logistic_sample):
    X, y = logistic_sample(n=800)
    result = classify_accuracy(fit_design(X, y, ["(Intercept)", "x1", "x2"]))
    counts = result.true_positive + result.false_positive + result.true_negative + result.false_negative
    assert counts == 800
    assert result.accuracy == pytest.approx((result.true_positive + result.true_negative) / 800)


def test_roc_curve(logistic_sample):
    X, y = logistic_sample(n=1500)
    curve = roc(fit_design(X, y, ["(Intercept)", "x1", "x2"]))
    assert 0.5 < curve.auc <= 1.0
    assert curve.fpr[0] == 0.0 and curve.tpr[-1] == 1.0
    assert all(b >= a for a, b in zip(curve.fpr, curve.fpr[1:]))


def test_goodness_of_fit_bundle(logistic_sample):
    X, y = logistic_sample(n=1500)
    fit = fit_design(X, y, ["(Intercept)", "x1", "x2"])
    report = goodness_of_fit(fit)
    hl = hosmer_lemeshow_c(fit)
    assert report.hl_chi2 == pytest.approx(hl.chi2)
    assert report.hl_df == hl.df
    assert report.accuracy == pytest.approx(classify_accuracy(fit).accuracy)
    assert report.auc == pytest.approx(roc(fit).auc)
