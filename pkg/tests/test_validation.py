import numpy as np
import pytest

from app.core.exceptions import DegenerateResponseError, FoldConstructionError
from app.stats.validation import repeated_kfold_cv
from tests.conftest import factorial_rows, make_dataset


def noisy_dataset(replicates=4, seed=11):
    rng = np.random.default_rng(seed)

    def responses(x, _):
        p = 1.0 / (1.0 + np.exp(-(-1.0 + 1.5 * x["region"] + 0.8 * x["value"])))
        return int(rng.random() < p), 0, 0

    return make_dataset(factorial_rows(responses, replicates))


def test_same_seed_same_report():
    data = noisy_dataset()
    a = repeated_kfold_cv(data, ["region", "value"], k=5, repeats=3, seed=42)
    b = repeated_kfold_cv(data, ["region", "value"], k=5, repeats=3, seed=42)
    assert a == b
    assert a.total == data.n * 3


def test_report_fields_are_consistent():
    data = noisy_dataset()
    report = repeated_kfold_cv(data, ["region", "value"], k=5, repeats=2, seed=1)
    assert report.accuracy == pytest.approx(report.correct / report.total)
    low, high = report.accuracy_ci_95
    assert low <= report.accuracy <= high
    y = data.response()
    assert report.nir == pytest.approx(max(y.mean(), 1 - y.mean()))
    assert 0.0 <= report.nir_p <= 1.0
    assert -1.0 <= report.kappa <= 1.0


def test_separable_data_is_classified_perfectly():
    data = make_dataset(factorial_rows(lambda x, _: (x["region"], 0, 0), replicates=2))
    report = repeated_kfold_cv(data, ["region", "value"], k=10, repeats=2, seed=0)
    assert report.accuracy >= 0.99
    assert report.kappa >= 0.98
    assert report.nir_p < 0.001


def test_more_folds_than_rows():
    rows = factorial_rows(lambda x, _: (x["region"], 0, 0))[:6]
    with pytest.raises(FoldConstructionError):
        repeated_kfold_cv(make_dataset(rows), ["region"], k=10, repeats=1)


def test_invalid_fold_settings():
    data = noisy_dataset()
    with pytest.raises(FoldConstructionError):
        repeated_kfold_cv(data, ["region"], k=1)
    with pytest.raises(FoldConstructionError):
        repeated_kfold_cv(data, ["region"], k=5, repeats=0)


def test_single_class_response():
    data = make_dataset(factorial_rows(lambda x, _: (0, 0, 0)))
    with pytest.raises(DegenerateResponseError):
        repeated_kfold_cv(data, ["region"], k=5, repeats=1)
