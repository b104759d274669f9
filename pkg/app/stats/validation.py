"""
Repeated stratified k-fold cross-validation of the logistic classifier
"""

from typing import Optional, Sequence

import numpy as np
from loguru import logger
from scipy.stats import binomtest
from sklearn.metrics import cohen_kappa_score
from sklearn.model_selection import RepeatedStratifiedKFold

from app.core.config import settings
from app.core.exceptions import DegenerateResponseError, FoldConstructionError, RankDeficiencyError
from app.models.dataset import Dataset
from app.models.reports import CvReport
from app.stats.irls import fit_design, predict


def repeated_kfold_cv(
    data: Dataset,
    predictors: Sequence[str],
    k: Optional[int] = None,
    repeats: Optional[int] = None,
    seed: int = 0,
) -> CvReport:
    """
    Stratified folds reshuffled per repeat; accuracy and kappa pooled over
    every held-out prediction, Clopper-Pearson CI, one-sided exact test
    against the no-information rate.
    """
    k = settings.CV_FOLDS if k is None else k
    repeats = settings.CV_REPEATS if repeats is None else repeats
    X, terms = data.design(predictors)
    y = data.response()
    n = len(y)

    if k < 2:
        raise FoldConstructionError(f"need at least 2 folds, got {k}", k=k)
    if repeats < 1:
        raise FoldConstructionError(f"need at least 1 repetition, got {repeats}", repeats=repeats)
    if k > n:
        raise FoldConstructionError(f"k={k} folds exceed {n} rows", k=k, n=n)
    if np.all(y == y[0]):
        raise DegenerateResponseError(data.response_name, int(y[0]))

    splitter = RepeatedStratifiedKFold(n_splits=k, n_repeats=repeats, random_state=seed % 2**32)
    observed, predicted = [], []
    try:
        for fold, (train, test) in enumerate(splitter.split(X, y.astype(int))):
            if np.all(y[train] == y[train][0]):
                raise FoldConstructionError(
                    f"training fold {fold} holds a single response class",
                    fold=fold,
                )
            try:
                fit = fit_design(X[train], y[train], terms, response_name=data.response_name)
            except RankDeficiencyError as e:
                raise FoldConstructionError(f"training fold {fold} is rank deficient: {e.message}", fold=fold) from e
            observed.append(y[test].astype(int))
            predicted.append((predict(fit, X[test]) >= 0.5).astype(int))
    except ValueError as e:
        raise FoldConstructionError(f"cannot build {k} stratified folds: {e}", k=k) from e

    observed = np.concatenate(observed)
    predicted = np.concatenate(predicted)
    total = len(observed)
    correct = int((observed == predicted).sum())
    accuracy = correct / total

    interval = binomtest(correct, total).proportion_ci(confidence_level=0.95, method="exact")
    nir = float(max(y.mean(), 1.0 - y.mean()))
    nir_p = float(binomtest(correct, total, nir, alternative="greater").pvalue)
    kappa = float(cohen_kappa_score(observed, predicted))
    if np.isnan(kappa):
        kappa = 0.0

    logger.info(
        f"✓ {k}-fold CV x{repeats} on {data.response_name}: accuracy={accuracy:.3f} "
        f"[{interval.low:.3f}, {interval.high:.3f}], kappa={kappa:.3f}"
    )
    return CvReport(
        k=k,
        repeats=repeats,
        accuracy=accuracy,
        accuracy_ci_95=(float(interval.low), float(interval.high)),
        kappa=kappa,
        nir=nir,
        nir_p=nir_p,
        correct=correct,
        total=total,
    )
