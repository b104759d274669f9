"""
Model selection - all-subsets AIC_c ledger with Akaike weights, the selection
rule, and likelihood-ratio screening of interactions
"""

import itertools
import math
from typing import Dict, List, Optional, Sequence, Tuple

from loguru import logger

from app.core.config import settings
from app.core.exceptions import RankDeficiencyError, UndefinedCorrectionError
from app.models.dataset import Dataset
from app.models.reports import FitResult, InteractionTest, LedgerEntry, SelectionResult
from app.models.risk import PREDICTORS
from app.stats.inference import aicc, likelihood_ratio_test
from app.stats.irls import fit_logistic

SUPPORT_LEVELS: Tuple[Tuple[float, str], ...] = (
    (2.0, "substantial"),
    (4.0, "moderate"),
    (7.0, "considerably less"),
)


def support_label(delta: float) -> str:
    for limit, label in SUPPORT_LEVELS:
        if delta <= limit:
            return label
    return "essentially none"


def subset_key(predictors: Sequence[str]) -> Tuple[str, ...]:
    return tuple(sorted(predictors))


def candidate_fits(data: Dataset, predictors: Optional[Sequence[str]] = None) -> Dict[Tuple[str, ...], FitResult]:
    """Fits of every subset of `predictors` (intercept always included)"""
    predictors = list(predictors or PREDICTORS)
    fits = {}
    for size in range(len(predictors) + 1):
        for subset in itertools.combinations(predictors, size):
            try:
                fits[subset_key(subset)] = fit_logistic(data, list(subset))
            except RankDeficiencyError:
                logger.warning(f"Skipping rank-deficient candidate {subset}")
    return fits


def candidate_ledger(
    data: Dataset,
    predictors: Optional[Sequence[str]] = None,
    fits: Optional[Dict[Tuple[str, ...], FitResult]] = None,
) -> List[LedgerEntry]:
    """AIC_c, delta, exp(-delta/2), Akaike weight and support label per candidate, best first"""
    predictors = list(predictors or PREDICTORS)
    fits = fits if fits is not None else candidate_fits(data, predictors)

    scored = []
    for key, fit in fits.items():
        try:
            scored.append((key, fit, aicc(fit)))
        except UndefinedCorrectionError:
            logger.warning(f"AIC_c undefined for candidate {key} at n={fit.n}")
    if not scored:
        return []

    best = min(score for _, _, score in scored)
    relative = [math.exp(-(score - best) / 2.0) for _, _, score in scored]
    total = sum(relative)

    order = {name: i for i, name in enumerate(predictors)}
    ledger = [
        LedgerEntry(
            predictors=sorted(key, key=lambda name: order.get(name, len(order))),
            k=fit.k,
            aicc=score,
            delta=score - best,
            relative_likelihood=rel,
            akaike_weight=rel / total,
            support=support_label(score - best),
        )
        for (key, fit, score), rel in zip(scored, relative)
    ]
    return sorted(ledger, key=lambda entry: (entry.aicc, entry.k))


def select_model(
    data: Dataset,
    predictors: Optional[Sequence[str]] = None,
    core: Optional[Sequence[str]] = None,
) -> Tuple[SelectionResult, Dict[Tuple[str, ...], FitResult]]:
    """
    Keep the full model when its delta <= SELECTION_FULL_MAX_DELTA, else the
    core model when its delta <= SELECTION_SUBSTANTIAL_DELTA, else the
    minimum-AIC_c model. The choice is compared to the minimum by LR test.
    """
    predictors = list(predictors or PREDICTORS)
    core = list(core if core is not None else settings.core_predictors)
    fits = candidate_fits(data, predictors)
    ledger = candidate_ledger(data, predictors, fits)
    by_key = {subset_key(entry.predictors): entry for entry in ledger}

    minimum = ledger[0]
    full = by_key.get(subset_key(predictors))
    core_entry = by_key.get(subset_key(core))

    if full is not None and full.delta <= settings.SELECTION_FULL_MAX_DELTA:
        selected, rule = full, f"full model (delta {full.delta:.2f} <= {settings.SELECTION_FULL_MAX_DELTA:g})"
    elif core_entry is not None and core_entry.delta <= settings.SELECTION_SUBSTANTIAL_DELTA:
        selected, rule = core_entry, f"core model with substantial support (delta {core_entry.delta:.2f})"
    else:
        selected, rule = minimum, "minimum AIC_c"

    lr = None
    selected_key, minimum_key = subset_key(selected.predictors), subset_key(minimum.predictors)
    if selected_key != minimum_key:
        if set(minimum_key) <= set(selected_key):
            lr = likelihood_ratio_test(fits[selected_key], fits[minimum_key])
        elif set(selected_key) <= set(minimum_key):
            lr = likelihood_ratio_test(fits[minimum_key], fits[selected_key])

    logger.info(f"✓ Selected {data.response_name} model {selected.predictors} by {rule}")
    result = SelectionResult(
        ledger=ledger,
        selected=selected.predictors,
        minimum=minimum.predictors,
        full_delta=full.delta if full is not None else math.inf,
        rule=rule,
        lr_vs_minimum=lr,
    )
    return result, fits


def interaction_screen(
    data: Dataset,
    base: Optional[Sequence[str]] = None,
    among: Sequence[str] = ("machine_data", "value", "region"),
) -> List[InteractionTest]:
    """LR test of each two-way interaction, and of the three-way one, against the main-effects model"""
    base = list(base or PREDICTORS)
    tests = []
    pairs = [f"{a}:{b}" for a, b in itertools.combinations(among, 2)]
    candidates = [(pair, base, base + [pair]) for pair in pairs]
    if len(among) == 3:
        candidates.append((":".join(among), base + pairs, base + pairs + [":".join(among)]))

    for term, reduced_terms, full_terms in candidates:
        try:
            reduced = fit_logistic(data, reduced_terms)
            full = fit_logistic(data, full_terms)
        except RankDeficiencyError:
            logger.warning(f"Interaction {term} not estimable on this design")
            continue
        test = likelihood_ratio_test(full, reduced)
        tests.append(InteractionTest(term=term, chi2=test.chi2, df=test.df, p=test.p))
    return tests
