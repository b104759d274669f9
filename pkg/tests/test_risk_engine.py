import math

import numpy as np
import pytest

from app.core.exceptions import ModelMismatchError, ScenarioError
from app.models.risk import LogisticModel, PredictorVector, Verdict
from app.services.risk_engine import (
    PUBLISHED_TABLES,
    RiskEngine,
    assess,
    decide,
    linear_predictor,
    odds_ratio,
    outcome_probabilities,
    probability,
    scenario_curve,
    scenario_overlay,
    scenario_surface,
)


def expit(eta):
    return 1.0 / (1.0 + math.exp(-eta))


@pytest.mark.parametrize(
    "response,predictor,published",
    [
        ("challenged", "machine_data", 6.64),
        ("challenged", "value", 4.47),
        ("declined", "machine_data", 18.99),
        ("declined", "value", 29.88),
        ("declined", "region", 29.88),
    ],
)
def test_odds_ratios_match_published(baseline, response, predictor, published):
    assert odds_ratio(baseline.for_response(response), predictor) == pytest.approx(published, rel=0.005)


def test_odds_ratio_of_zero_coefficient():
    model = LogisticModel(name="m", intercept=0.3, coefficients={"value": 0.0})
    assert odds_ratio(model, "value") == 1.0


def test_odds_ratio_errors(baseline):
    with pytest.raises(ModelMismatchError):
        odds_ratio(baseline.challenged, "colour")
    with pytest.raises(ModelMismatchError):
        odds_ratio(baseline.blocked, "website")


def test_linear_predictor_examples(baseline):
    assert linear_predictor(baseline.challenged, PredictorVector()) == pytest.approx(-2.981)
    declined = PredictorVector(machine_data=1, value=1, region=1)
    assert linear_predictor(baseline.declined, declined) == pytest.approx(3.405)
    zero = LogisticModel(name="zero", intercept=0.0)
    assert linear_predictor(zero, PredictorVector(machine_data=1, card=4)) == 0.0


def test_odds_ratio_equals_unit_change_in_eta(baseline):
    base = PredictorVector(card=2)
    moved = PredictorVector(card=2, value=1)
    delta = linear_predictor(baseline.challenged, moved) - linear_predictor(baseline.challenged, base)
    assert math.exp(delta) == pytest.approx(odds_ratio(baseline.challenged, "value"))


def test_unknown_coefficient_is_rejected():
    with pytest.raises(ModelMismatchError):
        LogisticModel(name="bad", intercept=0.0, coefficients={"colour": 1.0})


@pytest.mark.parametrize(
    "response,x,published",
    [
        ("challenged", {}, 0.0484),
        ("challenged", {"region": 1}, 0.2534),
        ("challenged", {"region": 1, "value": 1}, 0.601),
        ("declined", {"machine_data": 1, "value": 1, "region": 1}, 0.968),
    ],
)
def test_scenario_probabilities(baseline, response, x, published):
    model = baseline.for_response(response)
    p = probability(model, PredictorVector(**x))
    assert p == pytest.approx(expit(linear_predictor(model, PredictorVector(**x))), abs=1e-12)
    assert p == pytest.approx(published, abs=2e-3)


def test_probability_symmetry():
    up = LogisticModel(name="up", intercept=1.3)
    down = LogisticModel(name="down", intercept=-1.3)
    assert probability(up, PredictorVector()) == pytest.approx(1.0 - probability(down, PredictorVector()))
    assert probability(LogisticModel(name="z", intercept=0.0), PredictorVector()) == 0.5


def test_positive_coefficients_never_decrease_probability(baseline):
    model = baseline.declined
    for name in ("machine_data", "value", "region", "website"):
        assert probability(model, PredictorVector(**{name: 1})) >= probability(model, PredictorVector())


@pytest.mark.parametrize(
    "draws,verdict",
    [
        ((True, True, True), Verdict.BLOCK),
        ((False, False, False), Verdict.FRICTIONLESS_ACCEPT),
        ((True, False, False), Verdict.CHALLENGE),
        ((True, True, False), Verdict.DECLINE),
        ((False, False, True), Verdict.BLOCK),
    ],
)
def test_decision_precedence(draws, verdict):
    assert decide(draws) == verdict


def test_assess_is_deterministic_per_seed(baseline):
    x = PredictorVector(region=1, value=1, card=1)
    assert assess(x, baseline, 5) == assess(x, baseline, 5)
    decision = assess(x, baseline, 5)
    assert decision.probabilities[0] == pytest.approx(probability(baseline.challenged, x))
    assert decision.challenge_required == decision.draws[0]


def test_empirical_frequencies_converge(baseline):
    x = PredictorVector(region=1, value=1, machine_data=1, card=2)
    n = 100_000
    rng = np.random.default_rng(17)
    counts = np.zeros(3)
    for _ in range(n):
        counts += assess(x, baseline, rng).draws
    for observed, p in zip(counts / n, assess(x, baseline, 0).probabilities):
        se = math.sqrt(p * (1 - p) / n)
        assert abs(observed - p) <= 3 * se + 1e-12


def test_constant_engine():
    engine = RiskEngine.constant(challenge=1.0)
    decision = engine.assess(PredictorVector(card=3), 0)
    assert decision.verdict == Verdict.CHALLENGE
    assert decision.probabilities == (1.0, 0.0, 0.0)


def test_outcome_probabilities(baseline):
    x = PredictorVector(region=1, value=1)
    p = outcome_probabilities(x, baseline)
    assert p["blocked"] <= p["declined"]
    assert p["accepted"] == pytest.approx(1.0 - p["declined"])


def test_scenario_curve_region(baseline):
    points = scenario_curve(baseline.challenged, "region")
    assert [x for x, _ in points] == [0.0, 1.0]
    assert points[0][1] == pytest.approx(expit(-2.981))
    assert points[1][1] == pytest.approx(expit(-1.088))


def test_scenario_curve_with_fixed_region(baseline):
    points = dict(scenario_curve(baseline.challenged, "value", {"region": 1}))
    assert points[1.0] == pytest.approx(0.601, abs=1e-3)


def test_zero_model_curve_is_flat():
    points = scenario_curve(LogisticModel(name="zero", intercept=0.0), "card")
    assert [p for _, p in points] == [0.5] * 4
    assert [x for x, _ in points] == [1.0, 2.0, 3.0, 4.0]


def test_scenario_curve_refuses_fixed_predictor(baseline):
    with pytest.raises(ScenarioError):
        scenario_curve(baseline.challenged, "region", {"region": 1})
    assert scenario_curve(baseline.challenged, "region", {"region": 1}, override=True)[0][0] == 0.0
    with pytest.raises(ScenarioError):
        scenario_curve(baseline.challenged, "colour")


def test_overlay_by_region(baseline):
    rows = scenario_overlay(baseline.challenged, "value", "region")
    assert len(rows) == 4
    assert sorted({group for _, _, group in rows}) == [0.0, 1.0]
    assert rows[3][1] == pytest.approx(0.601, abs=1e-3)


def test_surface(baseline):
    rows = scenario_surface(baseline.declined, "value", "region", {"machine_data": 1})
    assert len(rows) == 4
    assert rows[-1] == (1.0, 1.0, pytest.approx(expit(3.405)))
    with pytest.raises(ScenarioError):
        scenario_surface(baseline.declined, "value", "value")


def test_published_tables_consistent_with_presets(baseline):
    for response in ("challenged", "declined", "blocked"):
        model = baseline.for_response(response)
        table = PUBLISHED_TABLES[response]
        assert model.intercept == table["(Intercept)"]["estimate"]
        for name, beta in model.coefficients.items():
            assert beta == table[name]["estimate"]
