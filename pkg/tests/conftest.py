"""
Shared fixtures: presets, stub engines, recorded fingerprints and small datasets
"""

import itertools

import numpy as np
import pytest

from app.core.config import settings
from app.models.dataset import Dataset, Observation
from app.models.risk import PredictorVector
from app.services.fixtures import HOLDER_HEADERS, holder_profile, recorded_fingerprint
from app.services.interceptor import build_request
from app.services.presets import get_preset
from app.services.risk_engine import RiskEngine


@pytest.fixture
def baseline():
    return get_preset("published")


@pytest.fixture
def zero_engine():
    return RiskEngine.constant()


@pytest.fixture
def recorded():
    return recorded_fingerprint("firefox_macos")


@pytest.fixture
def make_request(recorded):
    """Experiment request for one design cell, holder headers attached"""

    def factory(card=1, website=0, region="home", value="low", overwrite=False, **kwargs):
        return build_request(
            card=card,
            website=website,
            region_choice=region,
            value_choice=value,
            machine=holder_profile(),
            overwrite=recorded if overwrite else None,
            headers=HOLDER_HEADERS,
            **kwargs,
        )

    return factory


@pytest.fixture
def preset_dir(tmp_path, monkeypatch):
    monkeypatch.setattr(settings, "PRESET_DIR", str(tmp_path))
    return tmp_path


def make_dataset(rows, response="challenged"):
    """Dataset from (x-dict, challenged, declined, blocked) tuples"""
    return Dataset(
        rows=[
            Observation(x=PredictorVector(**x), challenged=c, declined=d, blocked=b)
            for x, c, d, b in rows
        ],
        response_name=response,
    )


def factorial_rows(responses, replicates=1):
    """Full 2x2x2x2x4 crossing with the three responses given per cell by `responses(x)`"""
    rows = []
    for card, website, region, value, machine_data in itertools.product(
        [1, 2, 3, 4], [0, 1], [0, 1], [0, 1], [0, 1]
    ):
        x = {"card": card, "website": website, "region": region, "value": value, "machine_data": machine_data}
        for replicate in range(replicates):
            rows.append((x, *responses(x, replicate)))
    return rows


@pytest.fixture
def logistic_sample():
    """Seeded sample from a known two-predictor logistic model"""

    def factory(n=2000, beta=(-0.5, 1.0, -0.8), seed=1):
        rng = np.random.default_rng(seed)
        x1 = rng.integers(0, 2, n).astype(float)
        x2 = rng.normal(size=n)
        X = np.column_stack([np.ones(n), x1, x2])
        p = 1.0 / (1.0 + np.exp(-(X @ np.asarray(beta))))
        y = (rng.random(n) < p).astype(float)
        return X, y

    return factory
