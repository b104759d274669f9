"""
Risk-assessment models - coded predictors, logistic decision models, decisions
"""

from enum import Enum
from typing import Dict, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.core.exceptions import ModelMismatchError

PREDICTORS: Tuple[str, ...] = ("machine_data", "value", "region", "website", "card")
BINARY_PREDICTORS: Tuple[str, ...] = ("machine_data", "value", "region", "website")
RESPONSES: Tuple[str, ...] = ("challenged", "declined", "blocked")

# Row labels used by the published regression tables
DISPLAY_NAMES: Dict[str, str] = {
    "(Intercept)": "(Intercept)",
    "machine_data": "Machine.Data",
    "value": "Value",
    "region": "Region",
    "website": "Website",
    "card": "Card",
}


def display_name(term: str) -> str:
    """Table label of a design term, interactions joined with ':'"""
    return ":".join(DISPLAY_NAMES.get(part, part) for part in term.split(":"))


class PredictorVector(BaseModel):
    """Coded independent variables of one transaction"""

    model_config = ConfigDict(frozen=True)

    machine_data: int = Field(default=0, ge=0, le=1)
    value: int = Field(default=0, ge=0, le=1)
    region: int = Field(default=0, ge=0, le=1)
    website: int = Field(default=0, ge=0, le=1)
    card: int = Field(default=0, ge=0, le=4)

    def term(self, name: str) -> float:
        """Value of a main effect or a product term such as `machine_data:region`"""
        result = 1.0
        for part in name.split(":"):
            if part not in PREDICTORS:
                raise ModelMismatchError(f"unknown predictor '{part}'", predictor=part)
            result *= getattr(self, part)
        return result


class ModelSource(str, Enum):
    PRESET_PUBLISHED = "preset_published"
    FITTED = "fitted"
    CUSTOM = "custom"


class LogisticModel(BaseModel):
    """Named coefficient vector of one logistic decision model"""

    model_config = ConfigDict(frozen=True)

    name: str
    intercept: float
    coefficients: Dict[str, float] = {}
    source: ModelSource = ModelSource.CUSTOM

    @field_validator("coefficients")
    @classmethod
    def check_predictor_names(cls, v: Dict[str, float]) -> Dict[str, float]:
        unknown = [key for key in v if key not in PREDICTORS]
        if unknown:
            raise ModelMismatchError(
                f"coefficients name unknown predictors: {', '.join(unknown)}",
                unknown=unknown,
            )
        return v


class RiskModels(BaseModel):
    """The three ACS decision models evaluated on every transaction"""

    model_config = ConfigDict(frozen=True)

    name: str
    challenged: LogisticModel
    declined: LogisticModel
    blocked: LogisticModel

    def for_response(self, response: str) -> LogisticModel:
        if response not in RESPONSES:
            raise ModelMismatchError(f"unknown response '{response}'", response=response)
        return getattr(self, response)


class Verdict(str, Enum):
    FRICTIONLESS_ACCEPT = "frictionless_accept"
    CHALLENGE = "challenge"
    DECLINE = "decline"
    BLOCK = "block"


class Decision(BaseModel):
    model_config = ConfigDict(frozen=True)

    verdict: Verdict
    probabilities: Tuple[float, float, float]
    draws: Tuple[bool, bool, bool] = (False, False, False)

    @field_validator("probabilities")
    @classmethod
    def check_probabilities(cls, v: Tuple[float, float, float]) -> Tuple[float, float, float]:
        if any(not 0.0 <= p <= 1.0 for p in v):
            raise ValueError(f"probabilities must lie in [0, 1], got {v}")
        return v

    @property
    def challenge_required(self) -> bool:
        """ARes asks for a challenge whenever the challenge draw fired"""
        return self.draws[0]
