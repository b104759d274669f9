"""
Experiment models - factorial design and the end-to-end replication report
"""

from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_validator

from app.models.reports import (
    CoefficientRow,
    CvReport,
    DiagnosticsReport,
    FitResult,
    GofReport,
    HosmerLemeshowResult,
    InteractionTest,
    OddsRatioRow,
    OverallModelTest,
    SelectionResult,
)

# A-priori power analysis settings reported for the 64-transaction design.
# Recorded for reference; nothing in the lab computes with them.
POWER_H1_PROBABILITY = 0.50
POWER_H0_PROBABILITY = 0.20
POWER_OTHER_PREDICTORS_R2 = 0.3
POWER_TARGET = 0.80
POWER_REQUIRED_N = 55
POWER_DETECTABLE_ODDS_RATIO = 4.0


class ExecutionMode(str, Enum):
    STATELESS = "stateless"
    STATEFUL = "stateful"


class DesignSpec(BaseModel):
    """Full crossing of the five manipulated factors"""

    machine_data: List[int] = [0, 1]
    value: List[int] = [0, 1]
    region: List[int] = [0, 1]
    website: List[int] = [0, 1]
    card: List[int] = [1, 2, 3, 4]
    replicates: int = Field(default=1, ge=1)

    @field_validator("machine_data", "value", "region", "website")
    @classmethod
    def check_binary_levels(cls, v: List[int]) -> List[int]:
        if not v or any(level not in (0, 1) for level in v) or len(set(v)) != len(v):
            raise ValueError(f"binary factor levels must be distinct values in {{0, 1}}, got {v}")
        return v

    @field_validator("card")
    @classmethod
    def check_card_levels(cls, v: List[int]) -> List[int]:
        if not v or any(level not in (1, 2, 3, 4) for level in v) or len(set(v)) != len(v):
            raise ValueError(f"card levels must be distinct ids in 1..4, got {v}")
        return v

    @property
    def cells(self) -> int:
        return len(self.machine_data) * len(self.value) * len(self.region) * len(self.website) * len(self.card)


class SelectedModel(BaseModel):
    """Tables for the selected model when it drops terms from the fitted one"""

    predictors: List[str]
    coefficients: List[CoefficientRow]
    overall: OverallModelTest
    aicc: float
    gof: GofReport
    hosmer_lemeshow: HosmerLemeshowResult
    odds_ratios: List[OddsRatioRow] = []


class ResponseSection(BaseModel):
    """Analysis of one dependent variable; `error` is set when the pipeline could not run"""

    response: str
    error: Optional[str] = None
    predictors: List[str] = []
    fit: Optional[FitResult] = None
    coefficients: List[CoefficientRow] = []
    overall: Optional[OverallModelTest] = None
    aicc: Optional[float] = None
    gof: Optional[GofReport] = None
    hosmer_lemeshow: Optional[HosmerLemeshowResult] = None
    odds_ratios: List[OddsRatioRow] = []
    cv: Optional[CvReport] = None
    diagnostics: Optional[DiagnosticsReport] = None
    selection: Optional[SelectionResult] = None
    selected_fit: Optional[FitResult] = None
    selected_model: Optional[SelectedModel] = None
    interactions: List[InteractionTest] = []


class ReplicationReport(BaseModel):
    n: int
    digest: str
    sections: Dict[str, ResponseSection]
    holm_adjusted: Dict[str, float] = {}
    seed: int = 0
