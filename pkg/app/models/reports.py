"""
Statistical result models - fits, tests, goodness of fit, validation, diagnostics
"""

from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, PrivateAttr


class FitResult(BaseModel):
    """Maximum-likelihood fit of a binomial logistic model"""

    response_name: str = "response"
    terms: List[str]
    coefficients: Dict[str, float]
    covariance: List[List[float]]
    log_likelihood: float
    null_log_likelihood: float
    deviance: float
    null_deviance: float
    n: int
    k: int
    iterations: int
    converged: bool
    separation_warning: bool = False
    step_halvings: int = 0
    deviance_trace: List[float] = []

    _design: Optional[np.ndarray] = PrivateAttr(default=None)
    _response: Optional[np.ndarray] = PrivateAttr(default=None)
    _offset: Optional[np.ndarray] = PrivateAttr(default=None)

    def attach_data(self, design: np.ndarray, response: np.ndarray, offset: Optional[np.ndarray] = None) -> "FitResult":
        self._design = design
        self._response = response
        self._offset = offset
        return self

    @property
    def has_data(self) -> bool:
        return self._design is not None and self._response is not None

    @property
    def design(self) -> np.ndarray:
        if self._design is None:
            raise ValueError("fit carries no design matrix")
        return self._design

    @property
    def response(self) -> np.ndarray:
        if self._response is None:
            raise ValueError("fit carries no response vector")
        return self._response

    @property
    def offset(self) -> np.ndarray:
        return self._offset if self._offset is not None else np.zeros(self.n)

    @property
    def beta(self) -> np.ndarray:
        return np.array([self.coefficients[t] for t in self.terms])

    @property
    def cov(self) -> np.ndarray:
        return np.array(self.covariance, dtype=float)

    @property
    def standard_errors(self) -> Dict[str, float]:
        se = np.sqrt(np.clip(np.diag(self.cov), 0.0, None))
        return dict(zip(self.terms, se.tolist()))

    @property
    def predictors(self) -> List[str]:
        return [t for t in self.terms if t != "(Intercept)"]

    def linear_predictor(self) -> np.ndarray:
        return self.design @ self.beta + self.offset


class CoefficientRow(BaseModel):
    term: str
    estimate: float
    se: float
    z: float
    p: float


class ChiSquareTest(BaseModel):
    label: str
    chi2: float
    df: int
    p: float


class OverallModelTest(BaseModel):
    """Overall model test reported in both likelihood-ratio and Wald forms"""

    lr: ChiSquareTest
    wald: ChiSquareTest


class HosmerLemeshowResult(BaseModel):
    chi2: float
    df: int
    p: float
    groups_requested: int
    groups_used: int
    collapsed: bool = False


class ClassificationResult(BaseModel):
    threshold: float
    accuracy: float
    true_positive: int
    false_positive: int
    true_negative: int
    false_negative: int


class RocCurve(BaseModel):
    fpr: List[float]
    tpr: List[float]
    thresholds: List[float]
    auc: float


class GofReport(BaseModel):
    r2_hosmer_lemeshow: float
    r2_cox_snell: float
    r2_nagelkerke: float
    r2_mcfadden: float
    hl_chi2: Optional[float] = None
    hl_df: Optional[int] = None
    hl_p: Optional[float] = None
    accuracy: Optional[float] = None
    auc: Optional[float] = None


class CvReport(BaseModel):
    k: int
    repeats: int
    accuracy: float
    accuracy_ci_95: Tuple[float, float]
    kappa: float
    nir: float
    nir_p: float
    correct: int
    total: int


class DiagnosticsReport(BaseModel):
    standardized_residuals: List[float]
    leverage: List[float]
    dfbetas: List[List[float]]
    cooks_distance: List[float]
    vif: Dict[str, float]
    mean_vif: float
    large_residuals: int = 0
    high_leverage: int = 0
    max_abs_dfbetas: float = 0.0
    max_cooks_distance: float = 0.0


class OddsRatioRow(BaseModel):
    term: str
    odds_ratio: float
    lower: Optional[float] = None
    upper: Optional[float] = None
    note: Optional[str] = None


class LedgerEntry(BaseModel):
    """One candidate model in the AIC_c selection ledger"""

    predictors: List[str]
    k: int
    aicc: float
    delta: float = 0.0
    relative_likelihood: float = 1.0
    akaike_weight: float = 0.0
    support: str = "substantial"


class SelectionResult(BaseModel):
    ledger: List[LedgerEntry]
    selected: List[str]
    minimum: List[str]
    full_delta: float
    rule: str
    lr_vs_minimum: Optional[ChiSquareTest] = None


class InteractionTest(BaseModel):
    term: str
    chi2: float
    df: int
    p: float
