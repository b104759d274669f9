"""
Error hierarchy for the lab.

Every error carries a process exit code (1 data/runtime, 2 usage) and a
structured `detail` dict that the CLI prints.
"""

from typing import Any, Dict, Optional


class LabError(Exception):
    """Base class for all lab errors"""

    exit_code: int = 1

    def __init__(self, message: str, **detail: Any):
        super().__init__(message)
        self.message = message
        self.detail: Dict[str, Any] = {"error": message, **detail}


class UsageError(LabError):
    """Bad flags or names on the command line"""

    exit_code = 2


class ConfigurationError(LabError):
    """Unknown card, website, preset or malformed settings"""


class MalformedPayloadError(LabError):
    """Fingerprint payload is not valid base-64 UTF-8 text"""


class CardBlockedError(LabError):
    """Transaction attempted on a blocked card in stateful mode"""

    def __init__(self, card_id: int):
        super().__init__(f"card {card_id} is blocked", card_id=card_id)
        self.card_id = card_id


class ModelMismatchError(LabError):
    """Predictor name unknown to a model or to the predictor vector"""


class ScenarioError(UsageError):
    """Scenario curve asks to vary a predictor that is held fixed"""


class DegenerateResponseError(LabError):
    """Response column has a single class"""

    def __init__(self, response: str, value: int):
        super().__init__("degenerate response", response=response, constant_value=value)


class RankDeficiencyError(LabError):
    """Design matrix is not of full column rank"""


class NonNestedModelsError(LabError):
    """Models compared are not nested fits on the same data"""


class UndefinedCorrectionError(LabError):
    """AIC_c small-sample correction undefined for n <= k + 1"""


class UnboundedIntervalError(LabError):
    """Profile-likelihood interval does not close on one side"""

    def __init__(self, coefficient: str, direction: str):
        super().__init__(
            f"profile interval for '{coefficient}' is unbounded ({direction})",
            coefficient=coefficient,
            direction=direction,
        )
        self.coefficient = coefficient
        self.direction = direction


class FoldConstructionError(LabError):
    """Cross-validation folds could not be built"""


class SchemaError(LabError):
    """Dataset file does not match the CSV schema"""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column '{column}'")
        text = f"{message} ({', '.join(location)})" if location else message
        super().__init__(text, row=row, column=column)
        self.row = row
        self.column = column


class SeparationDetected(LabError):
    """Generated sample is separated; raised to trigger regeneration"""
