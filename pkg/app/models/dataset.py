"""
Experiment dataset - coded predictors with the three binary responses
"""

import hashlib
from typing import List, Literal, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from app.core.exceptions import ModelMismatchError
from app.models.risk import PREDICTORS, RESPONSES, PredictorVector

ResponseName = Literal["challenged", "declined", "blocked"]

CSV_COLUMNS: Tuple[str, ...] = (
    "card", "website", "region", "value", "machine_data",
    "challenged", "declined", "blocked",
)


class Observation(BaseModel):
    """One executed (or imported) transaction"""

    x: PredictorVector
    challenged: int = Field(ge=0, le=1)
    declined: int = Field(ge=0, le=1)
    blocked: int = Field(ge=0, le=1)

    def csv_values(self) -> List[int]:
        return [
            self.x.card, self.x.website, self.x.region, self.x.value, self.x.machine_data,
            self.challenged, self.declined, self.blocked,
        ]


class Dataset(BaseModel):
    rows: List[Observation] = []
    response_name: ResponseName = "challenged"
    skipped: int = 0

    @property
    def n(self) -> int:
        return len(self.rows)

    def for_response(self, response: str) -> "Dataset":
        if response not in RESPONSES:
            raise ModelMismatchError(f"unknown response '{response}'", response=response)
        return self.model_copy(update={"response_name": response})

    def response(self) -> np.ndarray:
        return np.array([getattr(row, self.response_name) for row in self.rows], dtype=float)

    def design(self, terms: Sequence[str], intercept: bool = True) -> Tuple[np.ndarray, List[str]]:
        """Design matrix over main effects / product terms, intercept first"""
        for term in terms:
            for part in term.split(":"):
                if part not in PREDICTORS:
                    raise ModelMismatchError(f"unknown predictor '{part}'", predictor=part)
        columns = []
        names = []
        if intercept:
            columns.append(np.ones(self.n))
            names.append("(Intercept)")
        for term in terms:
            columns.append(np.array([row.x.term(term) for row in self.rows], dtype=float))
            names.append(term)
        if not columns:
            return np.empty((self.n, 0)), names
        return np.column_stack(columns), names

    def csv_text(self) -> str:
        lines = [",".join(CSV_COLUMNS)]
        lines.extend(",".join(str(v) for v in row.csv_values()) for row in self.rows)
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        """SHA-256 of the canonical CSV rendering"""
        return hashlib.sha256(self.csv_text().encode("utf-8")).hexdigest()
