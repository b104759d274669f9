"""
Dataset CSV ingestion and export
"""

from pathlib import Path
from typing import Union

import pandas as pd
from loguru import logger

from app.core.exceptions import SchemaError
from app.models.dataset import CSV_COLUMNS, Dataset, Observation
from app.models.risk import BINARY_PREDICTORS, RESPONSES, PredictorVector

ALLOWED_CODES = {
    **{column: {"0", "1"} for column in BINARY_PREDICTORS + RESPONSES},
    "card": {"0", "1", "2", "3", "4"},
}


def parse_dataset(frame: pd.DataFrame) -> Dataset:
    """Validate a string-typed frame cell by cell; rows are numbered from 1 after the header"""
    columns = [str(c).strip() for c in frame.columns]
    unknown = [c for c in columns if c not in CSV_COLUMNS]
    if unknown:
        raise SchemaError(f"unknown column '{unknown[0]}'", column=unknown[0])
    missing = [c for c in CSV_COLUMNS if c not in columns]
    if missing:
        raise SchemaError(f"missing column '{missing[0]}'", column=missing[0])
    frame = frame.set_axis(columns, axis=1)

    rows = []
    for row_number, record in enumerate(frame.to_dict(orient="records"), start=1):
        codes = {}
        for column in CSV_COLUMNS:
            raw = record[column]
            value = "" if pd.isna(raw) else str(raw).strip()
            if value not in ALLOWED_CODES[column]:
                raise SchemaError(f"invalid coding '{value}'", row=row_number, column=column)
            codes[column] = int(value)
        rows.append(
            Observation(
                x=PredictorVector(**{name: codes[name] for name in ("machine_data", "value", "region", "website", "card")}),
                challenged=codes["challenged"],
                declined=codes["declined"],
                blocked=codes["blocked"],
            )
        )
    return Dataset(rows=rows)


def import_dataset(path: Union[str, Path]) -> Dataset:
    """Read and validate a dataset CSV, logging the row count and coding report"""
    path = Path(path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except FileNotFoundError as e:
        raise SchemaError(f"dataset not found: {path}") from e
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise SchemaError(f"unreadable dataset {path}: {e}") from e

    data = parse_dataset(frame)
    coding = {column: int(frame[column].astype(str).str.strip().eq("1").sum()) for column in RESPONSES}
    logger.info(f"✓ Imported {data.n} rows from {path}")
    logger.info(
        "Coding report: "
        + ", ".join(f"{column}={count}/{data.n}" for column, count in coding.items())
    )
    return data


def dataset_frame(data: Dataset) -> pd.DataFrame:
    return pd.DataFrame([row.csv_values() for row in data.rows], columns=list(CSV_COLUMNS))


def export_dataset(data: Dataset, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    dataset_frame(data).to_csv(path, index=False, lineterminator="\n")
    logger.info(f"✓ Wrote {data.n} rows to {path}")
    return path
