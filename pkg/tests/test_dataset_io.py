import pandas as pd
import pytest

from app.controllers.dataset_io import dataset_frame, export_dataset, import_dataset, parse_dataset
from app.core.exceptions import SchemaError
from app.models.dataset import CSV_COLUMNS
from tests.conftest import factorial_rows, make_dataset

HEADER = ",".join(CSV_COLUMNS)


def write(path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_import_valid_file(tmp_path):
    path = write(tmp_path / "d.csv", [HEADER, "1,0,1,1,0,1,1,0", "4,1,0,0,1,0,0,0"])
    data = import_dataset(path)
    assert data.n == 2
    first = data.rows[0]
    assert (first.x.card, first.x.region, first.x.value, first.challenged, first.declined) == (1, 1, 1, 1, 1)
    assert data.rows[1].x.machine_data == 1


def test_invalid_code_names_row_and_column(tmp_path):
    path = write(tmp_path / "d.csv", [HEADER, "1,0,1,1,0,1,1,0", "2,0,2,0,0,0,0,0"])
    with pytest.raises(SchemaError) as info:
        import_dataset(path)
    assert info.value.row == 2
    assert info.value.column == "region"


def test_card_out_of_range(tmp_path):
    path = write(tmp_path / "d.csv", [HEADER, "5,0,0,0,0,0,0,0"])
    with pytest.raises(SchemaError) as info:
        import_dataset(path)
    assert info.value.column == "card"


def test_unknown_and_missing_columns():
    with pytest.raises(SchemaError) as info:
        parse_dataset(pd.DataFrame([["1"] * 9], columns=list(CSV_COLUMNS) + ["country"], dtype=str))
    assert info.value.column == "country"
    with pytest.raises(SchemaError) as info:
        parse_dataset(pd.DataFrame([["1"] * 7], columns=list(CSV_COLUMNS[:-1]), dtype=str))
    assert info.value.column == "blocked"


def test_missing_file(tmp_path):
    with pytest.raises(SchemaError):
        import_dataset(tmp_path / "absent.csv")


def test_export_then_import_is_identical(tmp_path):
    data = make_dataset(factorial_rows(lambda x, r: (x["region"], x["value"] * r, 0), replicates=2))
    path = export_dataset(data, tmp_path / "out" / "d.csv")
    assert path.read_text(encoding="utf-8") == data.csv_text()
    again = import_dataset(path)
    assert again.digest() == data.digest()
    assert dataset_frame(again).equals(dataset_frame(data))
