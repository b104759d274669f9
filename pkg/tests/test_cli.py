import io
import sys

import pandas as pd
import pytest
from loguru import logger

from app.main import main
from tests.conftest import factorial_rows, make_dataset


@pytest.fixture(autouse=True)
def restore_logger():
    yield
    # main() binds loguru to the captured stderr
    logger.remove()
    logger.add(sys.stderr, level="WARNING")


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def frame(text):
    return pd.read_csv(io.StringIO(text))


@pytest.fixture
def dataset_csv(tmp_path, capsys):
    path = tmp_path / "d.csv"
    code = main(["--log-level", "ERROR", "simulate", "--preset", "published", "--seed", "7", "--out", str(path)])
    assert code == 0
    capsys.readouterr()
    return path


def test_simulate_writes_the_design(capsys, tmp_path):
    out = tmp_path / "d.csv"
    code, stdout = run(capsys, "simulate", "--preset", "published", "--seed", "7", "--replicates", "1", "--out", str(out))
    assert code == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 65
    assert lines[0] == "card,website,region,value,machine_data,challenged,declined,blocked"
    assert "rows: 64" in stdout


def test_simulate_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert run(capsys, "simulate", "--seed", "7", "--out", str(path))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_simulate_unknown_preset(capsys, tmp_path):
    code, _ = run(capsys, "simulate", "--preset", "nope", "--out", str(tmp_path / "d.csv"))
    assert code == 2
    assert not (tmp_path / "d.csv").exists()


def test_simulate_rejects_zero_replicates(capsys, tmp_path):
    assert run(capsys, "simulate", "--replicates", "0", "--out", str(tmp_path / "d.csv"))[0] == 2


def test_simulate_accepts_preset_alias(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, _ = run(capsys, "simulate", "--preset", "paper", "--seed", "7", "--replicates", "1", "--out", "d.csv")
    assert code == 0
    assert len((tmp_path / "d.csv").read_text(encoding="utf-8").splitlines()) == 65
    assert run(capsys, "simulate", "--preset", "published", "--seed", "7", "--replicates", "1", "--out", "e.csv")[0] == 0
    assert (tmp_path / "d.csv").read_bytes() == (tmp_path / "e.csv").read_bytes()


def test_fit_selected_predictors(capsys, dataset_csv):
    code, stdout = run(
        capsys, "fit", "--data", str(dataset_csv), "--response", "challenged",
        "--predictors", "value,region", "--format", "csv",
    )
    assert code == 0
    table = frame(stdout)
    assert len(table) == 3
    assert table.iloc[:, 0].tolist() == ["(Intercept)", "Value", "Region"]


def test_fit_text_has_model_note(capsys, dataset_csv):
    code, stdout = run(capsys, "fit", "--data", str(dataset_csv), "--response", "challenged", "--predictors", "region")
    assert code == 0
    assert "Overall Model: Wald χ²(1)" in stdout
    assert "(Nagelkerke)" in stdout


def test_fit_constant_response(capsys, tmp_path):
    path = tmp_path / "flat.csv"
    path.write_text(make_dataset(factorial_rows(lambda x, _: (x["region"], x["value"], 0))).csv_text(), encoding="utf-8")
    code, stdout = run(capsys, "fit", "--data", str(path), "--response", "blocked")
    assert code == 1
    assert stdout == ""


def test_fit_unknown_predictor(capsys, dataset_csv):
    code, _ = run(capsys, "fit", "--data", str(dataset_csv), "--response", "challenged", "--predictors", "colour")
    assert code == 2


def test_curves_vary_region(capsys):
    code, stdout = run(capsys, "curves", "--preset", "published", "--response", "challenged", "--vary", "region")
    assert code == 0
    table = frame(stdout)
    assert list(table.columns) == ["x", "probability"]
    assert table["probability"].tolist() == pytest.approx([0.0484, 0.252], abs=1e-3)


def test_curves_overlay(capsys):
    code, stdout = run(capsys, "curves", "--vary", "value", "--by", "region")
    assert code == 0
    table = frame(stdout)
    assert list(table.columns) == ["x", "probability", "group"]
    assert len(table) == 4


def test_curves_surface(capsys):
    code, stdout = run(capsys, "curves", "--vary", "card", "--surface", "value")
    assert code == 0
    assert len(frame(stdout)) == 8


def test_curves_zero_preset(capsys):
    code, stdout = run(capsys, "curves", "--preset", "zero", "--vary", "card")
    assert code == 0
    assert frame(stdout)["probability"].tolist() == pytest.approx([0.5] * 4)


def test_curves_fixed_and_varied(capsys):
    assert run(capsys, "curves", "--fixed", "region=1", "--vary", "region")[0] == 2


def test_cv_is_reproducible(capsys, dataset_csv):
    argv = ["cv", "--data", str(dataset_csv), "--response", "challenged", "--predictors", "region,value",
            "--k", "4", "--repeats", "2", "--seed", "3", "--format", "csv"]
    code, first = run(capsys, *argv)
    assert code == 0
    assert run(capsys, *argv)[1] == first
    assert frame(first)["total"].tolist() == [128]


def test_cv_more_folds_than_rows(capsys, dataset_csv):
    assert run(capsys, "cv", "--data", str(dataset_csv), "--response", "challenged", "--k", "100")[0] == 1


def test_import_reports_codes(capsys, dataset_csv):
    code, stdout = run(capsys, "import", str(dataset_csv))
    assert code == 0
    assert stdout.startswith("64 rows")


def test_presets_listing(capsys):
    code, stdout = run(capsys, "presets")
    assert code == 0
    assert stdout.split()[:3] == ["published", "published_full", "zero"]


def test_trace_prints_messages(capsys):
    code, stdout = run(capsys, "trace", "--seed", "1", "--machine-data", "1", "--region", "1")
    assert code == 0
    assert "conformant=True" in stdout


def test_trace_names_overwritten_tokens(capsys):
    code, stdout = run(capsys, "trace", "--seed", "1", "--machine-data", "1")
    assert code == 0
    overwritten = [line for line in stdout.splitlines() if line.startswith("# overwritten=")]
    assert len(overwritten) == 1
    tokens = overwritten[0].partition("=")[2].split(",")
    assert tokens and all(tokens)

    code, stdout = run(capsys, "trace", "--seed", "1", "--machine-data", "0")
    assert code == 0
    assert "# overwritten=" not in stdout


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["unknown"],
        ["fit", "--response", "challenged"],
        ["curves", "--vary", "colour"],
        ["simulate", "--mode", "sometimes", "--out", "x.csv"],
    ],
)
def test_bad_flags_exit_two(capsys, argv):
    assert run(capsys, *argv)[0] == 2
