import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from housecast.cli import main

DATA_DIR = Path(__file__).resolve().parent.parent / "data" / "2018"


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def data_copy(tmp_path):
    copy = tmp_path / "2018"
    shutil.copytree(DATA_DIR, copy)
    return copy


def test_validate_clean_fixture(capsys):
    code, out, err = run_cli(capsys, "validate", "--data-dir", str(DATA_DIR))
    assert code == 0
    assert out == ""
    assert "ok:" in err and "435 districts" in err


def test_validate_flags_missing_district(capsys, data_copy):
    districts = data_copy / "districts.csv"
    lines = districts.read_text().splitlines()
    districts.write_text("\n".join(lines[:-1]) + "\n")
    code, out, err = run_cli(capsys, "validate", "--data-dir", str(data_copy))
    assert code == 1
    assert out == ""
    assert "434" in err


def test_validate_flags_duplicate_rating(capsys, data_copy):
    ratings = data_copy / "ratings.csv"
    first_row = ratings.read_text().splitlines()[1]
    with ratings.open("a") as handle:
        handle.write(first_row + "\n")
    code, out, err = run_cli(capsys, "validate", "--data-dir", str(data_copy))
    assert code == 1
    assert first_row.split(",")[0] in err


def test_forecast_prints_json_document(capsys):
    code, out, err = run_cli(
        capsys, "forecast", "generic-ballot", "--data-dir", str(DATA_DIR)
    )
    assert code == 0
    document = json.loads(out)
    assert -34.0 <= document["rep_seat_change_point"] <= -30.0
    assert document["model_id"] == "generic_ballot"


def test_forecast_set_overrides(capsys):
    code, out, _ = run_cli(
        capsys, "forecast", "structure-x", "--data-dir", str(DATA_DIR),
        "--set", "expert_weight=0",
    )
    assert code == 0
    point = json.loads(out)["rep_seat_change_point"]
    assert -29.0 <= point <= -27.0


def test_forecast_csv_format(capsys):
    code, out, _ = run_cli(
        capsys, "forecast", "seats-in-trouble", "--data-dir", str(DATA_DIR),
        "--format", "csv",
    )
    assert code == 0
    lines = out.splitlines()
    assert "change,probability" in lines
    data_rows = lines[lines.index("change,probability") + 1:]
    assert sum(float(row.split(",")[1]) for row in data_rows) == pytest.approx(1.0)


def test_unknown_model_is_an_error(capsys):
    code, out, err = run_cli(
        capsys, "forecast", "tea-leaves", "--data-dir", str(DATA_DIR)
    )
    assert code == 1
    assert out == ""
    assert "tea-leaves" in err


def test_unknown_override_is_an_error(capsys):
    code, out, err = run_cli(
        capsys, "forecast", "generic-ballot", "--data-dir", str(DATA_DIR),
        "--set", "margin=1",
    )
    assert code == 1
    assert out == ""
    assert "margin" in err


def test_malformed_override_is_an_error(capsys):
    code, out, err = run_cli(
        capsys, "forecast", "generic-ballot", "--data-dir", str(DATA_DIR),
        "--set", "generic_margin_sep",
    )
    assert code == 1
    assert "KEY=VALUE" in err


def test_sims_flag_rejected_off_npdi(capsys):
    code, out, err = run_cli(
        capsys, "forecast", "generic-ballot", "--data-dir", str(DATA_DIR),
        "--sims", "10",
    )
    assert code == 1
    assert out == ""
    assert "npdi" in err


def test_data_dir_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("HOUSECAST_DATA_DIR", str(DATA_DIR))
    code, out, _ = run_cli(capsys, "forecast", "seats-in-trouble")
    assert code == 0
    assert json.loads(out)["model_id"] == "seats_in_trouble"


def test_missing_data_dir(capsys, monkeypatch):
    monkeypatch.delenv("HOUSECAST_DATA_DIR", raising=False)
    code, out, err = run_cli(capsys, "validate")
    assert code == 2
    assert out == ""
    assert "HOUSECAST_DATA_DIR" in err


def test_npdi_runs_are_byte_identical():
    argv = [
        sys.executable, "-m", "housecast", "forecast", "npdi",
        "--data-dir", str(DATA_DIR), "--sims", "500", "--seed", "7",
    ]
    first = subprocess.run(argv, capture_output=True, check=True)
    second = subprocess.run(argv, capture_output=True, check=True)
    assert first.stdout == second.stdout
    assert json.loads(first.stdout)["seed"] == 7
