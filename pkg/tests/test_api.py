import json
import shutil
import subprocess
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from housecast.api import create_app

DATA_DIR = Path(__file__).resolve().parent.parent / "data" / "2018"


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(DATA_DIR))


def cli_document(*argv):
    result = subprocess.run(
        [sys.executable, "-m", "housecast", "forecast", *argv,
         "--data-dir", str(DATA_DIR)],
        capture_output=True, check=True,
    )
    return result.stdout.rstrip(b"\n")


def test_manifest_lists_the_catalog(client):
    response = client.get("/api/manifest")
    assert response.status_code == 200
    body = json.loads(response.content)
    assert body["models"] == [
        "generic_ballot", "npdi", "structure_x", "seats_in_trouble"
    ]
    assert body["default_inputs"]["rep_seats_held"] == 240
    assert "generic_margin_sep" in body["ranges"]
    assert len(body["dataset_digest"]) == 64


def test_manifest_is_stateless(client):
    assert client.get("/api/manifest").content == client.get("/api/manifest").content


def test_manifest_digest_tracks_fixture_bytes(client, tmp_path):
    copy = tmp_path / "2018"
    shutil.copytree(DATA_DIR, copy)
    polls = copy / "polls.csv"
    polls.write_text(polls.read_text().replace("45.0", "45.1", 1))
    modified = TestClient(create_app(copy))
    original_digest = json.loads(client.get("/api/manifest").content)["dataset_digest"]
    modified_digest = json.loads(
        modified.get("/api/manifest").content
    )["dataset_digest"]
    assert original_digest != modified_digest


def test_forecast_matches_cli_bytes(client):
    for model, argv in (
        ("generic_ballot", ("generic-ballot",)),
        ("structure_x", ("structure-x",)),
        ("seats_in_trouble", ("seats-in-trouble",)),
        ("npdi", ("npdi", "--sims", "400", "--seed", "11")),
    ):
        request = {"model_id": model}
        if model == "npdi":
            request.update(n_sims=400, seed=11)
        response = client.post("/api/forecast", json=request)
        assert response.status_code == 200
        assert response.content == cli_document(*argv)


def test_forecast_point_estimate(client):
    body = json.loads(
        client.post("/api/forecast", json={"model_id": "generic_ballot"}).content
    )
    assert -34.0 <= body["rep_seat_change_point"] <= -30.0


def test_degenerate_expert_weight_returns_the_differential(client):
    response = client.post(
        "/api/forecast",
        json={"model_id": "structure_x", "overrides": {"expert_weight": 1}},
    )
    body = json.loads(response.content)
    assert body["rep_seat_change_point"] == pytest.approx(-58.0)
    assert body["inputs"]["expert_seat_differential"] == -58


def test_unknown_model_is_400(client):
    response = client.post("/api/forecast", json={"model_id": "crystal_ball"})
    assert response.status_code == 400
    assert "crystal_ball" in response.json()["detail"]


def test_unknown_override_is_400(client):
    response = client.post(
        "/api/forecast",
        json={"model_id": "generic_ballot", "overrides": {"margin": -10}},
    )
    assert response.status_code == 400
    assert "margin" in response.json()["detail"]


def test_malformed_override_value_is_400(client):
    response = client.post(
        "/api/forecast",
        json={"model_id": "structure_x", "overrides": {"expert_weight": "heavy"}},
    )
    assert response.status_code == 400
    assert "expert_weight" in response.json()["detail"]


def test_unknown_request_field_is_400(client):
    response = client.post(
        "/api/forecast", json={"model_id": "npdi", "simulations": 100}
    )
    assert response.status_code == 400
    assert "simulations" in response.json()["detail"]


def test_precondition_failure_is_422(client):
    response = client.post(
        "/api/forecast",
        json={"model_id": "structure_x", "overrides": {"expert_weight": 2.0}},
    )
    assert response.status_code == 422
    assert "expert_weight" in response.json()["detail"]


def test_sims_cap(client):
    response = client.post(
        "/api/forecast", json={"model_id": "npdi", "n_sims": 100_001}
    )
    assert response.status_code == 400
    assert "100000" in response.json()["detail"]
    response = client.post(
        "/api/forecast", json={"model_id": "npdi", "n_sims": True}
    )
    assert response.status_code == 400


def test_sims_off_npdi_is_400(client):
    response = client.post(
        "/api/forecast", json={"model_id": "generic_ballot", "n_sims": 100}
    )
    assert response.status_code == 400


def test_concurrent_npdi_requests_are_identical(client):
    request = {"model_id": "npdi", "n_sims": 500, "seed": 3}

    def fetch(_):
        return client.post("/api/forecast", json=request).content

    with ThreadPoolExecutor(max_workers=8) as pool:
        bodies = list(pool.map(fetch, range(8)))
    assert all(body == bodies[0] for body in bodies)


def test_bundled_ui_is_served_when_present(tmp_path):
    ui = tmp_path / "dist"
    ui.mkdir()
    (ui / "index.html").write_text("<!doctype html><title>housecast</title>")
    client = TestClient(create_app(DATA_DIR, ui_dir=ui))
    page = client.get("/")
    assert page.status_code == 200
    assert b"housecast" in page.content
    # API routes keep precedence over the static mount.
    assert client.get("/api/manifest").status_code == 200
