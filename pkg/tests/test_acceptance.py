"""Acceptance gate: one test per published-value target.

Each test pins a headline number (or behavioral guarantee) of the four
models on the 2018 dataset, at the tolerance the reconstruction is
expected to hold.  Tolerances absorb fixture variation: the data files
are rebuilt from public sources, not the original authors' spreadsheets.
"""

import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
from fastapi.testclient import TestClient
from scipy import stats

from housecast.api import create_app
from housecast.engine import document_to_json
from housecast.models import npdi_free_intercept, npdi_national_vote
from housecast.regression import fit_ols
from housecast.simulation import SimulationConfig, simulate_election
from housecast.tdist import normal_quantile, student_t_quantile
from housecast.data import DistrictRecord, Incumbency, Party

DATA_DIR = Path(__file__).resolve().parent.parent / "data" / "2018"


def test_generic_ballot_seat_change(engine):
    doc = engine.forecast("generic-ballot")
    assert doc.rep_seat_change_point == pytest.approx(-32.0, abs=2.0)


def test_national_vote_share_and_free_intercept(dataset, inputs_2018):
    history = [r for r in dataset.elections if r.year >= 1946]
    vote = npdi_national_vote(history, inputs_2018)
    assert vote.dem_vote_share == pytest.approx(53.5, abs=0.3)
    assert npdi_free_intercept(history, inputs_2018) == pytest.approx(-0.14, abs=0.05)


def test_simulated_seat_change_and_determinism(engine):
    first = engine.forecast("npdi")
    assert first.seed is not None
    assert first.rep_seat_change_point == pytest.approx(-28.0, abs=2.0)
    second = engine.forecast("npdi")
    assert document_to_json(first) == document_to_json(second)


def test_structural_model_and_expert_blend(engine):
    structural = engine.forecast("structure-x", {"expert_weight": "0"})
    assert structural.rep_seat_change_point == pytest.approx(-28.0, abs=1.0)
    combined = engine.forecast("structure-x")
    assert combined.rep_seat_change_point == pytest.approx(-43.0, abs=1.0)
    disapproval = engine.forecast(
        "structure-x", {"expert_weight": "0", "use_disapproval": "true"}
    )
    shift = disapproval.rep_seat_change_point - structural.rep_seat_change_point
    assert shift == pytest.approx(-1.0, abs=1.0)


def test_seats_in_trouble_both_definitions(engine):
    lean = engine.forecast("seats-in-trouble")
    assert lean.rep_seat_change_point == pytest.approx(-68.0, abs=2.0)
    tossup = engine.forecast(
        "seats-in-trouble", {"in_trouble_definition": "tossup_or_worse"}
    )
    assert tossup.rep_seat_change_point == pytest.approx(-44.0, abs=3.0)


def test_property_suite(engine, dataset):
    # Least squares agrees with the normal equations on 100 random systems.
    rng = np.random.default_rng(314)
    for _ in range(100):
        n = int(rng.integers(8, 30))
        k = int(rng.integers(1, 4))
        x = rng.normal(size=(n, k))
        beta = rng.normal(size=k + 1)
        y = beta[0] + x @ beta[1:] + rng.normal(size=n)
        fit = fit_ols(x, y)
        design = np.column_stack([np.ones(n), x])
        brute = np.linalg.solve(design.T @ design, design.T @ y)
        assert np.max(np.abs(fit.coefficients - brute)) < 1e-8, "ols vs normal equations"

    # Quantiles: symmetric, zero median, and normal in the large-df limit.
    for df in (3, 16, 250):
        assert student_t_quantile(df, 0.5) == 0.0, "zero median"
        for p in (0.6, 0.9, 0.975, 0.999):
            low, high = student_t_quantile(df, 1.0 - p), student_t_quantile(df, p)
            assert abs(low + high) < 1e-9, "quantile symmetry"
    for p in (0.025, 0.2, 0.5, 0.8, 0.975):
        gap = student_t_quantile(10**6, p) - normal_quantile(p)
        assert abs(gap) < 1e-3, "normal limit"

    # Every produced seat distribution carries unit mass.
    documents = [
        engine.forecast("generic-ballot"),
        engine.forecast("structure-x"),
        engine.forecast("seats-in-trouble"),
        engine.forecast("npdi", n_sims=500),
    ]
    for doc in documents:
        assert abs(sum(doc.distribution.values()) - 1.0) <= 1e-9, doc.model_id

    # Monotone coupling under common random numbers, 50 swing pairs.
    config = SimulationConfig(
        seed=0, sigma_incumbent=4.2, sigma_open=6.8,
        freshman_surge=1.6, baseline_weight_house=0.5, n_sims=1,
    )
    swings = np.linspace(-6.0, 6.0, 50)
    deltas = np.linspace(0.05, 3.0, 50)
    for seed, (swing, delta) in enumerate(zip(swings, deltas)):
        rep_lo, _ = simulate_election(
            dataset.districts, swing, config, np.random.default_rng(seed)
        )
        rep_hi, _ = simulate_election(
            dataset.districts, swing + delta, config, np.random.default_rng(seed)
        )
        assert rep_hi <= rep_lo, "monotone coupling"

    # Three-district toy against closed-form normal tails at 100k sims.
    def district(did, share, incumbency):
        return DistrictRecord(
            district_id=did, dem_house_share_2016=share, contested_2016=True,
            dem_pres_share_2016=share, incumbency_2018=incumbency,
            freshman=False, uncontested_2018_winner=None,
        )

    toy = [
        district("P-01", 47.0, Incumbency.REP_INCUMBENT),
        district("P-02", 52.5, Incumbency.DEM_INCUMBENT),
        district("P-03", 50.2, Incumbency.OPEN),
    ]
    swing = 1.5
    baselines = np.array([47.0, 52.5, 50.2])
    sigmas = np.array([4.2, 4.2, 6.8])
    dem_win = stats.norm.cdf((baselines + swing - 50.0) / sigmas)
    n_sims = 100_000
    rng = np.random.default_rng(2718)
    wins = np.zeros(3)
    for _ in range(n_sims):
        _, winners = simulate_election(toy, swing, config, rng)
        for i in range(3):
            wins[i] += winners[i] is Party.D
    assert np.max(np.abs(wins / n_sims - dem_win)) < 0.01, "toy normal tails"


def test_cli_api_parity_all_models():
    client = TestClient(create_app(DATA_DIR))
    for model, cli_name in (
        ("generic_ballot", "generic-ballot"),
        ("npdi", "npdi"),
        ("structure_x", "structure-x"),
        ("seats_in_trouble", "seats-in-trouble"),
    ):
        cli = subprocess.run(
            [sys.executable, "-m", "housecast", "forecast", cli_name,
             "--data-dir", str(DATA_DIR)],
            capture_output=True, check=True,
        )
        api = client.post("/api/forecast", json={"model_id": model})
        assert api.status_code == 200
        assert api.content == cli.stdout.rstrip(b"\n"), model
        assert json.loads(api.content) == json.loads(cli.stdout), model
