import datetime as dt
from pathlib import Path

import pytest

from housecast.data import load_dataset
from housecast.models import ForecastInputs, InTroubleDefinition
from housecast.data import Party
from housecast.polls import PollWindow, filter_live, window_average_dem_share, window_average_margin

DATA_DIR = Path(__file__).resolve().parent.parent / "data" / "2018"


@pytest.fixture(scope="session")
def dataset():
    return load_dataset(DATA_DIR)


@pytest.fixture(scope="session")
def engine(dataset):
    from housecast.engine import Engine

    return Engine(dataset)


@pytest.fixture(scope="session")
def inputs_2018(dataset):
    manifest = dataset.manifest
    live = filter_live(dataset.polls)
    margin_window = PollWindow(**manifest.windows["generic_margin"])
    share_window = PollWindow(**manifest.windows["generic_dem_share"])
    raw = manifest.inputs
    return ForecastInputs(
        year=raw["year"],
        president_party=Party(raw["president_party"]),
        rep_seats_held=raw["rep_seats_held"],
        generic_margin_sep=window_average_margin(live, margin_window),
        generic_dem_share_early=window_average_dem_share(live, share_window),
        rdi_growth_h1=raw["rdi_growth_h1"],
        approval_june=raw["approval_june"],
        disapproval_june=raw["disapproval_june"],
        expert_seat_differential=raw["expert_seat_differential"],
        use_disapproval=raw["use_disapproval"],
        in_trouble_definition=InTroubleDefinition(raw["in_trouble_definition"]),
        expert_weight=raw["expert_weight"],
    )
