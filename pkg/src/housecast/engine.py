"""Forecast plumbing shared by the command line and the HTTP service.

Loads a dataset directory, resolves default inputs from the manifest and
the poll fixture, applies key=value overrides, dispatches to a model, and
serializes the resulting document.
"""

import json

from dataclasses import dataclass

from . import __version__
from .data import Party, RatingSource, load_dataset
from .models import (
    ForecastInputs,
    InTroubleDefinition,
    ModelId,
    generic_ballot_forecast,
    seats_in_trouble_forecast,
    structure_x_forecast,
)
from .polls import (
    PollWindow,
    filter_live,
    window_average_dem_share,
    window_average_margin,
)
from .simulation import SimulationConfig, run_simulations


class UnknownModelError(ValueError):
    """Model id not in the catalog."""


class OverrideError(ValueError):
    """Override key unknown, or its value cannot be parsed."""


def parse_model_id(name: str) -> ModelId:
    try:
        return ModelId(str(name).replace("-", "_"))
    except ValueError:
        valid = ", ".join(m.value for m in ModelId)
        raise UnknownModelError(f"unknown model '{name}'; expected one of {valid}")


def _as_float(raw):
    if isinstance(raw, bool):
        raise ValueError("expected a number")
    if isinstance(raw, (int, float)):
        return float(raw)
    return float(str(raw).strip())


def _as_int(raw):
    if isinstance(raw, bool):
        raise ValueError("expected an integer")
    if isinstance(raw, int):
        return raw
    if isinstance(raw, float):
        if raw != int(raw):
            raise ValueError(f"expected an integer, got {raw}")
        return int(raw)
    return int(str(raw).strip())


def _as_bool(raw):
    if isinstance(raw, bool):
        return raw
    text = str(raw).strip().lower()
    if text in ("true", "false"):
        return text == "true"
    raise ValueError(f"expected true or false, got {raw!r}")


_OVERRIDE_PARSERS = {
    "year": _as_int,
    "president_party": lambda raw: Party(str(raw).strip()),
    "rep_seats_held": _as_int,
    "generic_margin_sep": _as_float,
    "generic_dem_share_early": _as_float,
    "rdi_growth_h1": _as_float,
    "approval_june": _as_float,
    "disapproval_june": _as_float,
    "expert_seat_differential": _as_int,
    "use_disapproval": _as_bool,
    "in_trouble_definition": lambda raw: InTroubleDefinition(str(raw).strip()),
    "expert_weight": _as_float,
}


def coerce_override(key: str, raw):
    parser = _OVERRIDE_PARSERS.get(key)
    if parser is None:
        raise OverrideError(f"unknown override field '{key}'")
    try:
        return parser(raw)
    except (ValueError, KeyError) as exc:
        raise OverrideError(f"override '{key}': {exc}")


def split_override_pair(pair: str):
    """Split a command-line KEY=VALUE override, leaving the value raw."""
    key, eq, raw = pair.partition("=")
    if not eq:
        raise OverrideError(f"override '{pair}' is not of the form KEY=VALUE")
    return key.strip(), raw


@dataclass(frozen=True)
class OutputDocument:
    """One forecast, ready for serialization.

    distribution maps Republican seat change to probability; seed is set
    only for the simulation-backed model.
    """

    model_id: str
    inputs: ForecastInputs
    rep_seat_change_point: float
    distribution: dict
    prob_dem_control: float
    dataset_digest: str
    engine_version: str
    seed: int | None


class Engine:
    """A loaded dataset plus everything needed to answer forecast requests.

    Instances are immutable in practice and safe to share across requests.
    """

    def __init__(self, dataset):
        self.dataset = dataset
        self._live_polls = filter_live(dataset.polls)
        self._windows = {
            name: PollWindow(**bounds)
            for name, bounds in dataset.manifest.windows.items()
        }
        self._cook_ratings = tuple(
            r for r in dataset.ratings if r.source is RatingSource.COOK
        )
        self._default_values = self._resolve_defaults()

    # -- input resolution ---------------------------------------------------

    def _poll_average(self, window_name: str, average):
        return average(self._live_polls, self._windows[window_name])

    def _resolve_defaults(self) -> dict:
        manifest = self.dataset.manifest
        values = dict(
            year=manifest.inputs["year"],
            president_party=Party(manifest.inputs["president_party"]),
            rep_seats_held=manifest.inputs["rep_seats_held"],
            rdi_growth_h1=manifest.inputs["rdi_growth_h1"],
            approval_june=manifest.inputs["approval_june"],
            disapproval_june=manifest.inputs["disapproval_june"],
            expert_seat_differential=manifest.inputs["expert_seat_differential"],
            use_disapproval=manifest.inputs["use_disapproval"],
            in_trouble_definition=InTroubleDefinition(
                manifest.inputs["in_trouble_definition"]
            ),
            expert_weight=manifest.inputs["expert_weight"],
        )
        # A window with no polls only matters once a model asks for it, so
        # leave the field unset here and raise at forecast time instead.
        for field, window_name, average in (
            ("generic_margin_sep", "generic_margin", window_average_margin),
            ("generic_dem_share_early", "generic_dem_share", window_average_dem_share),
        ):
            try:
                values[field] = self._poll_average(window_name, average)
            except ValueError:
                values[field] = None
        return values

    def default_inputs(self) -> ForecastInputs:
        return ForecastInputs(**self._default_values)

    def resolve_inputs(self, overrides=None) -> ForecastInputs:
        values = dict(self._default_values)
        for key, raw in dict(overrides or {}).items():
            values[key] = coerce_override(key, raw)
        return ForecastInputs(**values)

    def _history(self, model_id: ModelId):
        start = self.dataset.manifest.model_start_years[model_id.value]
        return [r for r in self.dataset.elections if r.year >= start]

    def _require_poll_field(self, inputs, field, window_name, average):
        # Re-running the average surfaces the empty-window error with the
        # window bounds in the message.
        if getattr(inputs, field) is None:
            self._poll_average(window_name, average)

    # -- forecasting --------------------------------------------------------

    def forecast(self, model, overrides=None, n_sims=None, seed=None):
        model_id = parse_model_id(model)
        if model_id is not ModelId.NPDI and (n_sims is not None or seed is not None):
            raise OverrideError("n_sims and seed apply to the npdi model only")
        inputs = self.resolve_inputs(overrides)
        history = self._history(model_id)

        if model_id is ModelId.NPDI:
            return self._npdi_document(inputs, history, n_sims, seed)

        if model_id is ModelId.GENERIC_BALLOT:
            self._require_poll_field(
                inputs, "generic_margin_sep", "generic_margin", window_average_margin
            )
            result = generic_ballot_forecast(history, inputs)
        elif model_id is ModelId.STRUCTURE_X:
            result = structure_x_forecast(history, inputs)
        else:
            result = seats_in_trouble_forecast(
                history, self._cook_ratings, inputs, inputs.in_trouble_definition
            )
        return OutputDocument(
            model_id=model_id.value,
            inputs=inputs,
            rep_seat_change_point=result.rep_seat_change_point,
            distribution=result.distribution,
            prob_dem_control=result.prob_dem_control,
            dataset_digest=self.dataset.digest,
            engine_version=__version__,
            seed=None,
        )

    def _npdi_document(self, inputs, history, n_sims, seed):
        self._require_poll_field(
            inputs,
            "generic_dem_share_early",
            "generic_dem_share",
            window_average_dem_share,
        )
        defaults = self.dataset.manifest.simulation
        config = SimulationConfig(
            seed=defaults["seed"] if seed is None else seed,
            sigma_incumbent=defaults["sigma_incumbent"],
            sigma_open=defaults["sigma_open"],
            freshman_surge=defaults["freshman_surge"],
            baseline_weight_house=defaults["baseline_weight_house"],
            n_sims=defaults["n_sims"] if n_sims is None else n_sims,
        )
        result = run_simulations(history, inputs, self.dataset.districts, config)
        return OutputDocument(
            model_id=ModelId.NPDI.value,
            inputs=inputs,
            rep_seat_change_point=result.mean_change,
            distribution=result.seat_histogram,
            prob_dem_control=result.prob_dem_control,
            dataset_digest=self.dataset.digest,
            engine_version=__version__,
            seed=config.seed,
        )

    # -- manifest view ------------------------------------------------------

    def manifest_payload(self) -> dict:
        manifest = self.dataset.manifest
        return {
            "models": [m.value for m in ModelId],
            "default_inputs": inputs_payload(self.default_inputs()),
            "dataset_digest": self.dataset.digest,
            "election_date": manifest.election_date.isoformat(),
            "engine_version": __version__,
            "ranges": manifest.ui_ranges,
            "simulation": dict(manifest.simulation),
        }


def load_engine(data_dir) -> Engine:
    return Engine(load_dataset(data_dir))


# -- serialization ----------------------------------------------------------


def inputs_payload(inputs: ForecastInputs) -> dict:
    return {
        "year": inputs.year,
        "president_party": inputs.president_party.value,
        "rep_seats_held": inputs.rep_seats_held,
        "generic_margin_sep": inputs.generic_margin_sep,
        "generic_dem_share_early": inputs.generic_dem_share_early,
        "rdi_growth_h1": inputs.rdi_growth_h1,
        "approval_june": inputs.approval_june,
        "disapproval_june": inputs.disapproval_june,
        "expert_seat_differential": inputs.expert_seat_differential,
        "use_disapproval": inputs.use_disapproval,
        "in_trouble_definition": inputs.in_trouble_definition.value,
        "expert_weight": inputs.expert_weight,
    }


def document_payload(doc: OutputDocument) -> dict:
    return {
        "model_id": doc.model_id,
        "inputs": inputs_payload(doc.inputs),
        "rep_seat_change_point": doc.rep_seat_change_point,
        "distribution": [
            {"change": change, "probability": doc.distribution[change]}
            for change in sorted(doc.distribution)
        ],
        "prob_dem_control": doc.prob_dem_control,
        "dataset_digest": doc.dataset_digest,
        "engine_version": doc.engine_version,
        "seed": doc.seed,
    }


def document_to_json(doc: OutputDocument) -> str:
    # repr-style floats survive a JSON round trip exactly.
    return json.dumps(document_payload(doc), sort_keys=True)


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def document_to_csv(doc: OutputDocument) -> str:
    lines = [
        f"# model_id={doc.model_id}",
        f"# rep_seat_change_point={_csv_cell(doc.rep_seat_change_point)}",
        f"# prob_dem_control={_csv_cell(doc.prob_dem_control)}",
        f"# dataset_digest={doc.dataset_digest}",
        f"# engine_version={doc.engine_version}",
        f"# seed={_csv_cell(doc.seed)}",
    ]
    for key, value in inputs_payload(doc.inputs).items():
        lines.append(f"# inputs.{key}={_csv_cell(value)}")
    lines.append("change,probability")
    for change in sorted(doc.distribution):
        lines.append(f"{change},{_csv_cell(doc.distribution[change])}")
    return "\n".join(lines) + "\n"
