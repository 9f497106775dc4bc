import { ApiError, fetchManifest, postForecast } from "./api.js";
import { DocumentError, chartModel, svgMarkup } from "./chart.js";
import { fmtPercent, fmtSeats, fmtValue } from "./format.js";
import { ForecastScheduler, buildRequest } from "./state.js";
import type { ExplorerState } from "./state.js";
import type { Manifest, ModelId, OutputDocument } from "./types.js";

const BASE = "";

const MODEL_LABELS: Record<ModelId, string> = {
  generic_ballot: "Generic ballot",
  npdi: "National polls + district sim",
  structure_x: "Structural + expert blend",
  seats_in_trouble: "Seats in trouble",
};

interface SliderSpec {
  field: string;
  label: string;
  models: ModelId[];
  step: number;
}

// Which slider belongs to which model; ranges come from the manifest.
const SLIDERS: SliderSpec[] = [
  {
    field: "generic_margin_sep",
    label: "September generic ballot margin (R minus D, pp)",
    models: ["generic_ballot"],
    step: 0.1,
  },
  {
    field: "rdi_growth_h1",
    label: "Real income growth, first half (%)",
    models: ["structure_x"],
    step: 0.1,
  },
  {
    field: "approval_june",
    label: "June presidential approval (%)",
    models: ["structure_x"],
    step: 0.5,
  },
  {
    field: "disapproval_june",
    label: "June presidential disapproval (%)",
    models: ["structure_x"],
    step: 0.5,
  },
  {
    field: "expert_weight",
    label: "Expert weight",
    models: ["structure_x"],
    step: 0.05,
  },
  {
    field: "expert_seat_differential",
    label: "Expert seat differential (R minus D in play)",
    models: ["structure_x"],
    step: 1,
  },
];

const UI_DEFAULT_SIMS = 2000;

const $ = <T extends HTMLElement>(sel: string): T => {
  const el = document.querySelector<T>(sel);
  if (!el) throw new Error(`missing element ${sel}`);
  return el;
};

let manifest: Manifest;
let scheduler: ForecastScheduler;

const state: ExplorerState = {
  model: "generic_ballot",
  overrides: {},
  nSims: UI_DEFAULT_SIMS,
  seed: 0,
  lastDocument: null,
  inFlight: false,
};

function showError(message: string): void {
  const banner = $("#error-banner");
  banner.textContent = message;
  banner.hidden = false;
  highlightFields(message);
}

function clearError(): void {
  $("#error-banner").hidden = true;
  highlightFields("");
}

/** Mark controls whose field name appears in the server's error message. */
function highlightFields(message: string): void {
  document.querySelectorAll<HTMLElement>("[data-field]").forEach((row) => {
    const field = row.dataset.field ?? "";
    row.classList.toggle("field-error", field !== "" && message.includes(field));
  });
}

function markPending(): void {
  $("#result").classList.add("stale");
}

function requestForecast(immediate = false): void {
  markPending();
  const req = buildRequest(state);
  if (immediate) scheduler.requestNow(req);
  else scheduler.request(req);
}

function setOverride(field: string, value: number | string | boolean): void {
  state.overrides[field] = value;
  requestForecast();
}

function renderDocument(doc: OutputDocument): void {
  state.lastDocument = doc;
  clearError();
  try {
    const bars = chartModel(doc);
    $("#chart").innerHTML = svgMarkup(bars, doc.inputs.rep_seats_held);
  } catch (err) {
    if (err instanceof DocumentError) {
      showError(`cannot render response: ${err.message}`);
      return;
    }
    throw err;
  }
  $("#point").textContent = fmtSeats(doc.rep_seat_change_point);
  $("#prob").textContent = fmtPercent(doc.prob_dem_control);
  const note = $("#doc-note");
  note.textContent =
    doc.seed === null
      ? `${MODEL_LABELS[doc.model_id]}`
      : `${MODEL_LABELS[doc.model_id]}, ${state.nSims.toLocaleString()} sims, seed ${doc.seed}`;
  $("#result").classList.remove("stale");
}

function buildTabs(): void {
  const tabs = $("#model-tabs");
  for (const model of manifest.models) {
    const button = document.createElement("button");
    button.type = "button";
    button.dataset.model = model;
    button.textContent = MODEL_LABELS[model] ?? model;
    button.addEventListener("click", () => selectModel(model));
    tabs.appendChild(button);
  }
}

function sliderRow(spec: SliderSpec, range: [number, number]): HTMLElement {
  const [lo, hi] = range;
  const row = document.createElement("div");
  row.className = "control";
  row.dataset.field = spec.field;
  row.dataset.models = spec.models.join(" ");

  const label = document.createElement("label");
  label.textContent = spec.label;
  const readout = document.createElement("span");
  readout.className = "value";
  const input = document.createElement("input");
  input.type = "range";
  input.min = String(lo);
  input.max = String(hi);
  input.step = String(spec.step);

  const fallback = (lo + hi) / 2;
  const defaults = manifest.default_inputs as unknown as Record<string, unknown>;
  const start = typeof defaults[spec.field] === "number" ? (defaults[spec.field] as number) : fallback;
  input.value = String(start);
  readout.textContent = fmtValue(Number(input.value), spec.step);

  input.addEventListener("input", () => {
    const value = Number(input.value);
    readout.textContent = fmtValue(value, spec.step);
    setOverride(spec.field, value);
  });

  label.appendChild(readout);
  row.append(label, input);
  return row;
}

function buildControls(): void {
  const host = $("#controls");
  for (const spec of SLIDERS) {
    const range = manifest.ranges[spec.field];
    if (!range) continue;
    host.appendChild(sliderRow(spec, range));
  }

  // approval vs disapproval: one structural predictor visible at a time
  const toggleRow = document.createElement("div");
  toggleRow.className = "control toggle";
  toggleRow.dataset.field = "use_disapproval";
  toggleRow.dataset.models = "structure_x";
  const toggleLabel = document.createElement("label");
  const toggle = document.createElement("input");
  toggle.type = "checkbox";
  toggle.id = "use-disapproval";
  toggle.addEventListener("change", () => {
    setOverride("use_disapproval", toggle.checked);
    syncApprovalRows(toggle.checked);
  });
  toggleLabel.append(toggle, document.createTextNode(" score the president by disapproval"));
  toggleRow.appendChild(toggleLabel);
  host.appendChild(toggleRow);

  const defRow = document.createElement("div");
  defRow.className = "control toggle";
  defRow.dataset.field = "in_trouble_definition";
  defRow.dataset.models = "seats_in_trouble";
  for (const value of ["lean_or_worse", "tossup_or_worse"]) {
    const label = document.createElement("label");
    const radio = document.createElement("input");
    radio.type = "radio";
    radio.name = "in-trouble";
    radio.value = value;
    radio.checked = value === manifest.default_inputs.in_trouble_definition;
    radio.addEventListener("change", () => {
      if (radio.checked) setOverride("in_trouble_definition", value);
    });
    label.append(radio, document.createTextNode(" " + value.replace(/_/g, " ")));
    defRow.appendChild(label);
  }
  host.appendChild(defRow);

  $("#reset").addEventListener("click", resetOverrides);
  syncApprovalRows(false);
}

function syncApprovalRows(useDisapproval: boolean): void {
  const approval = document.querySelector<HTMLElement>('[data-field="approval_june"]');
  const disapproval = document.querySelector<HTMLElement>('[data-field="disapproval_june"]');
  if (approval) approval.hidden = useDisapproval;
  if (disapproval) disapproval.hidden = !useDisapproval;
}

function buildSimPanel(): void {
  const [simLo, simHi] = manifest.ranges["n_sims"] ?? [100, 100000];
  const sims = $<HTMLInputElement>("#n-sims");
  sims.min = String(simLo);
  sims.max = String(simHi);
  sims.value = String(state.nSims);
  sims.addEventListener("change", () => {
    const value = Math.round(Number(sims.value));
    state.nSims = Math.min(simHi, Math.max(simLo, Number.isFinite(value) ? value : UI_DEFAULT_SIMS));
    sims.value = String(state.nSims);
    requestForecast();
  });

  const seed = $<HTMLInputElement>("#seed");
  seed.value = String(state.seed);
  seed.addEventListener("change", () => {
    const value = Math.round(Number(seed.value));
    state.seed = Number.isFinite(value) && value >= 0 ? value : manifest.simulation.seed;
    seed.value = String(state.seed);
    requestForecast();
  });

  $("#full-sims").addEventListener("click", () => {
    state.nSims = manifest.simulation.n_sims;
    sims.value = String(state.nSims);
    requestForecast(true);
  });
}

function selectModel(model: ModelId): void {
  state.model = model;
  document.querySelectorAll<HTMLButtonElement>("#model-tabs button").forEach((button) => {
    button.classList.toggle("active", button.dataset.model === model);
  });
  document.querySelectorAll<HTMLElement>("#controls .control").forEach((row) => {
    const models = (row.dataset.models ?? "").split(" ");
    row.classList.toggle("inactive", !models.includes(model));
    row.querySelectorAll("input").forEach((input) => {
      input.disabled = !models.includes(model);
    });
  });
  $("#sim-panel").hidden = model !== "npdi";
  requestForecast(true);
}

function resetOverrides(): void {
  state.overrides = {};
  const defaults = manifest.default_inputs as unknown as Record<string, unknown>;
  document.querySelectorAll<HTMLElement>("#controls .control").forEach((row) => {
    const field = row.dataset.field ?? "";
    const input = row.querySelector<HTMLInputElement>('input[type="range"]');
    if (input && typeof defaults[field] === "number") {
      input.value = String(defaults[field]);
      const readout = row.querySelector(".value");
      if (readout) readout.textContent = fmtValue(Number(input.value), Number(input.step));
    }
  });
  const toggle = document.querySelector<HTMLInputElement>("#use-disapproval");
  if (toggle) toggle.checked = false;
  syncApprovalRows(false);
  document.querySelectorAll<HTMLInputElement>('input[name="in-trouble"]').forEach((radio) => {
    radio.checked = radio.value === manifest.default_inputs.in_trouble_definition;
  });
  requestForecast(true);
}

async function boot(): Promise<void> {
  try {
    manifest = await fetchManifest(BASE);
  } catch (err) {
    showError(err instanceof ApiError ? `manifest: ${err.detail}` : String(err));
    return;
  }
  state.seed = manifest.simulation.seed;
  $("#meta").textContent =
    `election ${manifest.election_date}, engine ${manifest.engine_version}, ` +
    `dataset ${manifest.dataset_digest.slice(0, 12)}`;

  scheduler = new ForecastScheduler({
    send: (request, signal) => postForecast(BASE, request, signal),
    onDocument: (doc) => renderDocument(doc),
    onError: (error) => {
      showError(error instanceof ApiError ? error.detail : String(error));
      $("#result").classList.remove("stale");
    },
    onBusy: (busy) => {
      state.inFlight = busy;
      $("#result").classList.toggle("busy", busy);
    },
  });

  buildTabs();
  buildControls();
  buildSimPanel();
  selectModel("generic_ballot");
}

document.addEventListener("DOMContentLoaded", () => {
  void boot();
});
