/**
 * Wire types for the forecast API. These mirror the JSON the server
 * emits; the UI never computes forecasts itself, so everything numeric
 * here originates server-side.
 */

export type ModelId =
  | "generic_ballot"
  | "npdi"
  | "structure_x"
  | "seats_in_trouble";

/** One bin of the seat-change distribution. */
export interface DistributionBin {
  change: number;
  probability: number;
}

/** Echo of the resolved inputs a forecast was run with. */
export interface ForecastInputs {
  year: number;
  president_party: "D" | "R";
  rep_seats_held: number;
  generic_margin_sep: number | null;
  generic_dem_share_early: number | null;
  rdi_growth_h1: number | null;
  approval_june: number | null;
  disapproval_june: number | null;
  expert_seat_differential: number | null;
  use_disapproval: boolean;
  in_trouble_definition: "lean_or_worse" | "tossup_or_worse";
  expert_weight: number;
}

export interface OutputDocument {
  model_id: ModelId;
  inputs: ForecastInputs;
  rep_seat_change_point: number;
  distribution: DistributionBin[];
  prob_dem_control: number;
  dataset_digest: string;
  engine_version: string;
  seed: number | null;
}

/** Body of POST /api/forecast. n_sims and seed are accepted for npdi only. */
export interface ForecastRequest {
  model_id: ModelId;
  overrides?: Record<string, number | string | boolean>;
  n_sims?: number;
  seed?: number;
}

export interface Manifest {
  models: ModelId[];
  default_inputs: ForecastInputs;
  dataset_digest: string;
  election_date: string;
  engine_version: string;
  /** Plausible [min, max] per overridable field; sliders clamp to these. */
  ranges: Record<string, [number, number]>;
  simulation: {
    n_sims: number;
    seed: number;
    sigma_incumbent: number;
    sigma_open: number;
    freshman_surge: number;
    baseline_weight_house: number;
  };
}
