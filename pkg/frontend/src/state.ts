import type { ForecastRequest, ModelId, OutputDocument } from "./types.js";

/** Everything the explorer needs to redraw itself. */
export interface ExplorerState {
  model: ModelId;
  /** Sparse: only fields the user has touched; defaults stay server-side. */
  overrides: Record<string, number | string | boolean>;
  nSims: number;
  seed: number;
  lastDocument: OutputDocument | null;
  inFlight: boolean;
}

/**
 * Assemble the request body for the current state. n_sims/seed ride along
 * only for npdi; the server rejects them on the deterministic models.
 */
export function buildRequest(state: ExplorerState): ForecastRequest {
  const request: ForecastRequest = {
    model_id: state.model,
    overrides: { ...state.overrides },
  };
  if (state.model === "npdi") {
    request.n_sims = state.nSims;
    request.seed = state.seed;
  }
  return request;
}

export type SendForecast = (
  request: ForecastRequest,
  signal: AbortSignal,
) => Promise<OutputDocument>;

export interface SchedulerHooks {
  send: SendForecast;
  /** Called with a response that answers the latest request. */
  onDocument: (doc: OutputDocument, seq: number) => void;
  /** Called with a failure of the latest request (never for superseded ones). */
  onError: (error: unknown, seq: number) => void;
  /** Request-in-flight flag for busy styling. */
  onBusy?: (busy: boolean) => void;
  debounceMs?: number;
}

/**
 * Debounced, latest-wins dispatcher for forecast requests.
 *
 * Control changes funnel through request(); nothing is sent until the
 * values have been quiet for the debounce interval, so a slider drag
 * costs one request. Each send gets a sequence number and an
 * AbortController; issuing a newer request aborts the stale one, and a
 * response is delivered only when its number matches the newest issued,
 * so an out-of-order settle can never overwrite a newer document.
 */
export class ForecastScheduler {
  private readonly hooks: SchedulerHooks;
  private readonly debounceMs: number;
  private seq = 0;
  private pending: ForecastRequest | null = null;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private controller: AbortController | null = null;

  constructor(hooks: SchedulerHooks) {
    this.hooks = hooks;
    this.debounceMs = hooks.debounceMs ?? 250;
  }

  /** Queue a request behind the debounce window. */
  request(request: ForecastRequest): void {
    this.pending = request;
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      this.flush();
    }, this.debounceMs);
  }

  /** Send immediately (initial load, model switch, explicit buttons). */
  requestNow(request: ForecastRequest): void {
    this.pending = request;
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    this.flush();
  }

  /** Sequence number of the newest request issued so far. */
  get latestSeq(): number {
    return this.seq;
  }

  private flush(): void {
    const request = this.pending;
    if (request === null) return;
    this.pending = null;
    if (this.controller !== null) this.controller.abort();
    const controller = new AbortController();
    this.controller = controller;
    const id = ++this.seq;
    this.hooks.onBusy?.(true);
    this.hooks.send(request, controller.signal).then(
      (doc) => this.settle(id, controller, () => this.hooks.onDocument(doc, id)),
      (error) =>
        this.settle(id, controller, () => {
          if (!controller.signal.aborted) this.hooks.onError(error, id);
        }),
    );
  }

  private settle(id: number, controller: AbortController, deliver: () => void): void {
    // Stale settle: a newer request was issued after this one went out.
    if (id === this.seq) deliver();
    if (this.controller === controller) {
      this.controller = null;
      this.hooks.onBusy?.(false);
    }
  }
}
