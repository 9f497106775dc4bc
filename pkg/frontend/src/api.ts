import type { ForecastRequest, Manifest, OutputDocument } from "./types.js";

/** HTTP failure from the forecast service, with the server's message. */
export class ApiError extends Error {
  status: number;
  detail: string;

  constructor(status: number, detail: string) {
    super(`${status}: ${detail}`);
    this.name = "ApiError";
    this.status = status;
    this.detail = detail;
  }
}

async function readError(res: Response): Promise<ApiError> {
  const body = await res.text();
  let detail = body || res.statusText;
  try {
    const parsed = JSON.parse(body);
    if (parsed && typeof parsed.detail === "string") detail = parsed.detail;
  } catch {
    // non-JSON error body, keep the raw text
  }
  return new ApiError(res.status, detail);
}

export async function fetchManifest(baseUrl: string): Promise<Manifest> {
  const res = await fetch(`${baseUrl}/api/manifest`);
  if (!res.ok) throw await readError(res);
  return (await res.json()) as Manifest;
}

export async function postForecast(
  baseUrl: string,
  request: ForecastRequest,
  signal?: AbortSignal,
): Promise<OutputDocument> {
  const res = await fetch(`${baseUrl}/api/forecast`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(request),
    signal,
  });
  if (!res.ok) throw await readError(res);
  return (await res.json()) as OutputDocument;
}
