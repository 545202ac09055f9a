// Thin fetch client for the ranking service. No ranking logic lives here:
// every number the UI shows comes back verbatim in these responses.

import type { SimulateRequestWire, SimulateResponseWire } from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`service error ${status}: ${detail}`);
  }
}

async function parseDetail(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (typeof body?.detail === "string") return body.detail;
    return JSON.stringify(body?.detail ?? body);
  } catch {
    return response.statusText;
  }
}

export class ApiClient {
  constructor(private readonly baseUrl: string) {}

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) {
      throw new ApiError(response.status, await parseDetail(response));
    }
    return (await response.json()) as T;
  }

  simulate(request: SimulateRequestWire): Promise<SimulateResponseWire> {
    return this.post("/simulate", request);
  }

  refine(sessionId: string, kept: string[]): Promise<SimulateResponseWire> {
    return this.post(`/sessions/${sessionId}/refine`, { kept });
  }

  async node(ref: string): Promise<unknown> {
    const response = await fetch(
      `${this.baseUrl}/nodes/${encodeURIComponent(ref)}`,
    );
    if (!response.ok) {
      throw new ApiError(response.status, await parseDetail(response));
    }
    return response.json();
  }
}
