// Async orchestration between the state and the service. At most one request
// is in flight; submits while busy are ignored.

import { ApiClient, ApiError } from "./api.js";
import type { SimulateResponseWire } from "./types.js";
import {
  WorkbenchState,
  applyResponse,
  buildRequest,
  canSubmit,
  goBack,
  initialState,
} from "./state.js";

export class Workbench {
  state: WorkbenchState;

  constructor(
    private readonly api: ApiClient,
    private readonly onChange: (state: WorkbenchState) => void = () => {},
    state: WorkbenchState = initialState(),
  ) {
    this.state = state;
  }

  update(next: WorkbenchState): void {
    this.state = next;
    this.onChange(next);
  }

  /** Run the current query. On a service 4xx the panes keep their old content
   * and the banner shows the service's message (which names the bad node). */
  async submit(): Promise<void> {
    if (!canSubmit(this.state)) return;
    this.update({ ...this.state, inFlight: true });
    try {
      const response = await this.api.simulate(buildRequest(this.state));
      this.update({
        ...applyResponse(this.state, response, { pushBreadcrumb: false }),
        breadcrumbs: [],
        inFlight: false,
      });
    } catch (error) {
      this.fail(error);
    }
  }

  /**
   * Trim-and-restimulate with the current selection. An expired session (404)
   * falls back transparently to a fresh simulate with the kept set as +1.0
   * stimuli under the same config.
   */
  async refine(): Promise<void> {
    const kept = this.state.selection;
    if (kept.length === 0 || this.state.inFlight || this.state.sessionId === null) {
      return;
    }
    this.update({ ...this.state, inFlight: true });
    try {
      let response: SimulateResponseWire;
      try {
        response = await this.api.refine(this.state.sessionId, kept);
      } catch (error) {
        if (error instanceof ApiError && error.status === 404) {
          response = await this.api.simulate({
            ...buildRequest(this.state),
            stimuli: kept.map((node) => ({ node, energy: 1.0 })),
          });
        } else {
          throw error;
        }
      }
      this.update({
        ...applyResponse(this.state, response, { pushBreadcrumb: true }),
        inFlight: false,
      });
    } catch (error) {
      this.fail(error);
    }
  }

  back(): void {
    this.update(goBack(this.state));
  }

  private fail(error: unknown): void {
    const message =
      error instanceof ApiError ? error.detail : String(error);
    this.update({ ...this.state, error: message, inFlight: false });
  }
}
