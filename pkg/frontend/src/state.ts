// Workbench state and its pure transitions. All ranking data flows in via
// SimulateResponseWire; this module never computes or adjusts energies.

import type {
  SimulateRequestWire,
  SimulateResponseWire,
  StimulusWire,
  Workflow,
} from "./types.js";
import { nodeKind } from "./types.js";

export interface WorkbenchConfig {
  delta: number;
  theta: number;
  walkers: number;
  masterSeed: number;
}

export interface WorkbenchState {
  workflow: Workflow;
  stimuli: StimulusWire[];
  config: WorkbenchConfig;
  top: number;
  response: SimulateResponseWire | null;
  sessionId: string | null;
  /** Node ids ticked for trim-and-restimulate; always a subset of the shown results. */
  selection: string[];
  /** Refinement history, oldest first; supports back-navigation without a network call. */
  breadcrumbs: SimulateResponseWire[];
  error: string | null;
  inFlight: boolean;
}

export const DEFAULT_CONFIG: WorkbenchConfig = {
  delta: 0.15,
  theta: 0.05,
  walkers: 2000,
  masterSeed: 7,
};

export function initialState(workflow: Workflow = "references"): WorkbenchState {
  return {
    workflow,
    stimuli: [],
    config: { ...DEFAULT_CONFIG },
    top: 20,
    response: null,
    sessionId: null,
    selection: [],
    breadcrumbs: [],
    error: null,
    inFlight: false,
  };
}

/** Stimulus signs a workflow preset applies when a node of that kind is added. */
export const WORKFLOW_SIGNS: Record<Workflow, Record<string, number>> = {
  references: { paper: 1 },
  collaborators: { paper: 1 },
  journal: { paper: 1, author: 1 },
  reviewers: { paper: 1, journal: 1, author: -1 },
  readers: { paper: 1, author: 1 },
};

export function presetSign(workflow: Workflow, node: string): number {
  return WORKFLOW_SIGNS[workflow][nodeKind(node)] ?? 1;
}

export function canSubmit(state: WorkbenchState): boolean {
  return state.stimuli.length > 0 && !state.inFlight;
}

export function addStimulus(
  state: WorkbenchState,
  node: string,
  energy?: number,
): WorkbenchState {
  if (state.stimuli.some((s) => s.node === node)) return state;
  const value = energy ?? presetSign(state.workflow, node);
  return { ...state, stimuli: [...state.stimuli, { node, energy: value }] };
}

export function removeStimulus(state: WorkbenchState, node: string): WorkbenchState {
  return { ...state, stimuli: state.stimuli.filter((s) => s.node !== node) };
}

/**
 * Flip an author between supporting (+1.0) and inhibitory (-1.0); an author
 * not yet seeded is added as inhibitory (the conflict-marking gesture).
 * Non-author nodes are left untouched: the control is disabled for them.
 */
export function toggleInhibit(state: WorkbenchState, node: string): WorkbenchState {
  if (nodeKind(node) !== "author") return state;
  const existing = state.stimuli.find((s) => s.node === node);
  if (existing === undefined) {
    return { ...state, stimuli: [...state.stimuli, { node, energy: -1.0 }] };
  }
  const stimuli = state.stimuli.map((s) =>
    s.node === node ? { node, energy: s.energy < 0 ? 1.0 : -1.0 } : s,
  );
  return { ...state, stimuli };
}

function shownNodes(response: SimulateResponseWire | null): Set<string> {
  const nodes = new Set<string>();
  if (response) {
    for (const rows of [response.s_a, response.s_p, response.s_j]) {
      for (const row of rows) nodes.add(row.node);
    }
  }
  return nodes;
}

export function toggleSelection(state: WorkbenchState, node: string): WorkbenchState {
  if (!shownNodes(state.response).has(node)) return state;
  const selection = state.selection.includes(node)
    ? state.selection.filter((n) => n !== node)
    : [...state.selection, node];
  return { ...state, selection };
}

/** Install a fresh response; refinements push the previous one onto the trail. */
export function applyResponse(
  state: WorkbenchState,
  response: SimulateResponseWire,
  opts: { pushBreadcrumb: boolean },
): WorkbenchState {
  const breadcrumbs =
    opts.pushBreadcrumb && state.response !== null
      ? [...state.breadcrumbs, state.response]
      : state.breadcrumbs;
  return {
    ...state,
    response,
    sessionId: response.session_id,
    selection: [],
    breadcrumbs,
    error: null,
  };
}

/** Restore the previous refinement step; pure, no network involved. */
export function goBack(state: WorkbenchState): WorkbenchState {
  const previous = state.breadcrumbs[state.breadcrumbs.length - 1];
  if (previous === undefined) return state;
  return {
    ...state,
    response: previous,
    sessionId: previous.session_id,
    selection: [],
    breadcrumbs: state.breadcrumbs.slice(0, -1),
    error: null,
  };
}

export function buildRequest(state: WorkbenchState): SimulateRequestWire {
  return {
    stimuli: state.stimuli,
    config: {
      delta: state.config.delta,
      theta: state.config.theta,
      walkers: state.config.walkers,
      master_seed: state.config.masterSeed,
    },
    workflow: state.workflow,
    top: state.top,
  };
}
