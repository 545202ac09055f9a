// Wire types for the ranking service JSON API.

export interface StimulusWire {
  node: string;
  energy: number;
}

export interface ConfigWire {
  delta: number;
  theta: number;
  walkers: number;
  master_seed: number;
  label_multipliers?: Record<string, number>;
}

export interface SimulateRequestWire {
  stimuli: StimulusWire[];
  config: ConfigWire;
  workflow?: string;
  top?: number;
}

export interface RankedRow {
  node: string;
  display: string;
  energy: number;
}

export interface SimulateResponseWire {
  s_a: RankedRow[];
  s_p: RankedRow[];
  s_j: RankedRow[];
  session_id: string;
  master_seed: number;
}

export type Workflow =
  | "references"
  | "collaborators"
  | "journal"
  | "reviewers"
  | "readers";

export const WORKFLOWS: Workflow[] = [
  "references",
  "collaborators",
  "journal",
  "reviewers",
  "readers",
];

/** Node kind prefix of a "kind:key" reference. */
export function nodeKind(node: string): string {
  const sep = node.indexOf(":");
  return sep < 0 ? "" : node.slice(0, sep);
}
