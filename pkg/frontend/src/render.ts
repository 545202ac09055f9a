// Pure HTML builders. Energies are printed verbatim from the service
// response (String(energy)); the UI never rounds, rescales, or recomputes a
// ranking value. Bars are the only derived visual: width proportional to the
// row's energy over the pane maximum.

import type { RankedRow, SimulateResponseWire, StimulusWire } from "./types.js";
import { nodeKind } from "./types.js";
import type { WorkbenchState } from "./state.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function formatEnergy(energy: number): string {
  return String(energy);
}

export function barWidthPercent(energy: number, maxEnergy: number): number {
  if (maxEnergy <= 0) return 0;
  return Math.max(0, Math.min(100, (energy / maxEnergy) * 100));
}

export function renderPane(
  title: string,
  rows: RankedRow[],
  state: WorkbenchState,
): string {
  const maxEnergy = rows.reduce((acc, row) => Math.max(acc, row.energy), 0);
  const body = rows
    .map((row, index) => {
      const selected = state.selection.includes(row.node);
      const width = barWidthPercent(row.energy, maxEnergy);
      const inhibit =
        nodeKind(row.node) === "author"
          ? `<button class="inhibit" data-inhibit="${escapeHtml(row.node)}" title="mark inhibitory">&#8856;</button>`
          : "";
      return (
        `<li class="row${selected ? " selected" : ""}" data-node="${escapeHtml(row.node)}">` +
        `<span class="rank">${index + 1}</span>` +
        `<span class="label" title="${escapeHtml(row.node)}">${escapeHtml(row.display || row.node)}</span>` +
        `<span class="bar"><span class="fill" style="width:${width}%"></span></span>` +
        `<span class="energy">${formatEnergy(row.energy)}</span>` +
        inhibit +
        `</li>`
      );
    })
    .join("");
  return (
    `<section class="pane"><h2>${escapeHtml(title)} <small>${rows.length}</small></h2>` +
    `<ul>${body}</ul></section>`
  );
}

export function renderStimuli(stimuli: StimulusWire[]): string {
  const chips = stimuli
    .map((s) => {
      const cls = s.energy < 0 ? "chip inhibitory" : "chip positive";
      const sign = s.energy < 0 ? "−" : "+";
      return (
        `<span class="${cls}" data-node="${escapeHtml(s.node)}">` +
        `<b>${sign}${Math.abs(s.energy)}</b> ${escapeHtml(s.node)}` +
        `<button class="remove" data-remove="${escapeHtml(s.node)}">&times;</button></span>`
      );
    })
    .join("");
  return `<div class="stimuli">${chips || "<em>no stimuli yet</em>"}</div>`;
}

/** Reproducibility line: the exact seed and config behind the shown result. */
export function renderMeta(state: WorkbenchState): string {
  if (state.response === null) return "";
  const c = state.config;
  return (
    `<p class="meta">master_seed=${state.response.master_seed} ` +
    `delta=${c.delta} theta=${c.theta} walkers=${c.walkers} top=${state.top} ` +
    `session=${escapeHtml(state.response.session_id)} ` +
    `step=${state.breadcrumbs.length + 1}</p>`
  );
}

export function renderError(state: WorkbenchState): string {
  if (state.error === null) return "";
  return `<div class="banner error">${escapeHtml(state.error)}</div>`;
}

export function renderResults(state: WorkbenchState): string {
  if (state.response === null) return `<p class="empty">run a query to see rankings</p>`;
  return (
    renderPane("Authors", state.response.s_a, state) +
    renderPane("Papers", state.response.s_p, state) +
    renderPane("Journals", state.response.s_j, state)
  );
}
