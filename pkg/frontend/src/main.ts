// DOM wiring for the workbench page. All state transitions live in state.ts
// and controller.ts; this file only routes events and re-renders.

import { ApiClient } from "./api.js";
import { Workbench } from "./controller.js";
import {
  addStimulus,
  canSubmit,
  initialState,
  removeStimulus,
  toggleInhibit,
  toggleSelection,
} from "./state.js";
import { renderError, renderMeta, renderResults, renderStimuli } from "./render.js";
import { WORKFLOWS, Workflow } from "./types.js";

const params = new URLSearchParams(window.location.search);
const apiBase = params.get("api") ?? "http://127.0.0.1:8040";

const app = document.getElementById("app");
if (app === null) throw new Error("missing #app mount point");

const workbench = new Workbench(new ApiClient(apiBase), render);

function render(): void {
  const state = workbench.state;
  if (app === null) return;
  app.innerHTML = `
    <header>
      <h1>scholnet workbench</h1>
      <p class="api">service: ${apiBase}</p>
    </header>
    ${renderError(state)}
    <div class="controls">
      <label>workflow
        <select id="workflow">
          ${WORKFLOWS.map((w) => `<option value="${w}"${w === state.workflow ? " selected" : ""}>${w}</option>`).join("")}
        </select>
      </label>
      <label>node <input id="node" placeholder="paper:P1" size="18"></label>
      <button id="add">add stimulus</button>
      <label>delta <input id="delta" type="range" min="0" max="1" step="0.01" value="${state.config.delta}">
        <span>${state.config.delta}</span></label>
      <label>theta <input id="theta" type="range" min="0" max="1" step="0.01" value="${state.config.theta}">
        <span>${state.config.theta}</span></label>
      <label>walkers <input id="walkers" type="number" min="1" step="500" value="${state.config.walkers}"></label>
      <label>seed <input id="seed" type="number" value="${state.config.masterSeed}"></label>
      <button id="submit" ${canSubmit(state) ? "" : "disabled"}>run query</button>
      <button id="refine" ${state.selection.length > 0 && !state.inFlight ? "" : "disabled"}>
        trim &amp; re-stimulate (${state.selection.length})</button>
      <button id="back" ${state.breadcrumbs.length > 0 ? "" : "disabled"}>back</button>
    </div>
    ${renderStimuli(state.stimuli)}
    ${renderMeta(state)}
    <main class="panes">${renderResults(state)}</main>
  `;
  wire();
}

function wire(): void {
  document.getElementById("workflow")?.addEventListener("change", (event) => {
    const workflow = (event.target as HTMLSelectElement).value as Workflow;
    workbench.update({ ...initialState(workflow), config: workbench.state.config });
  });
  document.getElementById("add")?.addEventListener("click", () => {
    const input = document.getElementById("node") as HTMLInputElement | null;
    const node = input?.value.trim();
    if (node) workbench.update(addStimulus(workbench.state, node));
  });
  document.getElementById("submit")?.addEventListener("click", () => {
    void workbench.submit();
  });
  document.getElementById("refine")?.addEventListener("click", () => {
    void workbench.refine();
  });
  document.getElementById("back")?.addEventListener("click", () => {
    workbench.back();
  });
  for (const id of ["delta", "theta"] as const) {
    document.getElementById(id)?.addEventListener("change", (event) => {
      const value = Number((event.target as HTMLInputElement).value);
      workbench.update({
        ...workbench.state,
        config: { ...workbench.state.config, [id]: value },
      });
    });
  }
  document.getElementById("walkers")?.addEventListener("change", (event) => {
    const value = Number((event.target as HTMLInputElement).value);
    workbench.update({
      ...workbench.state,
      config: { ...workbench.state.config, walkers: value },
    });
  });
  document.getElementById("seed")?.addEventListener("change", (event) => {
    const value = Number((event.target as HTMLInputElement).value);
    workbench.update({
      ...workbench.state,
      config: { ...workbench.state.config, masterSeed: value },
    });
  });
  document.querySelector("main.panes")?.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const inhibit = target.closest("[data-inhibit]") as HTMLElement | null;
    if (inhibit?.dataset.inhibit) {
      workbench.update(toggleInhibit(workbench.state, inhibit.dataset.inhibit));
      return;
    }
    const row = target.closest("[data-node]") as HTMLElement | null;
    if (row?.dataset.node) {
      workbench.update(toggleSelection(workbench.state, row.dataset.node));
    }
  });
  document.querySelector(".stimuli")?.addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest("[data-remove]") as HTMLElement | null;
    if (target?.dataset.remove) {
      workbench.update(removeStimulus(workbench.state, target.dataset.remove));
    }
  });
}

render();
