/** Scenario registry: which renderer and columns each known CSV uses. */

import { Table } from "./csv.js";
import { renderBarGrid, renderHeatmap, renderLines, renderTrace } from "./render.js";

export type Renderer = (table: Table) => string;

export const SCENARIOS: Record<string, Renderer> = {
  fig2a: (t) =>
    renderLines(t, "alpha2_mhz", ["j1_ground_mhz", "j1_excited_mhz"], "exchange vs middle anharmonicity"),
  fig2b: (t) =>
    renderHeatmap(t, "alpha2_mhz", "delta_mhz", "j1_excited_over_g", "excited-sector exchange / g", {
      signed: true,
    }),
  fig2d: (t) =>
    renderLines(t, "t_ns", ["j1_ground_mhz", "j1_excited_mhz"], "exchange along the pulse"),
  fig3a: (t) =>
    renderHeatmap(t, "delta1_mhz", "delta3_mhz", "swap_error", "blocked-swap error", {
      markMin: true,
      logColor: true,
    }),
  fig3b: (t) =>
    renderHeatmap(t, "overshoot_mhz", "t_hold_ns", "p001", "ground-sector return population"),
  fig3c: (t) => renderTrace(t, "population swap (exchange on)"),
  fig3d: (t) => renderTrace(t, "blocked population (exchange off)"),
  fig4: (t) => renderBarGrid(t, "gate truth table"),
  fig5: (t) =>
    renderLines(t, "t1_us", ["eps_full", "eps_intrinsic", "eps_t1"], "infidelity vs relaxation time", {
      logX: true,
      logY: true,
    }),
  fig11: (t) =>
    renderHeatmap(t, "alpha2_mhz", "delta3_mhz", "j2_excited_I_over_g", "doubly-excited exchange / g", {
      signed: true,
    }),
  fig12a: (t) => renderLines(t, "delta_mhz", ["swap_error_111"], "blocked error (doubly excited)"),
  fig12b: (t) =>
    renderHeatmap(t, "overshoot_mhz", "t_hold_ns", "p101_to_002", "doubly-excited transfer"),
  fig12c: (t) => renderTrace(t, "doubly-excited swap (on)"),
  fig12d: (t) => renderTrace(t, "doubly-excited swap (off)"),
  fig14: (t) =>
    renderHeatmap(t, "alpha2_mhz", "t_hold_ns", "fidelity", "weak-coupling fidelity map"),
  evolve: (t) => renderTrace(t, "population trace"),
};

export function renderScenario(name: string, table: Table): string {
  const key = name.startsWith("evolve") ? "evolve" : name;
  const renderer = SCENARIOS[key];
  if (!renderer) {
    throw new Error(`unknown scenario '${name}' (known: ${Object.keys(SCENARIOS).join(", ")})`);
  }
  return renderer(table);
}
