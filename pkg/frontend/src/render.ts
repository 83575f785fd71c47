/**
 * Scenario renderers: heatmaps for 2D sweeps, line plots for traces and
 * scans, log-log curves for the decoherence figure, and a bar grid for the
 * gate truth table.  Every renderer consumes only the documented CSV
 * contract of the simulator.
 */

import { Table, axisValues, column, requireColumns, CsvError } from "./csv.js";
import {
  LINE_COLORS,
  Scale,
  diverging,
  extent,
  linearScale,
  logScale,
  logTicks,
  ticks,
  viridis,
} from "./scale.js";
import { Svg } from "./svg.js";

const W = 560;
const H = 430;
const MARGIN = { left: 70, right: 90, top: 36, bottom: 52 };

interface Frame {
  svg: Svg;
  x: Scale;
  y: Scale;
}

function frame(
  title: string,
  xLabel: string,
  yLabel: string,
  xDomain: [number, number],
  yDomain: [number, number],
  log: { x?: boolean; y?: boolean } = {},
): Frame {
  const svg = new Svg(W, H);
  const xRange: [number, number] = [MARGIN.left, W - MARGIN.right];
  const yRange: [number, number] = [H - MARGIN.bottom, MARGIN.top];
  const x = log.x ? logScale(xDomain, xRange) : linearScale(xDomain, xRange);
  const y = log.y ? logScale(yDomain, yRange) : linearScale(yDomain, yRange);
  svg.text(W / 2, 18, title, 13);
  svg.line(xRange[0], yRange[0], xRange[1], yRange[0]);
  svg.line(xRange[0], yRange[0], xRange[0], yRange[1]);
  const xTicks = log.x ? logTicks(xDomain) : ticks(xDomain);
  for (const t of xTicks) {
    const px = x(t);
    svg.line(px, yRange[0], px, yRange[0] + 4);
    svg.text(px, yRange[0] + 16, formatTick(t), 10);
  }
  const yTicks = log.y ? logTicks(yDomain) : ticks(yDomain);
  for (const t of yTicks) {
    const py = y(t);
    svg.line(xRange[0] - 4, py, xRange[0], py);
    svg.text(xRange[0] - 8, py + 3, formatTick(t), 10, "end");
  }
  svg.text(W / 2, H - 10, xLabel, 12);
  svg.text(16, H / 2, yLabel, 12, "middle", -90);
  return { svg, x, y };
}

function formatTick(v: number): string {
  if (v !== 0 && (Math.abs(v) < 1e-3 || Math.abs(v) >= 1e4)) return v.toExponential(0);
  return String(Number(v.toPrecision(6)));
}

export function axisLabel(name: string): string {
  const units: Record<string, string> = {
    mhz: "MHz",
    ghz: "GHz",
    ns: "ns",
    us: "µs",
  };
  const parts = name.split("_");
  const suffix = parts[parts.length - 1];
  if (suffix in units) {
    return `${parts.slice(0, -1).join(" ")} (${units[suffix]})`;
  }
  return parts.join(" ");
}

/** 2D sweep rendered as colored cells; optionally marks the minimum cell. */
export function renderHeatmap(
  table: Table,
  xCol: string,
  yCol: string,
  vCol: string,
  title: string,
  opts: { markMin?: boolean; signed?: boolean; logColor?: boolean } = {},
): string {
  requireColumns(table, [xCol, yCol, vCol]);
  const xs = axisValues(column(table, xCol));
  const ys = axisValues(column(table, yCol));
  const vals = column(table, vCol);
  if (xs.length * ys.length !== vals.length) {
    throw new CsvError(
      `grid mismatch: ${xs.length} x ${ys.length} axes vs ${vals.length} rows`,
    );
  }
  const f = frame(title, axisLabel(xCol), axisLabel(yCol), extent(xs), extent(ys));
  const finite = vals.filter((v) => Number.isFinite(v));
  let [lo, hi] = extent(finite);
  if (opts.logColor) {
    lo = Math.log10(Math.max(1e-12, lo));
    hi = Math.log10(Math.max(1e-11, hi));
  }
  if (opts.signed) {
    const m = Math.max(Math.abs(lo), Math.abs(hi));
    lo = -m;
    hi = m;
  }
  const cw = (f.x.range[1] - f.x.range[0]) / xs.length;
  const ch = (f.y.range[1] - f.y.range[0]) / ys.length;
  let minV = Infinity;
  let minCell: [number, number] = [0, 0];
  for (let i = 0; i < xs.length; i++) {
    for (let j = 0; j < ys.length; j++) {
      const v = vals[i * ys.length + j];
      const px = f.x.range[0] + i * cw;
      const py = f.y.range[0] + (j + 1) * ch;
      if (!Number.isFinite(v)) {
        f.svg.rect(px, py, cw, -ch, "#ddd");
        continue;
      }
      const scaled = opts.logColor ? Math.log10(Math.max(1e-12, v)) : v;
      const t = (scaled - lo) / (hi - lo || 1);
      f.svg.rect(px, py, cw, -ch, opts.signed ? diverging(t) : viridis(t));
      if (v < minV) {
        minV = v;
        minCell = [px, py];
      }
    }
  }
  if (opts.markMin) {
    f.svg.rect(minCell[0], minCell[1], cw, -ch, "none", 'stroke="red" stroke-width="2"');
  }
  // color bar
  const barX = W - MARGIN.right + 20;
  for (let k = 0; k < 60; k++) {
    const t = k / 59;
    const py = f.y.range[0] + t * (f.y.range[1] - f.y.range[0]);
    f.svg.rect(barX, py, 14, (f.y.range[1] - f.y.range[0]) / 60, opts.signed ? diverging(t) : viridis(t));
  }
  f.svg.text(barX + 7, f.y.range[1] - 8, formatTick(opts.logColor ? Math.pow(10, hi) : hi), 9);
  f.svg.text(barX + 7, f.y.range[0] + 14, formatTick(opts.logColor ? Math.pow(10, lo) : lo), 9);
  return f.svg.render();
}

/** Multi-trace line plot over a shared x column. */
export function renderLines(
  table: Table,
  xCol: string,
  series: string[],
  title: string,
  opts: { logY?: boolean; logX?: boolean } = {},
): string {
  requireColumns(table, [xCol, ...series]);
  const xs = column(table, xCol);
  const all: number[] = [];
  for (const s of series) all.push(...column(table, s).filter(Number.isFinite));
  const yDomain = extent(all);
  const f = frame(
    title,
    axisLabel(xCol),
    series.length === 1 ? axisLabel(series[0]) : "value",
    extent(xs),
    yDomain,
    { x: opts.logX, y: opts.logY },
  );
  series.forEach((name, k) => {
    const ys = column(table, name);
    const pts: [number, number][] = [];
    for (let i = 0; i < xs.length; i++) {
      if (Number.isFinite(ys[i]) && (!opts.logY || ys[i] > 0)) {
        pts.push([f.x(xs[i]), f.y(ys[i])]);
      }
    }
    f.svg.polyline(pts, LINE_COLORS[k % LINE_COLORS.length]);
    f.svg.text(
      f.x.range[1] + 6,
      f.y(ys[ys.length - 1]) + 3,
      name,
      9,
      "start",
    );
  });
  return f.svg.render();
}

/** Truth-table bar grid: one mini-bar per (input, output) probability. */
export function renderBarGrid(table: Table, title: string): string {
  const outputs = table.columns.filter((c) => c.startsWith("p_"));
  if (outputs.length === 0) {
    throw new CsvError("missing probability columns p_*");
  }
  const n = table.rows.length;
  const svg = new Svg(W, H);
  svg.text(W / 2, 18, title, 13);
  const x0 = MARGIN.left;
  const y0 = H - MARGIN.bottom;
  const cw = (W - MARGIN.left - MARGIN.right) / outputs.length;
  const chRow = (y0 - MARGIN.top) / n;
  const barH = chRow * 0.85;
  for (let i = 0; i < n; i++) {
    const label = outputs[i]?.slice(2) ?? String(i);
    svg.text(x0 - 8, y0 - i * chRow - barH / 2, label, 10, "end");
    for (let j = 0; j < outputs.length; j++) {
      const p = table.rows[i][table.columns.indexOf(outputs[j])];
      const h = Math.max(0.5, p * barH);
      const px = x0 + j * cw + cw * 0.1;
      svg.rect(px, y0 - i * chRow - h, cw * 0.8, h, p > 0.5 ? "#1f77b4" : "#9ecae1");
    }
  }
  for (let j = 0; j < outputs.length; j++) {
    svg.text(x0 + j * cw + cw / 2, y0 + 16, outputs[j].slice(2), 10);
  }
  svg.text(W / 2, H - 10, "output state", 12);
  svg.text(16, H / 2, "input state", 12, "middle", -90);
  return svg.render();
}

/** Population-trace line plot: renders every pop_* column that ever rises
 * above a visibility threshold. */
export function renderTrace(table: Table, title: string): string {
  requireColumns(table, ["t_ns"]);
  const pops = table.columns.filter((c) => c.startsWith("pop_"));
  if (pops.length === 0) throw new CsvError("missing population columns pop_*");
  const visible = pops.filter((c) => Math.max(...column(table, c)) > 0.02);
  return renderLines(table, "t_ns", visible, title);
}
