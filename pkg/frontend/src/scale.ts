/** Linear/log scales, tick generation, and colormaps for the SVG renderers. */

export interface Scale {
  (v: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const fn = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  fn.domain = domain;
  fn.range = range;
  return fn;
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const lo = Math.log10(domain[0]);
  const hi = Math.log10(domain[1]);
  const inner = linearScale([lo, hi], range);
  const fn = ((v: number) => inner(Math.log10(v))) as Scale;
  fn.domain = domain;
  fn.range = range;
  return fn;
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!Number.isFinite(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo)) return [0, 1];
  if (lo === hi) return [lo - 0.5, hi + 0.5];
  return [lo, hi];
}

export function ticks(domain: [number, number], count = 6): number[] {
  const span = domain[1] - domain[0];
  if (span <= 0) return [domain[0]];
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = (span / count) / step;
  const unit = err >= 7.5 ? step * 10 : err >= 3.5 ? step * 5 : err >= 1.5 ? step * 2 : step;
  const out: number[] = [];
  for (let v = Math.ceil(domain[0] / unit) * unit; v <= domain[1] + unit * 1e-9; v += unit) {
    out.push(Number(v.toPrecision(12)));
  }
  return out;
}

export function logTicks(domain: [number, number]): number[] {
  const out: number[] = [];
  const lo = Math.floor(Math.log10(domain[0]));
  const hi = Math.ceil(Math.log10(domain[1]));
  for (let e = lo; e <= hi; e++) {
    const v = Math.pow(10, e);
    if (v >= domain[0] * 0.999 && v <= domain[1] * 1.001) out.push(v);
  }
  return out.length >= 2 ? out : [domain[0], domain[1]];
}

/** Compact viridis-like colormap (piecewise-linear through anchor colors). */
const VIRIDIS_ANCHORS: [number, number, number][] = [
  [68, 1, 84],
  [59, 82, 139],
  [33, 145, 140],
  [94, 201, 98],
  [253, 231, 37],
];

export function viridis(t: number): string {
  const x = Math.min(1, Math.max(0, t)) * (VIRIDIS_ANCHORS.length - 1);
  const k = Math.min(VIRIDIS_ANCHORS.length - 2, Math.floor(x));
  const f = x - k;
  const a = VIRIDIS_ANCHORS[k];
  const b = VIRIDIS_ANCHORS[k + 1];
  const rgb = [0, 1, 2].map((i) => Math.round(a[i] + f * (b[i] - a[i])));
  return `rgb(${rgb[0]},${rgb[1]},${rgb[2]})`;
}

/** Blue-white-red diverging map for signed quantities. */
export function diverging(t: number): string {
  const x = Math.min(1, Math.max(0, t));
  const mix = (a: number, b: number, f: number) => Math.round(a + (b - a) * f);
  if (x < 0.5) {
    const f = x / 0.5;
    return `rgb(${mix(33, 247, f)},${mix(102, 247, f)},${mix(172, 247, f)})`;
  }
  const f = (x - 0.5) / 0.5;
  return `rgb(${mix(247, 178, f)},${mix(247, 24, f)},${mix(247, 43, f)})`;
}

export const LINE_COLORS = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#ff7f0e",
  "#9467bd",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];
