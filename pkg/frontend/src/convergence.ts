/**
 * Log-log convergence figures from study tables.
 *
 * One curve per interpolation method over the x column (`dt` or `J`), with
 * least-squares slope annotations and optional reference-slope overlays
 * (second order in the time step, -5/3 in wavenumber).
 */

import { Table } from "./table.js";
import { PALETTE, Svg, decadeTicks, logScale } from "./svg.js";

export interface ConvergenceOptions {
  x?: string; // x column, default "dt"
  y?: string; // y column, default "linf" falling back to "l2"
  title?: string;
  referenceSlopes?: number[]; // e.g. [2] for dt^2, [-5/3] for spectra
}

interface Curve {
  label: string;
  xs: number[];
  ys: number[];
  slope: number | null;
}

export function extractCurves(table: Table, xCol: string, yCol: string): Curve[] {
  if (!table.columns.includes(xCol)) {
    throw new Error(`table has no '${xCol}' column`);
  }
  if (!table.columns.includes(yCol)) {
    throw new Error(`table has no '${yCol}' column`);
  }
  const byMethod = new Map<string, Array<[number, number]>>();
  const labels = table.columns.includes("interp")
    ? table.text["interp"]
    : new Array(table.rows).fill("data");
  const status = table.columns.includes("status") ? table.text["status"] : null;
  for (let i = 0; i < table.rows; i++) {
    if (status && status[i] !== "ok") continue;
    const x = table.numeric[xCol][i];
    const y = table.numeric[yCol][i];
    if (!Number.isFinite(x) || !Number.isFinite(y) || y <= 0) continue;
    const key = labels[i];
    if (!byMethod.has(key)) byMethod.set(key, []);
    byMethod.get(key)!.push([x, y]);
  }
  if (byMethod.size === 0) {
    throw new Error("table contains no plottable rows");
  }
  const curves: Curve[] = [];
  for (const [label, pts] of byMethod) {
    pts.sort((a, b) => a[0] - b[0]);
    curves.push({
      label,
      xs: pts.map((p) => p[0]),
      ys: pts.map((p) => p[1]),
      slope: pts.length >= 2 ? fitSlope(pts) : null,
    });
  }
  return curves;
}

/** least-squares slope of log10(y) against log10(x) */
function fitSlope(pts: Array<[number, number]>): number {
  const lx = pts.map((p) => Math.log10(p[0]));
  const ly = pts.map((p) => Math.log10(p[1]));
  const mx = lx.reduce((a, b) => a + b, 0) / lx.length;
  const my = ly.reduce((a, b) => a + b, 0) / ly.length;
  let num = 0;
  let den = 0;
  for (let i = 0; i < lx.length; i++) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) ** 2;
  }
  return num / den;
}

export function renderConvergence(table: Table, opts: ConvergenceOptions = {}): string {
  const xCol = opts.x ?? "dt";
  let yCol = opts.y ?? "linf";
  if (!table.columns.includes(yCol) && table.columns.includes("l2")) {
    yCol = "l2";
  }
  const curves = extractCurves(table, xCol, yCol);

  const W = 640;
  const H = 480;
  const m = { top: 40, right: 30, bottom: 50, left: 70 };
  const svg = new Svg(W, H);

  const allX = curves.flatMap((c) => c.xs);
  const allY = curves.flatMap((c) => c.ys);
  const xLo = Math.min(...allX) / 1.3;
  const xHi = Math.max(...allX) * 1.3;
  const yLo = Math.min(...allY) / 2;
  const yHi = Math.max(...allY) * 2;
  const sx = logScale(xLo, xHi, m.left, W - m.right);
  const sy = logScale(yLo, yHi, H - m.bottom, m.top);

  for (const tx of decadeTicks(xLo, xHi)) {
    svg.line(sx(tx), m.top, sx(tx), H - m.bottom, "stroke:#eee");
    svg.text(sx(tx), H - m.bottom + 16, fmtPow(tx), "font-size:11px", "middle");
  }
  for (const ty of decadeTicks(yLo, yHi)) {
    svg.line(m.left, sy(ty), W - m.right, sy(ty), "stroke:#eee");
    svg.text(m.left - 6, sy(ty) + 4, fmtPow(ty), "font-size:11px", "end");
  }
  svg.line(m.left, H - m.bottom, W - m.right, H - m.bottom, "stroke:#333");
  svg.line(m.left, m.top, m.left, H - m.bottom, "stroke:#333");
  svg.text((m.left + W - m.right) / 2, H - 12, xCol, "font-size:13px", "middle");
  svg.text(16, m.top - 16, `${yCol} error`, "font-size:13px");
  if (opts.title) {
    svg.text(W / 2, 20, opts.title, "font-size:14px;font-weight:bold", "middle");
  }

  curves.forEach((c, i) => {
    const color = PALETTE[i % PALETTE.length];
    const pts: Array<[number, number]> = c.xs.map((x, k) => [sx(x), sy(c.ys[k])]);
    svg.polyline(pts, `stroke:${color};stroke-width:1.8`);
    for (const [px, py] of pts) svg.circle(px, py, 3.2, color);
    const label = c.slope === null ? c.label : `${c.label} (slope ${c.slope.toFixed(2)})`;
    svg.text(m.left + 10, m.top + 18 + 18 * i, label, `font-size:12px;fill:${color}`);
  });

  for (const slope of opts.referenceSlopes ?? []) {
    // anchor the guide line at the first curve's last point
    const c = curves[0];
    const x0 = c.xs[0];
    const y0 = c.ys[0] * 1.6;
    const x1 = c.xs[c.xs.length - 1];
    const y1 = y0 * (x1 / x0) ** slope;
    svg.polyline(
      [
        [sx(x0), sy(y0)],
        [sx(x1), sy(y1)],
      ],
      "stroke:#888;stroke-dasharray:6 4",
    );
    svg.text(sx(x1), sy(y1) - 6, `slope ${slopeName(slope)}`, "font-size:11px;fill:#888", "end");
  }
  return svg.render();
}

function slopeName(s: number): string {
  if (Math.abs(s - 2) < 1e-9) return "2";
  if (Math.abs(s + 5 / 3) < 1e-9) return "-5/3";
  return s.toFixed(2);
}

function fmtPow(v: number): string {
  const e = Math.round(Math.log10(v));
  return `1e${e}`;
}
