/**
 * Equirectangular renderings of field snapshots: filled heat maps and
 * marching-squares contour figures with configurable levels
 * (e.g. "5000:50:6000" for start:step:stop).
 */

import { Snapshot } from "./snapshot.js";
import { Svg, linScale } from "./svg.js";

export function parseLevels(spec: string): number[] {
  const parts = spec.split(":").map(Number);
  if (parts.length !== 3 || parts.some((p) => !Number.isFinite(p)) || parts[1] <= 0) {
    throw new Error(`bad levels spec '${spec}', expected start:step:stop`);
  }
  const [start, step, stop] = parts;
  const out: number[] = [];
  for (let v = start; v <= stop + 1e-9 * step; v += step) {
    out.push(v);
  }
  return out;
}

/** marching squares on one cell; emits 0..2 segments in cell coordinates */
function cellSegments(
  z00: number,
  z10: number,
  z01: number,
  z11: number,
  level: number,
): Array<[number, number, number, number]> {
  // corner indexing: z(xy), x = column offset, y = row offset
  const idx =
    (z00 >= level ? 1 : 0) |
    (z10 >= level ? 2 : 0) |
    (z11 >= level ? 4 : 0) |
    (z01 >= level ? 8 : 0);
  if (idx === 0 || idx === 15) return [];
  const t = (a: number, b: number) => (level - a) / (b - a);
  // edge midpoints: bottom (y=0), right, top (y=1), left
  const bottom: [number, number] = [t(z00, z10), 0];
  const right: [number, number] = [1, t(z10, z11)];
  const top: [number, number] = [t(z01, z11), 1];
  const left: [number, number] = [0, t(z00, z01)];
  const seg = (p: [number, number], q: [number, number]) =>
    [p[0], p[1], q[0], q[1]] as [number, number, number, number];
  switch (idx) {
    case 1:
    case 14:
      return [seg(left, bottom)];
    case 2:
    case 13:
      return [seg(bottom, right)];
    case 3:
    case 12:
      return [seg(left, right)];
    case 4:
    case 11:
      return [seg(right, top)];
    case 6:
    case 9:
      return [seg(bottom, top)];
    case 7:
    case 8:
      return [seg(left, top)];
    case 5:
      return [seg(left, bottom), seg(right, top)];
    case 10:
      return [seg(bottom, right), seg(left, top)];
  }
  return [];
}

export function contourSegments(
  snap: Snapshot,
  level: number,
): Array<[number, number, number, number]> {
  const out: Array<[number, number, number, number]> = [];
  const { nLat, mLon, values } = snap;
  for (let i = 0; i < nLat - 1; i++) {
    for (let j = 0; j < mLon; j++) {
      const j1 = (j + 1) % mLon; // periodic in longitude
      const z00 = values[i * mLon + j];
      const z10 = values[i * mLon + j1];
      const z01 = values[(i + 1) * mLon + j];
      const z11 = values[(i + 1) * mLon + j1];
      if (j1 === 0) continue; // skip the seam cell in the figure
      for (const [x0, y0, x1, y1] of cellSegments(z00, z10, z01, z11, level)) {
        out.push([j + x0, i + y0, j + x1, i + y1]);
      }
    }
  }
  return out;
}

const HEAT = ["#313695", "#4575b4", "#74add1", "#abd9e9", "#e0f3f8", "#fee090", "#fdae61", "#f46d43", "#d73027", "#a50026"];

export function renderField(
  snap: Snapshot,
  style: "heatmap" | "contour",
  levels: number[] | null,
): string {
  const W = 720;
  const H = 420;
  const m = { top: 34, right: 20, bottom: 40, left: 50 };
  const svg = new Svg(W, H);
  const plotW = W - m.left - m.right;
  const plotH = H - m.top - m.bottom;
  const sx = linScale(0, snap.mLon, m.left, W - m.right);
  const sy = linScale(0, snap.nLat - 1, m.top, H - m.bottom);

  if (style === "heatmap") {
    let lo = Infinity;
    let hi = -Infinity;
    for (const v of snap.values) {
      lo = Math.min(lo, v);
      hi = Math.max(hi, v);
    }
    const span = hi > lo ? hi - lo : 1.0;
    const cw = plotW / snap.mLon;
    const ch = plotH / Math.max(snap.nLat - 1, 1);
    for (let i = 0; i < snap.nLat; i++) {
      for (let j = 0; j < snap.mLon; j++) {
        const v = snap.values[i * snap.mLon + j];
        const c = HEAT[Math.min(HEAT.length - 1, Math.floor(((v - lo) / span) * HEAT.length))];
        svg.rect(sx(j), sy(i) - ch / 2, cw + 0.5, ch + 0.5, c);
      }
    }
  } else {
    if (!levels || levels.length === 0) {
      throw new Error("contour style requires levels");
    }
    levels.forEach((level, li) => {
      const color = HEAT[Math.min(HEAT.length - 1, Math.floor((li / levels.length) * HEAT.length))];
      const segs = contourSegments(snap, level);
      const d = segs
        .map(
          ([x0, y0, x1, y1]) =>
            `M${sx(x0).toFixed(2)} ${sy(y0).toFixed(2)}L${sx(x1).toFixed(2)} ${sy(y1).toFixed(2)}`,
        )
        .join("");
      if (d.length > 0) {
        svg.path(d, `stroke:${color};stroke-width:1`);
      }
    });
  }

  svg.line(m.left, H - m.bottom, W - m.right, H - m.bottom, "stroke:#333");
  svg.line(m.left, m.top, m.left, H - m.bottom, "stroke:#333");
  svg.text((m.left + W - m.right) / 2, H - 10, "longitude", "font-size:12px", "middle");
  svg.text(14, (m.top + H - m.bottom) / 2, "colatitude", "font-size:12px");
  svg.text(
    W / 2,
    20,
    `${snap.field} [${snap.units}]  t = ${(snap.timeS / 86400).toFixed(2)} days`,
    "font-size:13px;font-weight:bold",
    "middle",
  );
  return svg.render();
}
