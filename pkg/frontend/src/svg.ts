/** Tiny SVG scene builder: enough for axes, curves, contours, and labels. */

export interface Margin {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export class Svg {
  private parts: string[] = [];

  constructor(
    readonly width: number,
    readonly height: number,
  ) {}

  add(fragment: string): void {
    this.parts.push(fragment);
  }

  line(x1: number, y1: number, x2: number, y2: number, style: string): void {
    this.add(
      `<line x1="${r(x1)}" y1="${r(y1)}" x2="${r(x2)}" y2="${r(y2)}" style="${style}"/>`,
    );
  }

  polyline(points: Array<[number, number]>, style: string): void {
    const pts = points.map(([x, y]) => `${r(x)},${r(y)}`).join(" ");
    this.add(`<polyline points="${pts}" style="${style}" fill="none"/>`);
  }

  path(d: string, style: string): void {
    this.add(`<path d="${d}" style="${style}" fill="none"/>`);
  }

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.add(
      `<rect x="${r(x)}" y="${r(y)}" width="${r(w)}" height="${r(h)}" fill="${fill}" stroke="none"/>`,
    );
  }

  circle(cx: number, cy: number, radius: number, fill: string): void {
    this.add(`<circle cx="${r(cx)}" cy="${r(cy)}" r="${r(radius)}" fill="${fill}"/>`);
  }

  text(x: number, y: number, s: string, style = "font-size:12px", anchor = "start"): void {
    this.add(
      `<text x="${r(x)}" y="${r(y)}" style="${style};font-family:sans-serif" text-anchor="${anchor}">${escapeXml(s)}</text>`,
    );
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" ` +
      `viewBox="0 0 ${this.width} ${this.height}">\n<rect width="100%" height="100%" fill="white"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

function r(x: number): string {
  return Number.isFinite(x) ? x.toFixed(2) : "0";
}

function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** log10 scale mapping [lo, hi] to pixel range [p0, p1]. */
export function logScale(lo: number, hi: number, p0: number, p1: number) {
  const a = Math.log10(lo);
  const b = Math.log10(hi);
  return (v: number) => p0 + ((Math.log10(v) - a) / (b - a)) * (p1 - p0);
}

export function linScale(lo: number, hi: number, p0: number, p1: number) {
  return (v: number) => p0 + ((v - lo) / (hi - lo)) * (p1 - p0);
}

/** Decade tick values covering [lo, hi]. */
export function decadeTicks(lo: number, hi: number): number[] {
  const out: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-9); e <= Math.floor(Math.log10(hi) + 1e-9); e++) {
    out.push(10 ** e);
  }
  return out;
}

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
