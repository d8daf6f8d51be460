/**
 * Minimal SVG chart builder: linear/log scales, line and point series,
 * axes with ticks, and a legend. Output is a standalone SVG document.
 */

export type ScaleKind = "linear" | "log";

export interface Series {
  label: string;
  x: number[];
  y: number[];
  color: string;
  kind: "line" | "points";
  dash?: string;
}

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  xScale?: ScaleKind;
  yScale?: ScaleKind;
  series: Series[];
  width?: number;
  height?: number;
}

export const PALETTE = ["#1f6fb2", "#d1495b", "#3a7d44", "#8d5a97", "#c77f1a", "#4a4e69"];

const MARGIN = { top: 42, right: 24, bottom: 52, left: 72 };

class Scale {
  constructor(
    private kind: ScaleKind,
    private lo: number,
    private hi: number,
    private outLo: number,
    private outHi: number,
  ) {
    if (kind === "log" && lo <= 0) {
      throw new Error("log scale requires positive domain");
    }
  }

  map(v: number): number {
    const [a, b] =
      this.kind === "log"
        ? [Math.log10(this.lo), Math.log10(this.hi)]
        : [this.lo, this.hi];
    const t = this.kind === "log" ? Math.log10(v) : v;
    const frac = b === a ? 0.5 : (t - a) / (b - a);
    return this.outLo + frac * (this.outHi - this.outLo);
  }

  ticks(count = 5): number[] {
    if (this.kind === "log") {
      const lo = Math.ceil(Math.log10(this.lo));
      const hi = Math.floor(Math.log10(this.hi));
      const out: number[] = [];
      for (let e = lo; e <= hi; e++) out.push(10 ** e);
      return out.length > 0 ? out : [this.lo, this.hi];
    }
    const step = (this.hi - this.lo) / (count - 1);
    return Array.from({ length: count }, (_, i) => this.lo + i * step);
  }
}

function extent(values: number[], scale: ScaleKind): [number, number] {
  const usable = scale === "log" ? values.filter((v) => v > 0) : values;
  if (usable.length === 0) {
    throw new Error("no plottable values for scale");
  }
  let lo = Math.min(...usable);
  let hi = Math.max(...usable);
  if (lo === hi) {
    lo = scale === "log" ? lo / 2 : lo - 1;
    hi = scale === "log" ? hi * 2 : hi + 1;
  }
  return [lo, hi];
}

function fmt(v: number): string {
  if (v === 0) return "0";
  const abs = Math.abs(v);
  if (abs >= 1e4 || abs < 1e-3) return v.toExponential(0);
  return Number(v.toPrecision(4)).toString();
}

const esc = (s: string) => s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export function renderChart(spec: ChartSpec): string {
  const width = spec.width ?? 720;
  const height = spec.height ?? 480;
  const xKind = spec.xScale ?? "linear";
  const yKind = spec.yScale ?? "linear";
  const allX = spec.series.flatMap((s) => s.x);
  const allY = spec.series.flatMap((s) => s.y);
  const [xLo, xHi] = extent(allX, xKind);
  const [yLo, yHi] = extent(allY, yKind);
  const xScale = new Scale(xKind, xLo, xHi, MARGIN.left, width - MARGIN.right);
  const yScale = new Scale(yKind, yLo, yHi, height - MARGIN.bottom, MARGIN.top);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="sans-serif">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    `<text x="${width / 2}" y="24" text-anchor="middle" font-size="16">${esc(spec.title)}</text>`,
  );

  // axes
  const x0 = MARGIN.left;
  const x1 = width - MARGIN.right;
  const y0 = height - MARGIN.bottom;
  const y1 = MARGIN.top;
  parts.push(
    `<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="black"/>`,
    `<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="black"/>`,
  );
  for (const t of xScale.ticks()) {
    const px = xScale.map(t);
    parts.push(
      `<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="black"/>`,
      `<text x="${px}" y="${y0 + 20}" text-anchor="middle" font-size="11">${fmt(t)}</text>`,
    );
  }
  for (const t of yScale.ticks()) {
    const py = yScale.map(t);
    parts.push(
      `<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="black"/>`,
      `<text x="${x0 - 8}" y="${py + 4}" text-anchor="end" font-size="11">${fmt(t)}</text>`,
    );
  }
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="${height - 12}" text-anchor="middle" font-size="13">${esc(spec.xLabel)}</text>`,
    `<text x="18" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="13" transform="rotate(-90 18 ${(y0 + y1) / 2})">${esc(spec.yLabel)}</text>`,
  );

  for (const series of spec.series) {
    const pts = series.x
      .map((x, i) => [x, series.y[i]] as const)
      .filter(([x, y]) => (xKind !== "log" || x > 0) && (yKind !== "log" || y > 0))
      .map(([x, y]) => [xScale.map(x), yScale.map(y)] as const);
    if (series.kind === "line") {
      const d = pts.map(([px, py], i) => `${i === 0 ? "M" : "L"}${px.toFixed(2)},${py.toFixed(2)}`).join(" ");
      const dash = series.dash ? ` stroke-dasharray="${series.dash}"` : "";
      parts.push(`<path d="${d}" fill="none" stroke="${series.color}" stroke-width="1.8"${dash}/>`);
    } else {
      for (const [px, py] of pts) {
        parts.push(`<circle cx="${px.toFixed(2)}" cy="${py.toFixed(2)}" r="3.4" fill="${series.color}"/>`);
      }
    }
  }

  // legend
  spec.series.forEach((series, i) => {
    const lx = x0 + 14;
    const ly = y1 + 14 + i * 17;
    if (series.kind === "line") {
      const dash = series.dash ? ` stroke-dasharray="${series.dash}"` : "";
      parts.push(`<line x1="${lx}" y1="${ly - 4}" x2="${lx + 22}" y2="${ly - 4}" stroke="${series.color}" stroke-width="1.8"${dash}/>`);
    } else {
      parts.push(`<circle cx="${lx + 11}" cy="${ly - 4}" r="3.4" fill="${series.color}"/>`);
    }
    parts.push(`<text x="${lx + 28}" y="${ly}" font-size="11">${esc(series.label)}</text>`);
  });

  parts.push("</svg>");
  return parts.join("\n");
}
