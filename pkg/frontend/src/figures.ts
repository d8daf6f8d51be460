/**
 * The three figure builders. Each maps documented CSV columns to
 * chart series; none of them recomputes any channel statistics.
 */

import { ResultTable, column, requireColumns } from "./csv.js";
import { ChartSpec, PALETTE, Series, renderChart } from "./svg.js";

export type FigureKind = "moments" | "eigen-cdf" | "capacity";

function uniqueSorted(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}

function pick(rows: number[][], mask: boolean[]): number[][] {
  return rows.filter((_, i) => mask[i]);
}

export function momentsFigure(table: ResultTable): string {
  requireColumns(table, [
    "d_over_lambda",
    "m_antennas",
    "sim_variance",
    "ana_variance",
  ]);
  const d = column(table, "d_over_lambda");
  const m = column(table, "m_antennas");
  const sim = column(table, "sim_variance");
  const ana = column(table, "ana_variance");
  const series: Series[] = [];
  uniqueSorted(d).forEach((spacing, i) => {
    const mask = d.map((v) => v === spacing);
    const rows = pick(
      m.map((mv, idx) => [mv, sim[idx], ana[idx]]),
      mask,
    ).sort((a, b) => a[0] - b[0]);
    const color = PALETTE[i % PALETTE.length];
    series.push({
      label: `analytical, d=${spacing}λ`,
      x: rows.map((r) => r[0]),
      y: rows.map((r) => r[2]),
      color,
      kind: "line",
    });
    series.push({
      label: `simulated, d=${spacing}λ`,
      x: rows.map((r) => r[0]),
      y: rows.map((r) => r[1]),
      color,
      kind: "points",
    });
  });
  const spec: ChartSpec = {
    title: "Inner-product variance vs antenna count",
    xLabel: "antennas M",
    yLabel: "var{g_p g_q*/M}",
    xScale: "log",
    yScale: "log",
    series,
  };
  return renderChart(spec);
}

export function eigenCdfFigure(table: ResultTable): string {
  requireColumns(table, [
    "m_antennas",
    "is_sparse",
    "eig_is_max",
    "eigenvalue",
    "probability",
  ]);
  const m = column(table, "m_antennas");
  const sparse = column(table, "is_sparse");
  const isMax = column(table, "eig_is_max");
  const value = column(table, "eigenvalue");
  const prob = column(table, "probability");
  const series: Series[] = [];
  let colorIdx = 0;
  for (const mVal of uniqueSorted(m)) {
    for (const sp of [1, 0]) {
      const color = PALETTE[colorIdx % PALETTE.length];
      colorIdx += 1;
      for (const mx of [0, 1]) {
        const mask = m.map(
          (v, i) => v === mVal && sparse[i] === sp && isMax[i] === mx,
        );
        const rows = pick(
          value.map((v, i) => [v, prob[i]]),
          mask,
        );
        if (rows.length === 0) continue;
        series.push({
          label: `M=${mVal} ${sp ? "sparse" : "Gaussian"} λ_${mx ? "max" : "min"}`,
          x: rows.map((r) => r[0]),
          y: rows.map((r) => r[1]),
          color,
          kind: "line",
          dash: mx ? undefined : "5,3",
        });
      }
    }
  }
  const spec: ChartSpec = {
    title: "CDFs of extreme eigenvalues of GG*",
    xLabel: "eigenvalue",
    yLabel: "CDF",
    xScale: "log",
    series,
  };
  return renderChart(spec);
}

export function capacityFigure(table: ResultTable): string {
  requireColumns(table, [
    "d_over_lambda",
    "sparse_per_user",
    "gaussian_per_user",
    "asymptotic_per_user",
  ]);
  const d = column(table, "d_over_lambda");
  const order = d
    .map((v, i) => [v, i] as const)
    .sort((a, b) => a[0] - b[0])
    .map(([, i]) => i);
  const sorted = (values: number[]) => order.map((i) => values[i]);
  const x = sorted(d);
  const series: Series[] = [
    {
      label: "sparse multipath",
      x,
      y: sorted(column(table, "sparse_per_user")),
      color: PALETTE[0],
      kind: "line",
    },
    {
      label: "Gaussian benchmark",
      x,
      y: sorted(column(table, "gaussian_per_user")),
      color: PALETTE[1],
      kind: "line",
      dash: "6,3",
    },
    {
      label: "large-M asymptote",
      x,
      y: sorted(column(table, "asymptotic_per_user")),
      color: PALETTE[2],
      kind: "line",
      dash: "2,3",
    },
  ];
  const spec: ChartSpec = {
    title: "Per-user capacity vs antenna spacing",
    xLabel: "spacing d/λ",
    yLabel: "bits/channel use per user",
    series,
  };
  return renderChart(spec);
}

const BUILDERS: Record<FigureKind, (table: ResultTable) => string> = {
  moments: momentsFigure,
  "eigen-cdf": eigenCdfFigure,
  capacity: capacityFigure,
};

export function buildFigure(kind: FigureKind, table: ResultTable): string {
  const builder = BUILDERS[kind];
  if (!builder) {
    throw new Error(`unknown figure kind '${kind}'`);
  }
  return builder(table);
}
