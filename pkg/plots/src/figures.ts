/** Figure renderers: CSV text in, standalone SVG string out. */

import { column, parseCsv, requireColumns } from "./csv";
import {
  Panel,
  SERIES_COLORS,
  SERIES_DASH,
  axes,
  colormap,
  document as svgDocument,
  esc,
  fmt,
  legend,
  linearScale,
  logScale,
  polyline,
} from "./svg";

export type FigureKind = "traces" | "heatmap" | "packet" | "ms";

export interface FigureSpec {
  kind: FigureKind;
  input: string; // CSV text
  title?: string;
}

const PANEL: Panel = { x: 70, y: 40, width: 540, height: 360 };
const WIDTH = 680;
const HEIGHT = 460;

function lineChart(
  title: string,
  xLabel: string,
  yLabel: string,
  xs: number[],
  series: { label: string; values: number[] }[],
): string {
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  const xScale = linearScale(xLo, xHi, PANEL.x, PANEL.x + PANEL.width);
  let yLo = Infinity;
  let yHi = -Infinity;
  for (const s of series) {
    yLo = Math.min(yLo, ...s.values);
    yHi = Math.max(yHi, ...s.values);
  }
  const pad = 0.05 * (yHi - yLo || 1);
  const yScale = linearScale(yLo - pad, yHi + pad, PANEL.y + PANEL.height, PANEL.y);

  const body = [
    axes(PANEL, xScale, yScale, xLabel, yLabel),
    ...series.map((s, i) =>
      polyline(xs, s.values, xScale, yScale, SERIES_COLORS[i % SERIES_COLORS.length],
        SERIES_DASH[i % SERIES_DASH.length]),
    ),
    legend(PANEL, series.map((s, i) => ({
      label: s.label,
      color: SERIES_COLORS[i % SERIES_COLORS.length],
      dash: SERIES_DASH[i % SERIES_DASH.length],
    }))),
  ].join("\n");
  return svgDocument(WIDTH, HEIGHT, title, body);
}

/** Population traces of the transfer chain (sc / phonon / spin). */
export function renderTraces(csvText: string, title = "State transfer populations"): string {
  const table = parseCsv(csvText);
  requireColumns(table, ["t_us", "pop_sc", "pop_ph", "pop_spin"]);
  const t = column(table, "t_us");
  return lineChart(title, "time (us)", "population", t, [
    { label: "sc", values: column(table, "pop_sc") },
    { label: "phonon", values: column(table, "pop_ph") },
    { label: "spin", values: column(table, "pop_spin") },
  ]);
}

/** Wavepacket intensity along the waveguide. */
export function renderPacket(csvText: string, title = "Released wavepacket"): string {
  const table = parseCsv(csvText);
  requireColumns(table, ["x_m", "intensity"]);
  return lineChart(title, "position (m)", "intensity", column(table, "x_m"), [
    { label: "intensity", values: column(table, "intensity") },
  ]);
}

/** Entangling-gate populations against the effective cosine law. */
export function renderMs(csvText: string, title = "Two-spin gate dynamics"): string {
  const table = parseCsv(csvText);
  requireColumns(table, ["t_us", "n_gg", "n_ee", "ideal"]);
  const t = column(table, "t_us");
  return lineChart(title, "time (us)", "population", t, [
    { label: "n_gg", values: column(table, "n_gg") },
    { label: "n_ee", values: column(table, "n_ee") },
    { label: "ideal", values: column(table, "ideal") },
  ]);
}

/** Fidelity and log-infidelity heatmaps over (g_pe, gamma_e), log axes. */
export function renderHeatmap(csvText: string, title = "Delay-optimized fidelity"): string {
  const table = parseCsv(csvText);
  requireColumns(table, ["g_pe_MHz", "gamma_e_kHz", "F", "log10_infidelity"]);
  const g = column(table, "g_pe_MHz");
  const gamma = column(table, "gamma_e_kHz");
  const gs = Array.from(new Set(g)).sort((a, b) => a - b);
  const gammas = Array.from(new Set(gamma)).sort((a, b) => a - b);

  const panels: { name: string; values: number[] }[] = [
    { name: "F", values: column(table, "F") },
    { name: "log10(1-F)", values: column(table, "log10_infidelity") },
  ];

  const width = 1040;
  const height = 520;
  const parts: string[] = [];
  panels.forEach((p, pi) => {
    const panel: Panel = { x: 80 + pi * 500, y: 60, width: 380, height: 360 };
    const xScale = logScale(gammas[0], gammas[gammas.length - 1], panel.x, panel.x + panel.width);
    const yScale = logScale(gs[0], gs[gs.length - 1], panel.y + panel.height, panel.y);
    const lo = Math.min(...p.values);
    const hi = Math.max(...p.values);
    const span = hi - lo || 1;

    // cell boundaries at geometric midpoints between grid lines
    const edges = (vals: number[]) => {
      const e: number[] = [vals[0] * Math.sqrt(vals[0] / (vals[1] ?? vals[0] * 2))];
      for (let i = 0; i + 1 < vals.length; i++) e.push(Math.sqrt(vals[i] * vals[i + 1]));
      const last = vals[vals.length - 1];
      const prev = vals[vals.length - 2] ?? last / 2;
      e.push(last * Math.sqrt(last / prev));
      return e;
    };
    const xe = edges(gammas);
    const ye = edges(gs);

    for (let k = 0; k < table.rows.length; k++) {
      const gi = gs.indexOf(g[k]);
      const yi = gammas.indexOf(gamma[k]);
      const x0 = xScale(Math.max(xe[yi], xScale.domain[0]));
      const x1 = xScale(Math.min(xe[yi + 1], xScale.domain[1]));
      const y1 = yScale(Math.max(ye[gi], yScale.domain[0]));
      const y0 = yScale(Math.min(ye[gi + 1], yScale.domain[1]));
      const color = colormap((p.values[k] - lo) / span);
      parts.push(
        `<rect x="${x0.toFixed(2)}" y="${y0.toFixed(2)}" width="${(x1 - x0).toFixed(2)}" height="${(y1 - y0).toFixed(2)}" fill="${color}"/>`,
      );
    }
    parts.push(axes(panel, xScale, yScale, "gamma_e (kHz)", "g_pe (MHz)", true, true));
    parts.push(
      `<text x="${panel.x + panel.width / 2}" y="${panel.y - 12}" font-size="13" text-anchor="middle">${esc(p.name)}  [${esc(fmt(lo))} .. ${esc(fmt(hi))}]</text>`,
    );
  });
  return svgDocument(width, height, title, parts.join("\n"));
}

export function render(spec: FigureSpec): string {
  switch (spec.kind) {
    case "traces":
      return renderTraces(spec.input, spec.title ?? undefined);
    case "heatmap":
      return renderHeatmap(spec.input, spec.title ?? undefined);
    case "packet":
      return renderPacket(spec.input, spec.title ?? undefined);
    case "ms":
      return renderMs(spec.input, spec.title ?? undefined);
  }
}
