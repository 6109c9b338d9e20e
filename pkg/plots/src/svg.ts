/** Minimal static SVG chart primitives (no DOM, plain string assembly). */

export interface Scale {
  (value: number): number;
  ticks: number[];
  domain: [number, number];
}

function linearTicks(lo: number, hi: number, target = 6): number[] {
  const span = hi - lo || 1;
  const rawStep = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const candidates = [1, 2, 5, 10].map((m) => m * mag);
  const step = candidates.find((c) => span / c <= target) ?? candidates[3];
  const first = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = first; v <= hi + 1e-12 * span; v += step) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

export function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const span = hi - lo || 1;
  const f = ((value: number) => outLo + ((value - lo) / span) * (outHi - outLo)) as Scale;
  f.ticks = linearTicks(lo, hi);
  f.domain = [lo, hi];
  return f;
}

export function logScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  if (lo <= 0 || hi <= 0) {
    throw new Error("log scale needs positive bounds");
  }
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  const span = lhi - llo || 1;
  const f = ((value: number) =>
    outLo + ((Math.log10(value) - llo) / span) * (outHi - outLo)) as Scale;
  const ticks: number[] = [];
  for (let d = Math.ceil(llo); d <= Math.floor(lhi) + 1e-9; d++) {
    ticks.push(Math.pow(10, d));
  }
  f.ticks = ticks.length >= 2 ? ticks : [lo, hi];
  f.domain = [lo, hi];
  return f;
}

export function fmt(value: number): string {
  if (value === 0) return "0";
  const a = Math.abs(value);
  if (a >= 1e4 || a < 1e-3) return value.toExponential(0);
  return String(Number(value.toPrecision(4)));
}

// stops of a perceptually ordered dark-blue -> yellow map
const STOPS: [number, number, number][] = [
  [68, 1, 84],
  [59, 82, 139],
  [33, 145, 140],
  [94, 201, 98],
  [253, 231, 37],
];

export function colormap(t: number): string {
  const x = Math.min(1, Math.max(0, t)) * (STOPS.length - 1);
  const i = Math.min(STOPS.length - 2, Math.floor(x));
  const f = x - i;
  const mix = STOPS[i].map((c, k) => Math.round(c + f * (STOPS[i + 1][k] - c)));
  return `rgb(${mix[0]},${mix[1]},${mix[2]})`;
}

export const SERIES_COLORS = ["#1f77b4", "#d62728", "#2c2c2c", "#e6a117"];
export const SERIES_DASH = ["", "7,4", "2,3", "8,3,2,3"];

export interface Panel {
  x: number;
  y: number;
  width: number;
  height: number;
}

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function axes(
  panel: Panel,
  xScale: Scale,
  yScale: Scale,
  xLabel: string,
  yLabel: string,
  logX = false,
  logY = false,
): string {
  const parts: string[] = [];
  const x0 = panel.x;
  const y0 = panel.y + panel.height;
  parts.push(
    `<rect x="${panel.x}" y="${panel.y}" width="${panel.width}" height="${panel.height}" fill="none" stroke="#444"/>`,
  );
  for (const t of xScale.ticks) {
    const px = xScale(t);
    parts.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="#444"/>`);
    parts.push(
      `<text x="${px}" y="${y0 + 18}" font-size="11" text-anchor="middle">${esc(
        logX ? `1e${Math.round(Math.log10(t))}` : fmt(t),
      )}</text>`,
    );
  }
  for (const t of yScale.ticks) {
    const py = yScale(t);
    parts.push(`<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="#444"/>`);
    parts.push(
      `<text x="${x0 - 8}" y="${py + 4}" font-size="11" text-anchor="end">${esc(
        logY ? `1e${Math.round(Math.log10(t))}` : fmt(t),
      )}</text>`,
    );
  }
  parts.push(
    `<text x="${panel.x + panel.width / 2}" y="${y0 + 36}" font-size="13" text-anchor="middle">${esc(xLabel)}</text>`,
  );
  parts.push(
    `<text x="${x0 - 46}" y="${panel.y + panel.height / 2}" font-size="13" text-anchor="middle" transform="rotate(-90 ${x0 - 46} ${panel.y + panel.height / 2})">${esc(yLabel)}</text>`,
  );
  return parts.join("\n");
}

export function polyline(
  xs: number[],
  ys: number[],
  xScale: Scale,
  yScale: Scale,
  color: string,
  dash: string,
): string {
  const pts = xs
    .map((x, i) => `${xScale(x).toFixed(2)},${yScale(ys[i]).toFixed(2)}`)
    .join(" ");
  const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
  return `<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="1.6"${dashAttr}/>`;
}

export function legend(
  panel: Panel,
  entries: { label: string; color: string; dash: string }[],
): string {
  const parts: string[] = [];
  entries.forEach((e, i) => {
    const y = panel.y + 16 + i * 18;
    const x = panel.x + panel.width - 130;
    const dashAttr = e.dash ? ` stroke-dasharray="${e.dash}"` : "";
    parts.push(
      `<line x1="${x}" y1="${y - 4}" x2="${x + 26}" y2="${y - 4}" stroke="${e.color}" stroke-width="2"${dashAttr}/>`,
    );
    parts.push(`<text x="${x + 32}" y="${y}" font-size="12">${esc(e.label)}</text>`);
  });
  return parts.join("\n");
}

export function document(width: number, height: number, title: string, body: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    `<text x="${width / 2}" y="22" font-size="15" text-anchor="middle">${esc(title)}</text>`,
    body,
    `</svg>`,
  ].join("\n");
}
