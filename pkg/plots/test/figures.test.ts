import { mkdtempSync, readFileSync, statSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";

import { runPlot } from "../src/cli";
import { MissingColumnError, column, parseCsv, requireColumns } from "../src/csv";
import { renderHeatmap, renderMs, renderPacket, renderTraces } from "../src/figures";

const FIXTURES = join(__dirname, "fixtures");

function fixture(name: string): string {
  return readFileSync(join(FIXTURES, name), "utf-8");
}

describe("csv parsing", () => {
  it("parses a headed numeric table", () => {
    const t = parseCsv("a,b\n1,2\n3,4\n");
    expect(t.header).toEqual(["a", "b"]);
    expect(t.rows).toEqual([
      [1, 2],
      [3, 4],
    ]);
  });

  it("rejects tables with fewer than two data rows", () => {
    expect(() => parseCsv("a,b\n1,2\n")).toThrow(/two data rows/);
  });

  it("rejects ragged rows", () => {
    expect(() => parseCsv("a,b\n1,2\n3\n")).toThrow(/row 2/);
  });

  it("rejects non-numeric fields", () => {
    expect(() => parseCsv("a,b\n1,2\n3,oops\n")).toThrow(/non-numeric/);
  });

  it("names the missing column", () => {
    const t = parseCsv("a,b\n1,2\n3,4\n");
    expect(() => column(t, "zzz")).toThrow(MissingColumnError);
    expect(() => requireColumns(t, ["a", "zzz"])).toThrow(/zzz/);
  });
});

describe("figure renderers", () => {
  it("renders population traces with the three series", () => {
    const svg = renderTraces(fixture("populations.csv"));
    expect(svg).toContain("<svg");
    expect(svg.length).toBeGreaterThan(1000);
    for (const label of ["sc", "phonon", "spin"]) {
      expect(svg).toContain(`>${label}</text>`);
    }
    expect((svg.match(/<polyline/g) ?? []).length).toBeGreaterThanOrEqual(3);
  });

  it("renders the sweep heatmap with one cell per grid point", () => {
    const svg = renderHeatmap(fixture("fidelity_grid.csv"));
    // 4x4 grid, two panels (F and log-infidelity)
    expect((svg.match(/<rect class=|<rect x=/g) ?? []).length).toBeGreaterThanOrEqual(32);
    expect(svg).toContain("gamma_e (kHz)");
    expect(svg).toContain("g_pe (MHz)");
  });

  it("renders the packet snapshot", () => {
    const svg = renderPacket(fixture("packet.csv"));
    expect(svg).toContain("position (m)");
    expect((svg.match(/<polyline/g) ?? []).length).toBe(1);
  });

  it("renders gate dynamics with the ideal overlay", () => {
    const svg = renderMs(fixture("dynamics.csv"));
    for (const label of ["n_gg", "n_ee", "ideal"]) {
      expect(svg).toContain(`>${label}</text>`);
    }
  });

  it.each([
    ["traces", renderTraces, "pop_sc"],
    ["ms", renderMs, "ideal"],
  ] as const)("%s fails loudly on a missing column", (_name, renderer, col) => {
    expect(() => renderer("t_us,other\n0,1\n1,2\n")).toThrow(
      new RegExp(`missing column '(${col}|\\w+)'`),
    );
  });
});

describe("plot scripts", () => {
  const cases: [string, Parameters<typeof runPlot>[0], string][] = [
    ["populations.csv", "traces", "traces.svg"],
    ["fidelity_grid.csv", "heatmap", "heatmap.svg"],
    ["packet.csv", "packet", "packet.svg"],
    ["dynamics.csv", "ms", "ms.svg"],
  ];

  it.each(cases)("renders %s to a nonzero image", (csv, kind, out) => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const outPath = join(dir, out);
    const code = runPlot(kind, ["--in", join(FIXTURES, csv), "--out", outPath]);
    expect(code).toBe(0);
    expect(statSync(outPath).size).toBeGreaterThan(500);
    expect(readFileSync(outPath, "utf-8")).toContain("</svg>");
  });

  it("exits nonzero when a column is missing", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "t_us,nope\n0,1\n1,2\n");
    const code = runPlot("traces", ["--in", bad, "--out", join(dir, "x.svg")]);
    expect(code).toBe(1);
  });

  it("exits nonzero on unreadable input", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const code = runPlot("traces", [
      "--in",
      join(dir, "does-not-exist.csv"),
      "--out",
      join(dir, "x.svg"),
    ]);
    expect(code).toBe(1);
  });

  it("rejects unknown arguments", () => {
    expect(runPlot("traces", ["--frobnicate"])).toBe(1);
  });
});
