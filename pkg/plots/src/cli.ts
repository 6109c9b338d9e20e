/** Shared command-line plumbing for the plot scripts. */

import { readFileSync, writeFileSync } from "fs";

import { FigureKind, render } from "./figures";

export function parseArgs(argv: string[]): { input: string; output: string } {
  let input: string | undefined;
  let output: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "--in") {
      input = argv[++i];
    } else if (argv[i] === "--out") {
      output = argv[++i];
    } else {
      throw new Error(`unknown argument '${argv[i]}' (expected --in/--out)`);
    }
  }
  if (!input || !output) {
    throw new Error("usage: --in <csv> --out <svg>");
  }
  return { input, output };
}

/** Read CSV, render, write SVG; returns a process exit code. */
export function runPlot(kind: FigureKind, argv: string[]): number {
  try {
    const { input, output } = parseArgs(argv);
    const csvText = readFileSync(input, "utf-8");
    const svg = render({ kind, input: csvText });
    writeFileSync(output, svg, "utf-8");
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}
