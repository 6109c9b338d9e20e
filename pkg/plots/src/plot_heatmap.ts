#!/usr/bin/env node
/** Render a heatmap figure from its CSV: --in <csv> --out <svg>. */

import { runPlot } from "./cli";

if (require.main === module) {
  process.exit(runPlot("heatmap", process.argv.slice(2)));
}
