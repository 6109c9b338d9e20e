#!/usr/bin/env node
/** Render a ms figure from its CSV: --in <csv> --out <svg>. */

import { runPlot } from "./cli";

if (require.main === module) {
  process.exit(runPlot("ms", process.argv.slice(2)));
}
