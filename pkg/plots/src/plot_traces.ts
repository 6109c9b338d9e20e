#!/usr/bin/env node
/** Render a traces figure from its CSV: --in <csv> --out <svg>. */

import { runPlot } from "./cli";

if (require.main === module) {
  process.exit(runPlot("traces", process.argv.slice(2)));
}
