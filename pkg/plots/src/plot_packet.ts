#!/usr/bin/env node
/** Render a packet figure from its CSV: --in <csv> --out <svg>. */

import { runPlot } from "./cli";

if (require.main === module) {
  process.exit(runPlot("packet", process.argv.slice(2)));
}
