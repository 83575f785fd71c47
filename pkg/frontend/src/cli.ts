/**
 * plot --scenario <name> --in <csv> --out <img>
 *
 * Renders one simulator CSV artifact to an SVG image.  The scenario name
 * selects the schema and plot style; it defaults to the `scenario` entry of
 * the CSV's metadata line when present.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseCsv } from "./csv.js";
import { renderScenario } from "./scenarios.js";

interface Args {
  scenario?: string;
  input?: string;
  output?: string;
}

function parseArgs(argv: string[]): Args {
  const args: Args = {};
  for (let i = 0; i < argv.length; i++) {
    switch (argv[i]) {
      case "--scenario":
        args.scenario = argv[++i];
        break;
      case "--in":
        args.input = argv[++i];
        break;
      case "--out":
        args.output = argv[++i];
        break;
      default:
        throw new Error(`unknown argument '${argv[i]}'`);
    }
  }
  return args;
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
    if (!args.input || !args.output) {
      throw new Error("usage: plot --scenario <name> --in <csv> --out <img>");
    }
    const table = parseCsv(readFileSync(args.input, "utf8"));
    const scenario = args.scenario ?? table.meta["scenario"];
    if (!scenario) {
      throw new Error("no --scenario given and the CSV carries no scenario metadata");
    }
    const svg = renderScenario(scenario, table);
    writeFileSync(args.output, svg);
    console.log(`wrote ${args.output}`);
    return 0;
  } catch (err) {
    console.error(`plot: ${(err as Error).message}`);
    return 1;
  }
}

process.exit(main(process.argv.slice(2)));
