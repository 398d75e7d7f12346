#!/usr/bin/env node
import { readFileSync, realpathSync, writeFileSync } from "node:fs";
import path from "node:path";
import process from "node:process";
import { fileURLToPath } from "node:url";
import { parseArgs } from "node:util";

import { parseSummaryCsv, SchemaError } from "./csv.js";
import { renderFigure } from "./render.js";

const USAGE = "usage: figgen --input summary.csv --output figure.svg [--layout auto]";

/** Run the renderer; returns the process exit code instead of exiting. */
export function run(argv: string[]): number {
  let values: { input?: string; output?: string; layout?: string };
  try {
    values = parseArgs({
      args: argv,
      options: {
        input: { type: "string" },
        output: { type: "string" },
        layout: { type: "string", default: "auto" },
      },
    }).values;
  } catch (err) {
    console.error(`figgen: ${(err as Error).message}`);
    console.error(USAGE);
    return 2;
  }
  if (!values.input || !values.output) {
    console.error("figgen: --input and --output are both required");
    console.error(USAGE);
    return 2;
  }
  if (values.layout !== "auto") {
    console.error(`figgen: unknown layout ${JSON.stringify(values.layout)}; only "auto" exists`);
    return 2;
  }
  let text: string;
  try {
    text = readFileSync(values.input, "utf8");
  } catch (err) {
    console.error(`figgen: cannot read ${values.input}: ${(err as Error).message}`);
    return 1;
  }
  let svg: string;
  try {
    svg = renderFigure(parseSummaryCsv(text));
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`figgen: ${values.input}: ${err.message}`);
      return 1;
    }
    throw err;
  }
  writeFileSync(values.output, svg, "utf8");
  return 0;
}

const isMain = (() => {
  if (!process.argv[1]) {
    return false;
  }
  try {
    return realpathSync(path.resolve(process.argv[1])) === fileURLToPath(import.meta.url);
  } catch {
    return false;
  }
})();

if (isMain) {
  process.exit(run(process.argv.slice(2)));
}
