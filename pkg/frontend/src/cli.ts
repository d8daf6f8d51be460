#!/usr/bin/env node
/**
 * figures <kind> --in <csv> --out <image.svg>
 *
 * Exit 0 iff the requested figure was written; schema problems exit
 * nonzero with a column diagnostic and write nothing.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { SchemaError, parseResultCsv } from "./csv.js";
import { FigureKind, buildFigure } from "./figures.js";

const KINDS: FigureKind[] = ["moments", "eigen-cdf", "capacity"];

interface Args {
  kind: FigureKind;
  input: string;
  output: string;
}

export function parseArgs(argv: string[]): Args {
  const [kind, ...rest] = argv;
  if (!KINDS.includes(kind as FigureKind)) {
    throw new Error(`usage: figures <${KINDS.join("|")}> --in <csv> --out <image>`);
  }
  let input: string | undefined;
  let output: string | undefined;
  for (let i = 0; i < rest.length; i += 2) {
    const flag = rest[i];
    const value = rest[i + 1];
    if (value === undefined) throw new Error(`missing value for ${flag}`);
    if (flag === "--in") input = value;
    else if (flag === "--out") output = value;
    else throw new Error(`unknown flag ${flag}`);
  }
  if (!input || !output) {
    throw new Error("both --in and --out are required");
  }
  return { kind: kind as FigureKind, input, output };
}

export function run(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 2;
  }
  let text: string;
  try {
    text = readFileSync(args.input, "utf8");
  } catch {
    console.error(`cannot read input file: ${args.input}`);
    return 1;
  }
  try {
    const svg = buildFigure(args.kind, parseResultCsv(text));
    writeFileSync(args.output, svg);
  } catch (err) {
    const prefix = err instanceof SchemaError ? "schema mismatch" : "render error";
    console.error(`${prefix}: ${(err as Error).message}`);
    return 1;
  }
  console.log(`wrote ${args.output}`);
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(run(process.argv.slice(2)));
}
