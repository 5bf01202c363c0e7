#!/usr/bin/env node
/**
 * Command line for the context-vector extractor.
 *
 * Exit codes: 0 success, 1 usage error, 2 data/model error.
 */

import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { extract, ExtractionError, type ExtractorConfig } from "./extract.js";
import { FormatError } from "./format.js";
import { DEFAULT_MODEL, ModelUnavailableError } from "./pretrained.js";

const USAGE = `usage: arafuse-extract [options]

Computes one contextual sentence vector per example and writes an
id<TAB>v1,v2,... file (the format \`arafuse train --context-vectors\`
consumes). Source texts come from exactly one of:

  --input FILE     cleaned id<TAB>text lines (arafuse preprocess --emit-text)
  --dataset FILE   labeled dataset TSV; cleaning is delegated to arafuse

options:
  --output FILE    where to write the vectors (required)
  --backend NAME   fixture | pretrained           (default: pretrained)
  --model NAME     pretrained checkpoint          (default: ${DEFAULT_MODEL})
  --hidden-size N  fixture vector width           (default: 16)
  --seed N         fixture weight seed            (default: 0)
  --max-len N      token cap, match the classifier's max_len (default: 100)
  --batch-size N   examples encoded concurrently  (default: 16)
  --help           show this text
`;

function intFlag(value: string | undefined, name: string): number | undefined {
  if (value === undefined) return undefined;
  const parsed = Number(value);
  if (!Number.isInteger(parsed)) {
    throw new UsageError(`${name} must be an integer, got ${JSON.stringify(value)}`);
  }
  return parsed;
}

class UsageError extends Error {}

export async function main(argv: string[]): Promise<number> {
  let config: ExtractorConfig;
  try {
    const { values } = parseArgs({
      args: argv,
      options: {
        input: { type: "string" },
        dataset: { type: "string" },
        output: { type: "string" },
        backend: { type: "string", default: "pretrained" },
        model: { type: "string" },
        "hidden-size": { type: "string" },
        seed: { type: "string" },
        "max-len": { type: "string" },
        "batch-size": { type: "string" },
        help: { type: "boolean", default: false },
      },
    });
    if (values.help) {
      process.stdout.write(USAGE);
      return 0;
    }
    if (values.backend !== "fixture" && values.backend !== "pretrained") {
      throw new UsageError(`--backend must be fixture or pretrained, got ${values.backend}`);
    }
    if (values.output === undefined) {
      throw new UsageError("--output is required");
    }
    config = {
      backend: values.backend,
      model: values.model,
      hiddenSize: intFlag(values["hidden-size"], "--hidden-size"),
      seed: intFlag(values.seed, "--seed"),
      maxLen: intFlag(values["max-len"], "--max-len"),
      batchSize: intFlag(values["batch-size"], "--batch-size"),
      input: values.input,
      dataset: values.dataset,
      output: values.output,
    };
  } catch (error) {
    process.stderr.write(`error: ${error instanceof Error ? error.message : String(error)}\n`);
    process.stderr.write(USAGE);
    return 1;
  }

  try {
    const written = await extract(config);
    process.stderr.write(`wrote ${written} vectors to ${config.output}\n`);
    return 0;
  } catch (error) {
    if (
      error instanceof ExtractionError ||
      error instanceof FormatError ||
      error instanceof ModelUnavailableError ||
      (error as NodeJS.ErrnoException)?.code === "ENOENT"
    ) {
      process.stderr.write(`error: ${error instanceof Error ? error.message : String(error)}\n`);
      return 2;
    }
    throw error;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  main(process.argv.slice(2)).then(
    (code) => process.exit(code),
    (error) => {
      process.stderr.write(`unexpected error: ${String(error)}\n`);
      process.exit(2);
    },
  );
}
