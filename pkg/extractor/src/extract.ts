/**
 * Orchestration: texts in, one context-vector file out.
 *
 * Input texts come either from a ready-made `id<TAB>text` file or from
 * a labeled dataset TSV, in which case the classifier package's own
 * cleaning is applied by shelling out to `arafuse preprocess
 * --emit-text` — both the static and the contextual branch must see
 * exactly the same text, and the single source of truth for cleaning
 * lives in that package.
 *
 * Vectors are computed batch-parallel (the pretrained backend benefits;
 * the fixture backend is synchronous anyway) and written once, by a
 * single writer, in input order. Ids are never invented: every output
 * id comes from the input file.
 */

import { execFile } from "node:child_process";
import { mkdtemp, readFile, rm, writeFile } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { promisify } from "node:util";

import { FixtureEncoder } from "./fixture.js";
import { parseTexts, serializeVectors, type TextExample } from "./format.js";
import { PretrainedEncoder } from "./pretrained.js";

const execFileAsync = promisify(execFile);

export class ExtractionError extends Error {}

export interface ExtractorConfig {
  backend: "fixture" | "pretrained";
  /** Pretrained checkpoint name (pretrained backend only). */
  model?: string;
  /** Vector width of the fixture backend (pretrained width comes from the model). */
  hiddenSize?: number;
  /** Seed for the fixture backend's generated weights. */
  seed?: number;
  /** Token cap per sentence; keep equal to the classifier's max_len. */
  maxLen?: number;
  /** Examples encoded concurrently. */
  batchSize?: number;
  /** `id<TAB>text` file of already-cleaned texts. */
  input?: string;
  /** Labeled dataset TSV; cleaned via `arafuse preprocess --emit-text`. */
  dataset?: string;
  /** Where the vector file is written. */
  output: string;
}

interface Encoder {
  encode(text: string): Float64Array | Promise<Float64Array>;
}

async function cleanDataset(dataset: string): Promise<{ dir: string; texts: string }> {
  const dir = await mkdtemp(join(tmpdir(), "arafuse-extract-"));
  const texts = join(dir, "texts.tsv");
  try {
    await execFileAsync("arafuse", [
      "preprocess",
      "--emit-text",
      "--dataset",
      dataset,
      "--output",
      texts,
    ]);
  } catch (cause) {
    await rm(dir, { recursive: true, force: true });
    const detail =
      cause && typeof cause === "object" && "stderr" in cause
        ? String((cause as { stderr: unknown }).stderr).trim()
        : String(cause);
    throw new ExtractionError(`arafuse preprocess failed: ${detail}`);
  }
  return { dir, texts };
}

async function readExamples(config: ExtractorConfig): Promise<TextExample[]> {
  if ((config.input === undefined) === (config.dataset === undefined)) {
    throw new ExtractionError("pass exactly one of input (cleaned texts) or dataset (labeled TSV)");
  }
  if (config.dataset !== undefined) {
    const { dir, texts } = await cleanDataset(config.dataset);
    try {
      return parseTexts(await readFile(texts, "utf-8"));
    } finally {
      await rm(dir, { recursive: true, force: true });
    }
  }
  return parseTexts(await readFile(config.input!, "utf-8"));
}

async function buildEncoder(config: ExtractorConfig): Promise<Encoder> {
  if (config.backend === "fixture") {
    return new FixtureEncoder({
      hiddenSize: config.hiddenSize,
      seed: config.seed,
      maxLen: config.maxLen,
    });
  }
  return PretrainedEncoder.load({ model: config.model, maxLen: config.maxLen });
}

/** Run the extraction; returns the number of vectors written. */
export async function extract(config: ExtractorConfig): Promise<number> {
  const examples = await readExamples(config);
  const encoder = await buildEncoder(config);
  const batchSize = config.batchSize ?? 16;
  if (!Number.isInteger(batchSize) || batchSize < 1) {
    throw new ExtractionError(`batchSize must be a positive integer, got ${batchSize}`);
  }

  const entries: Array<[string, Float64Array]> = [];
  for (let start = 0; start < examples.length; start += batchSize) {
    const batch = examples.slice(start, start + batchSize);
    const vectors = await Promise.all(
      batch.map(async (example) => {
        try {
          return await encoder.encode(example.text);
        } catch (cause) {
          // One bad example poisons the artifact; record it and abort.
          throw new ExtractionError(
            `encoding failed for example ${JSON.stringify(example.id)}: ${String(cause)}`,
          );
        }
      }),
    );
    for (let i = 0; i < batch.length; i++) {
      entries.push([batch[i]!.id, vectors[i]!]);
    }
  }

  await writeFile(config.output, serializeVectors(entries), "utf-8");
  return entries.length;
}
