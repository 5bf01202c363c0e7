/**
 * Pretrained transformer backend.
 *
 * Loaded lazily through a dynamic import so the fixture backend works
 * without the optional dependency (and without network access). The
 * pooled sentence vector is the final-hidden-layer state at the leading
 * classification token — never a mean over positions, which would give
 * every token the same weight in the sentence representation.
 */

export const DEFAULT_MODEL = "aubmindlab/bert-base-arabertv02";

export class ModelUnavailableError extends Error {}

export interface PretrainedOptions {
  model?: string;
  maxLen?: number;
}

interface FeaturePipeline {
  (text: string, options: { pooling: "none" }): Promise<{
    data: Float32Array | Float64Array;
    dims: number[];
  }>;
}

export class PretrainedEncoder {
  readonly model: string;
  readonly maxLen: number;
  private pipe: FeaturePipeline;

  private constructor(model: string, maxLen: number, pipe: FeaturePipeline) {
    this.model = model;
    this.maxLen = maxLen;
    this.pipe = pipe;
  }

  static async load(options: PretrainedOptions = {}): Promise<PretrainedEncoder> {
    const model = options.model ?? DEFAULT_MODEL;
    const maxLen = options.maxLen ?? 100;
    let transformers: {
      pipeline(task: "feature-extraction", model: string): Promise<unknown>;
    };
    try {
      transformers = await import("@xenova/transformers");
    } catch (cause) {
      throw new ModelUnavailableError(
        "the optional dependency @xenova/transformers is not installed; " +
          "run `npm install @xenova/transformers` to use --backend pretrained",
      );
    }
    try {
      const pipe = (await transformers.pipeline("feature-extraction", model)) as FeaturePipeline;
      return new PretrainedEncoder(model, maxLen, pipe);
    } catch (cause) {
      throw new ModelUnavailableError(
        `could not load model ${JSON.stringify(model)}: ${String(cause)}`,
      );
    }
  }

  /** Final-layer vector at the classification-token position. */
  async encode(text: string): Promise<Float64Array> {
    const output = await this.pipe(text, { pooling: "none" });
    const dims = output.dims;
    const hidden = dims[dims.length - 1]!;
    // dims are [batch, tokens, hidden]; position 0 of the only sequence.
    const out = new Float64Array(hidden);
    for (let j = 0; j < hidden; j++) out[j] = output.data[j]!;
    return out;
  }
}
