/**
 * Deterministic stand-in encoder for tests and offline development.
 *
 * A real run uses a pretrained transformer; tests need something with
 * the same observable contract — whitespace tokens in, one vector per
 * sentence out, pooled at the leading classification token — that is a
 * pure function of (seed, text). This mini-encoder draws every weight
 * from a counter-based hash of the seed, runs one scaled-dot-product
 * attention pass so every token influences the pooled vector, and
 * projects through tanh. No randomness at call time, no state.
 */

const CLS_TOKEN = "cls";

/** FNV-1a 32-bit hash over UTF-16 code units. */
function hash32(text: string): number {
  let h = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 0x01000193);
  }
  return h >>> 0;
}

/** Counter-based uniform in [0, 1): a pure function of the four words. */
function rand01(a: number, b: number, c: number, d: number): number {
  let h = (a ^ Math.imul(b, 0x9e3779b9) ^ Math.imul(c, 0x85ebca6b) ^ Math.imul(d, 0xc2b2ae35)) >>> 0;
  h = Math.imul(h ^ (h >>> 16), 0x21f0aaad);
  h = Math.imul(h ^ (h >>> 15), 0x735a2d97);
  h = (h ^ (h >>> 15)) >>> 0;
  return h / 4294967296;
}

/** Uniform in [-1, 1). */
function randSym(a: number, b: number, c: number, d: number): number {
  return 2 * rand01(a, b, c, d) - 1;
}

const TAG_TOKEN = 0x1;
const TAG_POSITION = 0x2;
const TAG_WEIGHT = 0x3;
const TAG_BIAS = 0x4;

export interface FixtureOptions {
  hiddenSize?: number;
  seed?: number;
  maxLen?: number;
}

export class FixtureEncoder {
  readonly hiddenSize: number;
  readonly seed: number;
  readonly maxLen: number;
  private readonly weight: Float64Array; // (hidden x hidden), row-major
  private readonly bias: Float64Array;

  constructor(options: FixtureOptions = {}) {
    this.hiddenSize = options.hiddenSize ?? 16;
    this.seed = options.seed ?? 0;
    this.maxLen = options.maxLen ?? 100;
    if (!Number.isInteger(this.hiddenSize) || this.hiddenSize < 1) {
      throw new RangeError(`hiddenSize must be a positive integer, got ${this.hiddenSize}`);
    }
    if (!Number.isInteger(this.maxLen) || this.maxLen < 1) {
      throw new RangeError(`maxLen must be a positive integer, got ${this.maxLen}`);
    }
    const h = this.hiddenSize;
    this.weight = new Float64Array(h * h);
    this.bias = new Float64Array(h);
    const scale = 1 / Math.sqrt(h);
    for (let r = 0; r < h; r++) {
      for (let c = 0; c < h; c++) {
        this.weight[r * h + c] = randSym(this.seed, r, c, TAG_WEIGHT) * scale;
      }
      this.bias[r] = randSym(this.seed, r, 0, TAG_BIAS) * 0.1;
    }
  }

  /** Sentence vector: the transformed classification-token position. */
  encode(text: string): Float64Array {
    const h = this.hiddenSize;
    const words = text.split(/\s+/u).filter((w) => w !== "");
    const tokens = [CLS_TOKEN, ...words.slice(0, this.maxLen)];
    const n = tokens.length;

    // Token vectors: hashed content plus a weaker positional term.
    const x = new Float64Array(n * h);
    for (let i = 0; i < n; i++) {
      const th = hash32(tokens[i]!);
      for (let j = 0; j < h; j++) {
        x[i * h + j] =
          randSym(this.seed, th, j, TAG_TOKEN) + 0.25 * randSym(this.seed, i, j, TAG_POSITION);
      }
    }

    // One attention pass, queried from the classification token only —
    // that is the single position we pool, so the rest are never read.
    const scores = new Float64Array(n);
    const invSqrt = 1 / Math.sqrt(h);
    let maxScore = -Infinity;
    for (let j = 0; j < n; j++) {
      let dot = 0;
      for (let k = 0; k < h; k++) dot += x[k]! * x[j * h + k]!;
      scores[j] = dot * invSqrt;
      if (scores[j]! > maxScore) maxScore = scores[j]!;
    }
    let denom = 0;
    for (let j = 0; j < n; j++) {
      scores[j] = Math.exp(scores[j]! - maxScore);
      denom += scores[j]!;
    }
    const mixed = new Float64Array(h);
    for (let j = 0; j < n; j++) {
      const a = scores[j]! / denom;
      for (let k = 0; k < h; k++) mixed[k] = mixed[k]! + a * x[j * h + k]!;
    }

    // Output projection with tanh keeps every component finite in (-1, 1).
    const out = new Float64Array(h);
    for (let r = 0; r < h; r++) {
      let acc = this.bias[r]!;
      for (let c = 0; c < h; c++) acc += this.weight[r * h + c]! * mixed[c]!;
      out[r] = Math.tanh(acc);
    }
    return out;
  }
}
