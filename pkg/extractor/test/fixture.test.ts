import { describe, expect, it } from "vitest";

import { FixtureEncoder } from "../src/fixture.js";

const TEXT = "الجو جميل اليوم";

describe("FixtureEncoder", () => {
  it("produces vectors of the configured width", () => {
    for (const hiddenSize of [1, 16, 64]) {
      const encoder = new FixtureEncoder({ hiddenSize, seed: 0 });
      expect(encoder.encode(TEXT)).toHaveLength(hiddenSize);
    }
  });

  it("is a pure function of seed and text", () => {
    const a = new FixtureEncoder({ hiddenSize: 16, seed: 7 });
    const b = new FixtureEncoder({ hiddenSize: 16, seed: 7 });
    expect(Array.from(a.encode(TEXT))).toEqual(Array.from(b.encode(TEXT)));
    // repeated calls on one instance agree too (no hidden state)
    expect(Array.from(a.encode(TEXT))).toEqual(Array.from(a.encode(TEXT)));
  });

  it("changes with the seed", () => {
    const a = new FixtureEncoder({ hiddenSize: 16, seed: 0 }).encode(TEXT);
    const b = new FixtureEncoder({ hiddenSize: 16, seed: 1 }).encode(TEXT);
    expect(Array.from(a)).not.toEqual(Array.from(b));
  });

  it("changes with the text, including token order", () => {
    const encoder = new FixtureEncoder({ hiddenSize: 16, seed: 0 });
    const sentence = Array.from(encoder.encode("جميل مزعج"));
    expect(Array.from(encoder.encode("مزعج جميل"))).not.toEqual(sentence);
    expect(Array.from(encoder.encode("جميل"))).not.toEqual(sentence);
  });

  it("caps the token count at maxLen", () => {
    const encoder = new FixtureEncoder({ hiddenSize: 8, seed: 3, maxLen: 5 });
    const words = Array.from({ length: 40 }, (_, i) => `w${i}`);
    const full = encoder.encode(words.join(" "));
    const truncated = encoder.encode(words.slice(0, 5).join(" "));
    expect(Array.from(full)).toEqual(Array.from(truncated));
    const shorter = encoder.encode(words.slice(0, 4).join(" "));
    expect(Array.from(full)).not.toEqual(Array.from(shorter));
  });

  it("handles empty and whitespace-only text", () => {
    const encoder = new FixtureEncoder({ hiddenSize: 8, seed: 0 });
    const empty = encoder.encode("");
    expect(Array.from(encoder.encode("   "))).toEqual(Array.from(empty));
    expect(empty.every((v) => Number.isFinite(v))).toBe(true);
  });

  it("keeps every component finite and inside the tanh range", () => {
    const encoder = new FixtureEncoder({ hiddenSize: 32, seed: 11 });
    const vector = encoder.encode(TEXT.repeat(30));
    expect(vector.every((v) => Number.isFinite(v) && Math.abs(v) < 1)).toBe(true);
  });

  it("rejects invalid options", () => {
    expect(() => new FixtureEncoder({ hiddenSize: 0 })).toThrow(RangeError);
    expect(() => new FixtureEncoder({ hiddenSize: 2.5 })).toThrow(RangeError);
    expect(() => new FixtureEncoder({ maxLen: 0 })).toThrow(RangeError);
  });
});
