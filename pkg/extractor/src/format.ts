/**
 * The two line-oriented text formats this tool touches.
 *
 * Input:  cleaned texts, one `id<TAB>text` per line (the output of
 *         `arafuse preprocess --emit-text`). Text may be empty — a tweet
 *         that was pure noise cleans down to nothing — but the tab and a
 *         non-empty id are mandatory.
 * Output: context vectors, one `id<TAB>v1,v2,...` per line, every line
 *         with the same number of comma-separated finite floats.
 */

export interface TextExample {
  id: string;
  text: string;
}

export class FormatError extends Error {}

/** Parse `id<TAB>text` lines; blank lines are ignored. */
export function parseTexts(content: string): TextExample[] {
  const examples: TextExample[] = [];
  const seen = new Set<string>();
  const lines = content.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i]!;
    if (line.trim() === "") continue;
    const tab = line.indexOf("\t");
    if (tab < 0) {
      throw new FormatError(`line ${i + 1}: expected id<TAB>text, got ${JSON.stringify(line)}`);
    }
    const id = line.slice(0, tab);
    if (id === "") {
      throw new FormatError(`line ${i + 1}: empty example id`);
    }
    if (seen.has(id)) {
      throw new FormatError(`line ${i + 1}: duplicate example id ${JSON.stringify(id)}`);
    }
    seen.add(id);
    examples.push({ id, text: line.slice(tab + 1) });
  }
  if (examples.length === 0) {
    throw new FormatError("no examples found in input");
  }
  return examples;
}

/**
 * Serialize vectors in input order. Numbers use JavaScript's shortest
 * round-trip decimal form, which parses back to the identical double.
 */
export function serializeVectors(entries: Array<[string, Float64Array | number[]]>): string {
  let dim = -1;
  const lines: string[] = [];
  for (const [id, vector] of entries) {
    if (dim === -1) dim = vector.length;
    if (vector.length !== dim) {
      throw new FormatError(
        `vector for ${JSON.stringify(id)} has length ${vector.length}, expected ${dim}`,
      );
    }
    const parts = new Array<string>(vector.length);
    for (let j = 0; j < vector.length; j++) {
      const v = vector[j]!;
      if (!Number.isFinite(v)) {
        throw new FormatError(`non-finite component in vector for ${JSON.stringify(id)}`);
      }
      // String(-0) is "0"; spell the sign out so the value survives.
      parts[j] = Object.is(v, -0) ? "-0" : String(v);
    }
    lines.push(`${id}\t${parts.join(",")}`);
  }
  return lines.join("\n") + "\n";
}

/** Parse the vector format back (used by the tests for round trips). */
export function parseVectors(content: string): Map<string, number[]> {
  const out = new Map<string, number[]>();
  let dim = -1;
  const lines = content.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i]!;
    if (line.trim() === "") continue;
    const tab = line.indexOf("\t");
    if (tab < 0) throw new FormatError(`line ${i + 1}: expected id<TAB>components`);
    const id = line.slice(0, tab);
    if (out.has(id)) throw new FormatError(`line ${i + 1}: duplicate id ${JSON.stringify(id)}`);
    const values = line
      .slice(tab + 1)
      .split(",")
      .map((s) => Number(s));
    if (values.some((v) => !Number.isFinite(v))) {
      throw new FormatError(`line ${i + 1}: non-finite component`);
    }
    if (dim === -1) dim = values.length;
    if (values.length !== dim) {
      throw new FormatError(`line ${i + 1}: dimension ${values.length} != ${dim}`);
    }
    out.set(id, values);
  }
  if (out.size === 0) throw new FormatError("no vectors found");
  return out;
}
