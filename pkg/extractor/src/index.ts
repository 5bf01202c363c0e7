export { FixtureEncoder, type FixtureOptions } from "./fixture.js";
export {
  DEFAULT_MODEL,
  ModelUnavailableError,
  PretrainedEncoder,
  type PretrainedOptions,
} from "./pretrained.js";
export { extract, ExtractionError, type ExtractorConfig } from "./extract.js";
export {
  FormatError,
  parseTexts,
  parseVectors,
  serializeVectors,
  type TextExample,
} from "./format.js";
