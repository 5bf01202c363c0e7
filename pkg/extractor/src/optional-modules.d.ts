/**
 * The pretrained backend's dependency is optional: installs may skip it
 * (native transitive packages, offline mirrors) and the fixture backend
 * must still compile and run. This ambient declaration lets the dynamic
 * import typecheck either way; the call sites apply their own structural
 * types to what they use.
 */
declare module "@xenova/transformers";
