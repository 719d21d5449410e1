/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const gap_curve: (a: number, b: number, c: number, d: number, e: number) => [number, number];
export const harmonic_profile: (a: number, b: number, c: number, d: number, e: number) => [number, number];
export const preset_graph: (a: number, b: number) => [number, number];
export const random_graph_json: (a: number, b: bigint) => [number, number];
export const spectrum: (a: number, b: number, c: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
