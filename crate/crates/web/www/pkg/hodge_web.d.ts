/* tslint:disable */
/* eslint-disable */

/**
 * Dirichlet gap of the window [−N, N] for N = 2..=n_max.
 */
export function gap_curve(name: string, alpha: number | null | undefined, n_max: number): string;

/**
 * The closed edge form φ = a/c on the window, with its partial norms.
 */
export function harmonic_profile(name: string, alpha: number | null | undefined, radius: number): string;

export function preset_graph(name: string): string;

/**
 * A connected random graph with rational weights, as a graph file.
 */
export function random_graph_json(vertices: number, seed: bigint): string;

/**
 * Spectra of Δ₀ and Δ₁ plus the coincidence check, for a graph file.
 */
export function spectrum(graph_json: string, tol: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly gap_curve: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly harmonic_profile: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly preset_graph: (a: number, b: number) => [number, number];
    readonly random_graph_json: (a: number, b: bigint) => [number, number];
    readonly spectrum: (a: number, b: number, c: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
