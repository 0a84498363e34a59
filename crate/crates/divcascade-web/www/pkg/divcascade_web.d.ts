/* tslint:disable */
/* eslint-disable */

export function beta_curve(part: string, x_min: number, x_max: number, n: number): Float64Array;

export function beta_info(part: string): Float64Array;

export function families(): string;

export function lt_curve(t: number, x_min: number, x_max: number, n: number): Float64Array;

export function parts(): string;

export function series_partial_sums(family: string, a: number, b: number, n_max: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly beta_curve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly beta_info: (a: number, b: number) => [number, number, number, number];
    readonly families: () => [number, number];
    readonly lt_curve: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly parts: () => [number, number];
    readonly series_partial_sums: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
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
