/* tslint:disable */
/* eslint-disable */

export class Scenario {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Exact trace distance of two Bloch vectors on a uniform grid.
     */
    distance(v1: Float64Array, v2: Float64Array, t0: number, t1: number, points: number): Float64Array;
    /**
     * Upper then lower envelope of the `z` or `x` pair, concatenated.
     */
    envelope(which: string, t0: number, t1: number, points: number): Float64Array;
    constructor(n_bath: number, g: number, omega_s: number, omega_b: number, t_bath: number);
    /**
     * Period, revival width and collapse time as a JSON string.
     */
    timescales(): string;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_scenario_free: (a: number, b: number) => void;
    readonly scenario_distance: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
    readonly scenario_envelope: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly scenario_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly scenario_timescales: (a: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
