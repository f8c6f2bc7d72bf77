/* tslint:disable */
/* eslint-disable */

export class Demo {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Runs the pipeline. Returns detections flattened like [`Demo::truth`]
     * followed by `[matched, mean |dz| in mm]`.
     */
    detect(): Float64Array;
    hologram_rgba(): Uint8Array;
    /**
     * Simulates a new hologram.
     */
    constructor(particles: number, seed: number, noise: number);
    refocus_rgba(z_mm: number): Uint8Array;
    size(): number;
    /**
     * Ground truth as `[col_px, row_px, z_mm, diameter_um, ...]`.
     */
    truth(): Float64Array;
    z_max_mm(): number;
    z_min_mm(): number;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demo_free: (a: number, b: number) => void;
    readonly demo_detect: (a: number) => [number, number, number, number];
    readonly demo_hologram_rgba: (a: number) => [number, number];
    readonly demo_new: (a: number, b: number, c: number) => [number, number, number];
    readonly demo_refocus_rgba: (a: number, b: number) => [number, number, number, number];
    readonly demo_size: (a: number) => number;
    readonly demo_truth: (a: number) => [number, number];
    readonly demo_z_max_mm: (a: number) => number;
    readonly demo_z_min_mm: (a: number) => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
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
