/* tslint:disable */
/* eslint-disable */

export class Plot {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    count(): number;
    label(i: number): string;
    /**
     * Positions on the x-axis to highlight, such as roots.
     */
    marks(): Float64Array;
    note(): string;
    values(i: number): Float64Array;
    x(): Float64Array;
}

export function characteristic(kind: string, param: number, n: number, kmax: number): Plot;

export function eigenfunctions(kind: string, param: number, n: number, modes: number): Plot;

export function heat_profile(kind: string, param: number, n: number, t: number): Plot;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_plot_free: (a: number, b: number) => void;
    readonly characteristic: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly eigenfunctions: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly heat_profile: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly plot_count: (a: number) => number;
    readonly plot_label: (a: number, b: number) => [number, number];
    readonly plot_marks: (a: number) => [number, number];
    readonly plot_note: (a: number) => [number, number];
    readonly plot_values: (a: number, b: number) => [number, number];
    readonly plot_x: (a: number) => [number, number];
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
