/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_plot_free: (a: number, b: number) => void;
export const characteristic: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const eigenfunctions: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const heat_profile: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const plot_count: (a: number) => number;
export const plot_label: (a: number, b: number) => [number, number];
export const plot_marks: (a: number) => [number, number];
export const plot_note: (a: number) => [number, number];
export const plot_values: (a: number, b: number) => [number, number];
export const plot_x: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
