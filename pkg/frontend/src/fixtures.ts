// Instances the playground offers as one-click starters (and that the tests
// drive through the service): the COL-N tall variant, HOOK-S, and NSHAPE.

import type { InstanceFile } from "./types.js";

export const COL_N_TALL: InstanceFile = {
  tileset: [
    { name: "t", north: ["a", 1], east: ["", 0], south: ["a", 1], west: ["", 0] },
  ],
  seed: [{ x: 0, y: 0, tile: "t" }],
  path: Array.from({ length: 8 }, (_, k) => ({ x: 0, y: k + 1, tile: "t" })),
};

export const HOOK_S: InstanceFile = {
  tileset: [
    { name: "s", north: ["p", 1], east: ["s", 1], south: ["", 0], west: ["s", 1] },
    { name: "p", north: ["p", 1], east: ["p", 1], south: ["p", 1], west: ["p", 1] },
  ],
  seed: [
    { x: 0, y: 0, tile: "s" },
    { x: 1, y: 0, tile: "s" },
  ],
  path: [
    { x: 0, y: 1, tile: "p" },
    { x: 0, y: 2, tile: "p" },
    { x: 1, y: 2, tile: "p" },
    { x: 1, y: 1, tile: "p" },
  ],
};

export const NSHAPE: InstanceFile = {
  tileset: [
    { name: "p", north: ["p", 1], east: ["p", 1], south: ["p", 1], west: ["p", 1] },
  ],
  seed: [{ x: 0, y: 0, tile: "p" }],
  path: [
    ...Array.from({ length: 5 }, (_, k) => ({ x: 0, y: k + 1, tile: "p" })),
    ...Array.from({ length: 4 }, (_, k) => ({ x: k + 1, y: 5, tile: "p" })),
    ...Array.from({ length: 7 }, (_, k) => ({ x: 4, y: 4 - k, tile: "p" })),
  ],
};

export const STARTERS: Record<string, InstanceFile> = {
  "COL-N (tall)": COL_N_TALL,
  "HOOK-S": HOOK_S,
  NSHAPE: NSHAPE,
};
