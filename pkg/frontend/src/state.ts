// Editor state and its pure transitions. All mutations return a new state;
// the undo stack is bounded; overlay toggles never touch anything that would
// trigger a request.

import type {
  AlgoStateJson,
  AnalysisResponse,
  InstanceFile,
  Point,
  StakeCell,
} from "./types.js";

export type Tool = "paint-seed" | "paint-path" | "erase" | "select-tile";

export interface Camera {
  panX: number;
  panY: number;
  zoom: number;
}

export interface OverlayToggles {
  visibility: boolean;
  pumping: boolean;
  conflict: boolean;
  stake: boolean;
}

export interface StepperState {
  i: number;
  j: number;
  state: AlgoStateJson | null; // opaque server state; null = not started
  halted: boolean;
  outcomeKind: string | null;
  stake: StakeCell[];
  events: Record<string, unknown>[];
}

export interface EditorState {
  instance: InstanceFile;
  tool: Tool;
  selectedTile: string;
  camera: Camera;
  overlays: OverlayToggles;
  lastResponse: AnalysisResponse | null;
  stepper: StepperState | null;
  warning: string | null;
  undoStack: InstanceFile[];
  requestSeq: number; // stale responses carry an older sequence number
}

export const UNDO_LIMIT = 64;

export function initialState(): EditorState {
  return {
    instance: { tileset: [], seed: [], path: [] },
    tool: "paint-path",
    selectedTile: "",
    camera: { panX: 0, panY: 0, zoom: 1 },
    overlays: { visibility: true, pumping: true, conflict: true, stake: true },
    lastResponse: null,
    stepper: null,
    warning: null,
    undoStack: [],
    requestSeq: 0,
  };
}

function cloneInstance(inst: InstanceFile): InstanceFile {
  return JSON.parse(JSON.stringify(inst));
}

function pushUndo(state: EditorState): InstanceFile[] {
  const stack = [...state.undoStack, cloneInstance(state.instance)];
  return stack.length > UNDO_LIMIT ? stack.slice(stack.length - UNDO_LIMIT) : stack;
}

function cellAt(inst: InstanceFile, p: Point) {
  const [x, y] = p;
  return {
    seed: inst.seed.find((c) => c.x === x && c.y === y),
    path: inst.path.find((c) => c.x === x && c.y === y),
  };
}

function adjacent(a: Point, b: Point): boolean {
  return Math.abs(a[0] - b[0]) + Math.abs(a[1] - b[1]) === 1;
}

/** Paint or erase one cell with the current tool; invalid path extensions
 * leave the instance untouched and set an inline warning. */
export function paintCell(state: EditorState, p: Point): EditorState {
  const [x, y] = p;
  const { seed, path } = cellAt(state.instance, p);

  if (state.tool === "erase") {
    const inst = cloneInstance(state.instance);
    const last = inst.path[inst.path.length - 1];
    if (last && last.x === x && last.y === y) {
      inst.path.pop(); // the path only shrinks from its end
    } else if (path) {
      return { ...state, warning: "only the last path cell can be erased" };
    } else {
      inst.seed = inst.seed.filter((c) => !(c.x === x && c.y === y));
    }
    return { ...state, instance: inst, undoStack: pushUndo(state), warning: null };
  }

  if (state.tool === "select-tile") {
    const name = path?.tile ?? seed?.tile;
    return name ? { ...state, selectedTile: name, warning: null } : state;
  }

  if (!state.selectedTile) {
    return { ...state, warning: "select a tile type first" };
  }
  if (seed || path) {
    return { ...state, warning: `cell (${x}, ${y}) is occupied` };
  }

  const inst = cloneInstance(state.instance);
  if (state.tool === "paint-seed") {
    inst.seed.push({ x, y, tile: state.selectedTile });
    return { ...state, instance: inst, undoStack: pushUndo(state), warning: null };
  }

  // paint-path: only 4-adjacent, non-repeating extensions
  const last = inst.path[inst.path.length - 1];
  const anchor: Point | null = last
    ? [last.x, last.y]
    : inst.seed.length
      ? null // first path tile must touch some seed tile
      : null;
  if (last) {
    if (!adjacent([last.x, last.y], p)) {
      return { ...state, warning: `(${x}, ${y}) is not adjacent to the path end` };
    }
  } else {
    const touchesSeed = inst.seed.some((c) => adjacent([c.x, c.y], p));
    if (!touchesSeed) {
      return { ...state, warning: "the first path tile must touch the seed" };
    }
  }
  void anchor;
  inst.path.push({ x, y, tile: state.selectedTile });
  return { ...state, instance: inst, undoStack: pushUndo(state), warning: null };
}

export function undo(state: EditorState): EditorState {
  if (!state.undoStack.length) return state;
  const stack = [...state.undoStack];
  const instance = stack.pop()!;
  return { ...state, instance, undoStack: stack, warning: null };
}

/** Pure view state: toggling overlays must never trigger a request. */
export function toggleOverlay(state: EditorState, key: keyof OverlayToggles): EditorState {
  return {
    ...state,
    overlays: { ...state.overlays, [key]: !state.overlays[key] },
  };
}

export function serializeInstance(state: EditorState): string {
  return JSON.stringify(state.instance, null, 2);
}

export function importInstance(state: EditorState, text: string): EditorState {
  const parsed = JSON.parse(text) as InstanceFile;
  if (!Array.isArray(parsed.tileset) || !Array.isArray(parsed.seed) || !Array.isArray(parsed.path)) {
    throw new Error("instance must have tileset, seed and path arrays");
  }
  return {
    ...state,
    instance: parsed,
    selectedTile: parsed.tileset[0]?.name ?? "",
    undoStack: pushUndo(state),
    lastResponse: null,
    stepper: null,
    warning: null,
  };
}

/** Live validity badge: structural checks only (the server is the oracle). */
export function validityBadge(state: EditorState): { valid: boolean; detail: string } {
  const inst = state.instance;
  if (!inst.tileset.length) return { valid: false, detail: "no tile types" };
  if (!inst.seed.length) return { valid: false, detail: "no seed" };
  const names = new Set(inst.tileset.map((t) => t.name));
  for (const c of [...inst.seed, ...inst.path]) {
    if (!names.has(c.tile)) return { valid: false, detail: `unknown tile ${c.tile}` };
  }
  for (let k = 1; k < inst.path.length; k++) {
    const a = inst.path[k - 1];
    const b = inst.path[k];
    if (Math.abs(a.x - b.x) + Math.abs(a.y - b.y) !== 1) {
      return { valid: false, detail: `path breaks adjacency at step ${k + 1}` };
    }
  }
  return { valid: true, detail: inst.path.length ? "ready" : "draw a path" };
}

export function canRun(state: EditorState): boolean {
  return validityBadge(state).valid && state.instance.path.length > 0;
}
