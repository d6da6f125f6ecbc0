// Grid canvas rendering, y pointing north (rows flip for screen space).
// Everything drawn beyond the instance comes from the last server response.

import type { EditorState } from "./state.js";
import type { Point } from "./types.js";

export const CELL = 32;

export interface CanvasLike {
  width: number;
  height: number;
  getContext(kind: "2d"): CanvasRenderingContext2D | null;
}

export function cellToScreen(state: EditorState, p: Point, height: number): Point {
  const { panX, panY, zoom } = state.camera;
  const size = CELL * zoom;
  const sx = p[0] * size + panX;
  const sy = height - (p[1] + 1) * size - panY; // y-up
  return [sx, sy];
}

export function screenToCell(state: EditorState, sx: number, sy: number, height: number): Point {
  const { panX, panY, zoom } = state.camera;
  const size = CELL * zoom;
  return [Math.floor((sx - panX) / size), Math.floor((height - sy - panY) / size)];
}

const SEED_FILL = "#b5b5b5";
const PATH_FILL = "#fdf6dd";
const GHOST_FILL = "rgba(90, 155, 220, 0.45)";
const STAKE_COLORS = { FromP: "#2c8c4b", FromPTranslated: "#e07a00" } as const;

export function draw(state: EditorState, canvas: CanvasLike): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const { width, height } = canvas;
  const size = CELL * state.camera.zoom;
  ctx.clearRect(0, 0, width, height);

  // grid
  ctx.strokeStyle = "rgba(0,0,0,0.15)";
  ctx.lineWidth = 1;
  for (let x = (state.camera.panX % size); x <= width; x += size) {
    ctx.beginPath();
    ctx.moveTo(x, 0);
    ctx.lineTo(x, height);
    ctx.stroke();
  }
  for (let y = ((height - state.camera.panY) % size); y <= height; y += size) {
    ctx.beginPath();
    ctx.moveTo(0, y);
    ctx.lineTo(width, y);
    ctx.stroke();
  }

  const box = (p: Point, fill: string, stroke = "#555") => {
    const [sx, sy] = cellToScreen(state, p, height);
    ctx.fillStyle = fill;
    ctx.fillRect(sx, sy, size, size);
    ctx.strokeStyle = stroke;
    ctx.strokeRect(sx, sy, size, size);
  };

  for (const c of state.instance.seed) box([c.x, c.y], SEED_FILL);
  state.instance.path.forEach((c, k) => {
    box([c.x, c.y], PATH_FILL);
    const [sx, sy] = cellToScreen(state, [c.x, c.y], height);
    ctx.fillStyle = "#333";
    ctx.font = `${Math.max(8, size / 3)}px sans-serif`;
    ctx.textAlign = "center";
    ctx.fillText(String(k + 1), sx + size / 2, sy + size / 2 + 4);
  });

  // origin marker
  {
    const [sx, sy] = cellToScreen(state, [0, 0], height);
    ctx.strokeStyle = "#07c";
    ctx.strokeRect(sx + 2, sy + 2, size - 4, size - 4);
  }

  const overlays = state.lastResponse?.overlays ?? {};
  if (state.overlays.pumping && overlays.pumping) {
    ghostPumpedTiles(state, ctx, height, size);
  }
  if (state.overlays.conflict && overlays.conflict) {
    const [cx, cy] = overlays.conflict;
    const [sx, sy] = cellToScreen(state, [cx, cy], height);
    ctx.strokeStyle = "#e00";
    ctx.lineWidth = 3;
    ctx.beginPath();
    ctx.moveTo(sx + 4, sy + 4);
    ctx.lineTo(sx + size - 4, sy + size - 4);
    ctx.moveTo(sx + 4, sy + size - 4);
    ctx.lineTo(sx + size - 4, sy + 4);
    ctx.stroke();
    ctx.lineWidth = 1;
  }
  if (state.overlays.stake && state.stepper) {
    for (const cell of state.stepper.stake) {
      const [sx, sy] = cellToScreen(state, [cell.x, cell.y], height);
      ctx.strokeStyle = STAKE_COLORS[cell.provenance] ?? "#e07a00";
      ctx.lineWidth = 3;
      ctx.strokeRect(sx + 3, sy + 3, size - 6, size - 6);
      ctx.lineWidth = 1;
    }
  }
}

/** Ghost positions derive purely from the server's pumping overlay applied to
 * the declared segment of the drawn path (the formula's translate, no local
 * decision-making). */
export function ghostCells(state: EditorState): Point[] {
  const overlays = state.lastResponse?.overlays;
  const pump = overlays?.pumping;
  if (!pump) return [];
  const path = state.instance.path;
  if (pump.i < 1 || pump.j > path.length || pump.i >= pump.j) return [];
  const pi = path[pump.i - 1];
  const pj = path[pump.j - 1];
  const v: Point = [pj.x - pi.x, pj.y - pi.y];
  const occupied = new Set(
    [...state.instance.seed, ...path].map((c) => `${c.x},${c.y}`),
  );
  const out: Point[] = [];
  for (let n = 1; n <= pump.iterations; n++) {
    for (let k = pump.i - 1; k < pump.j; k++) {
      const q: Point = [path[k].x + v[0] * n, path[k].y + v[1] * n];
      const key = `${q[0]},${q[1]}`;
      if (!occupied.has(key)) {
        occupied.add(key);
        out.push(q);
      }
    }
  }
  return out;
}

function ghostPumpedTiles(
  state: EditorState,
  ctx: CanvasRenderingContext2D,
  height: number,
  size: number,
): void {
  for (const q of ghostCells(state)) {
    const [sx, sy] = cellToScreen(state, q, height);
    ctx.fillStyle = GHOST_FILL;
    ctx.fillRect(sx, sy, size, size);
    ctx.strokeStyle = "#69a";
    ctx.strokeRect(sx, sy, size, size);
  }
}
