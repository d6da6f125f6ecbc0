// DOM wiring: one canvas, a toolbar, the outcome banner, and the stepper.

import { ApiClient } from "./api.js";
import { bannerFor, runAnalysis, startStepper, stepAlgorithm, stepperMode } from "./analysis.js";
import { CELL, draw, screenToCell } from "./canvas.js";
import { STARTERS } from "./fixtures.js";
import {
  EditorState,
  Tool,
  canRun,
  importInstance,
  initialState,
  paintCell,
  serializeInstance,
  toggleOverlay,
  undo,
  validityBadge,
} from "./state.js";

const API_BASE = (window as unknown as { TILEPUMP_API?: string }).TILEPUMP_API
  ?? "http://127.0.0.1:8425";

let state: EditorState = initialState();
const client = new ApiClient(API_BASE);

const canvas = document.getElementById("grid") as HTMLCanvasElement;
const banner = document.getElementById("banner")!;
const badge = document.getElementById("badge")!;
const warning = document.getElementById("warning")!;
const modeIndicator = document.getElementById("mode")!;
const tileSelect = document.getElementById("tile-select") as HTMLSelectElement;
const certLink = document.getElementById("cert-link") as HTMLAnchorElement;
const runButton = document.getElementById("run") as HTMLButtonElement;
const stepButton = document.getElementById("step") as HTMLButtonElement;

function setState(next: EditorState): void {
  state = next;
  render();
}

function render(): void {
  draw(state, canvas);
  const validity = validityBadge(state);
  badge.textContent = validity.valid ? `✓ ${validity.detail}` : `✗ ${validity.detail}`;
  badge.className = validity.valid ? "ok" : "bad";
  warning.textContent = state.warning ?? "";
  runButton.disabled = !canRun(state) || client.busy;
  stepButton.disabled = !state.stepper || state.stepper.halted || client.busy;

  const b = bannerFor(state);
  banner.textContent = b ? b.text : "";
  banner.className = b ? `banner ${b.kind.toLowerCase()}` : "banner";
  if (b?.certificateJson) {
    certLink.href = URL.createObjectURL(
      new Blob([b.certificateJson], { type: "application/json" }));
    certLink.download = "certificate.json";
    certLink.style.display = "inline";
  } else {
    certLink.style.display = "none";
  }
  const mode = stepperMode(state);
  modeIndicator.textContent = state.stepper
    ? (state.stepper.halted ? `halted: ${state.stepper.outcomeKind}` : mode ?? "ready")
    : "";

  tileSelect.innerHTML = "";
  for (const t of state.instance.tileset) {
    const opt = document.createElement("option");
    opt.value = t.name;
    opt.textContent = t.name;
    opt.selected = t.name === state.selectedTile;
    tileSelect.appendChild(opt);
  }
}

canvas.addEventListener("click", (ev) => {
  const rect = canvas.getBoundingClientRect();
  const cell = screenToCell(state, ev.clientX - rect.left, ev.clientY - rect.top, canvas.height);
  setState(paintCell(state, cell));
});

canvas.addEventListener("wheel", (ev) => {
  ev.preventDefault();
  const zoom = Math.min(3, Math.max(0.4, state.camera.zoom * (ev.deltaY < 0 ? 1.1 : 0.9)));
  setState({ ...state, camera: { ...state.camera, zoom } });
});

let panning: [number, number] | null = null;
canvas.addEventListener("mousedown", (ev) => {
  if (ev.button === 1 || ev.shiftKey) panning = [ev.clientX, ev.clientY];
});
window.addEventListener("mousemove", (ev) => {
  if (!panning) return;
  const [px, py] = panning;
  panning = [ev.clientX, ev.clientY];
  setState({
    ...state,
    camera: {
      ...state.camera,
      panX: state.camera.panX + (ev.clientX - px),
      panY: state.camera.panY - (ev.clientY - py),
    },
  });
});
window.addEventListener("mouseup", () => (panning = null));

for (const tool of ["paint-seed", "paint-path", "erase", "select-tile"] as Tool[]) {
  document.getElementById(`tool-${tool}`)!.addEventListener("click", () => {
    setState({ ...state, tool });
  });
}

tileSelect.addEventListener("change", () => {
  setState({ ...state, selectedTile: tileSelect.value });
});

for (const key of ["visibility", "pumping", "conflict", "stake"] as const) {
  document.getElementById(`overlay-${key}`)!.addEventListener("change", () => {
    setState(toggleOverlay(state, key)); // pure view state: no request
  });
}

runButton.addEventListener("click", async () => {
  setState(await runAnalysis(state, client));
});

document.getElementById("start-stepper")!.addEventListener("click", () => {
  const i = Number((document.getElementById("pair-i") as HTMLInputElement).value);
  const j = Number((document.getElementById("pair-j") as HTMLInputElement).value);
  setState(startStepper(state, i, j));
});

stepButton.addEventListener("click", async () => {
  setState(await stepAlgorithm(state, client));
});

document.getElementById("undo")!.addEventListener("click", () => setState(undo(state)));

document.getElementById("export")!.addEventListener("click", () => {
  const blob = new Blob([serializeInstance(state)], { type: "application/json" });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = "instance.json";
  a.click();
});

(document.getElementById("import") as HTMLInputElement).addEventListener("change", async (ev) => {
  const file = (ev.target as HTMLInputElement).files?.[0];
  if (!file) return;
  try {
    setState(importInstance(state, await file.text()));
  } catch (err) {
    setState({ ...state, warning: String(err) });
  }
});

const starterSelect = document.getElementById("starters") as HTMLSelectElement;
for (const name of Object.keys(STARTERS)) {
  const opt = document.createElement("option");
  opt.value = name;
  opt.textContent = name;
  starterSelect.appendChild(opt);
}
starterSelect.addEventListener("change", () => {
  const inst = STARTERS[starterSelect.value];
  if (inst) setState(importInstance(state, JSON.stringify(inst)));
});

canvas.width = Math.min(window.innerWidth - 280, 1000);
canvas.height = Math.min(window.innerHeight - 160, 720);
state = {
  ...state,
  camera: { panX: canvas.width / 2 - 3 * CELL, panY: canvas.height / 2 - 4 * CELL, zoom: 1 },
};
render();
