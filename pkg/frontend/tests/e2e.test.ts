// End-to-end against a running tilepump service (`tilepump serve --port 8425`).
// Skipped unless PLAYGROUND_API is set, so the suite is self-contained offline.

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { bannerFor, runAnalysis, startStepper, stepAlgorithm } from "../src/analysis.js";
import { ghostCells } from "../src/canvas.js";
import { importInstance, initialState } from "../src/state.js";
import { COL_N_TALL, HOOK_S, NSHAPE } from "../src/fixtures.js";

const API = process.env.PLAYGROUND_API;

describe.skipIf(!API)("playground against the live service", () => {
  const client = () => new ApiClient(API!);

  it("drawing the COL-N tall variant and pressing Run yields the Pumpable banner with ghosts", async () => {
    let s = importInstance(initialState(), JSON.stringify(COL_N_TALL));
    s = await runAnalysis(s, client());
    const banner = bannerFor(s)!;
    expect(banner.kind).toBe("Pumpable");
    expect(s.lastResponse!.overlays.pumping).toBeTruthy();
    expect(ghostCells(s).length).toBeGreaterThan(0);
    expect(banner.certificateJson).toContain("pumpable");
  }, 30_000);

  it("HOOK-S yields the conflict marker at (1, 0) for the descending pump", async () => {
    const c = client();
    const resp = await c.step(HOOK_S, 3, 4, null);
    expect(resp!.halted).toBe(true);
    expect(resp!.outcome!.kind).toBe("Fragile");
    // the analyze command on the same pair reports the conflict overlay
    const raw = await fetch(`${API}/api/v1/analyze`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ instance: HOOK_S, command: { kind: "pump", i: 3, j: 4 } }),
    }).then((r) => r.json());
    expect(raw.overlays.conflict).toEqual([1, 0]);
  }, 30_000);

  it("stepping NSHAPE replays the server trace event-for-event", async () => {
    // the server's one-shot run is the reference trace
    const pairResp = await fetch(`${API}/api/v1/analyze`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ instance: NSHAPE }),
    }).then((r) => r.json());
    expect(pairResp.outcome.kind).toBe("Pumpable");
    const [i, j] = [pairResp.pair.i, pairResp.pair.j];
    const reference = pairResp.trace.filter(
      (ev: Record<string, unknown>) => ["pump", "branch", "switch", "halt"].includes(String(ev.type)));

    // the stepper must deliver the same events, one transition at a time
    let s = importInstance(initialState(), JSON.stringify(NSHAPE));
    s = startStepper(s, i, j);
    const c = client();
    for (let guard = 0; guard < 32 && !s.stepper!.halted; guard++) {
      s = await stepAlgorithm(s, c);
    }
    expect(s.stepper!.halted).toBe(true);
    const stepped = s.stepper!.events.filter(
      (ev) => ["pump", "branch", "switch", "halt"].includes(String(ev.type)));
    expect(stepped).toEqual(reference);
  }, 60_000);
});
