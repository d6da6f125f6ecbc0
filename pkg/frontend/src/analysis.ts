// Analysis and stepper transitions: every overlay comes from the server's
// response — the playground computes nothing locally.

import { ApiClient, ApiError } from "./api.js";
import { canRun, type EditorState } from "./state.js";
import type { StepResponse } from "./types.js";

export interface Banner {
  kind: string; // Pumpable | Fragile | CageFree | StakeReached | Inconclusive | Error
  text: string;
  certificateJson: string | null; // download payload
}

export function bannerFor(state: EditorState): Banner | null {
  const resp = state.lastResponse;
  if (!resp) return null;
  const kind = resp.outcome.kind;
  const cert = resp.certificates.length ? JSON.stringify(resp.certificates[0]) : null;
  let text = kind;
  if (kind === "Pumpable" && resp.outcome.certificate) {
    const c = resp.outcome.certificate;
    text = `Pumpable: segment (${c.i}, ${c.j}) repeats forever`;
  } else if (kind === "Fragile" && resp.outcome.certificate) {
    const c = resp.outcome.certificate;
    text = `Fragile: blocked at (${c.conflict_point?.[0]}, ${c.conflict_point?.[1]})`;
  } else if (kind === "Inconclusive") {
    text = `Inconclusive: ${resp.outcome.reason ?? ""}`;
  }
  return { kind, text, certificateJson: cert };
}

export async function runAnalysis(state: EditorState, client: ApiClient): Promise<EditorState> {
  if (!canRun(state)) {
    return { ...state, warning: "instance is not ready to run" };
  }
  try {
    const resp = await client.analyze(state.instance);
    if (resp === null) return state; // superseded by a newer request
    return { ...state, lastResponse: resp, warning: null };
  } catch (err) {
    const msg = err instanceof ApiError ? `server ${err.status}: ${err.message}` : String(err);
    return {
      ...state,
      lastResponse: {
        outcome: { kind: "Error", reason: msg },
        certificates: [],
        trace: [],
        overlays: {},
      },
      warning: msg,
    };
  }
}

export function startStepper(state: EditorState, i: number, j: number): EditorState {
  return {
    ...state,
    stepper: { i, j, state: null, halted: false, outcomeKind: null, stake: [], events: [] },
  };
}

/** One algorithm transition; after a halt further stepping is a no-op. */
export async function stepAlgorithm(state: EditorState, client: ApiClient): Promise<EditorState> {
  const stepper = state.stepper;
  if (!stepper) return { ...state, warning: "start the stepper with a pair first" };
  if (stepper.halted) return { ...state, warning: "algorithm halted; stepping disabled" };
  try {
    const resp: StepResponse | null = await client.step(
      state.instance, stepper.i, stepper.j, stepper.state);
    if (resp === null) return state;
    return {
      ...state,
      warning: null,
      stepper: {
        ...stepper,
        state: resp.state,
        halted: resp.halted,
        outcomeKind: resp.outcome?.kind ?? null,
        stake: resp.stake,
        events: [...stepper.events, ...resp.events],
      },
    };
  } catch (err) {
    const msg = err instanceof ApiError ? `server ${err.status}: ${err.message}` : String(err);
    return { ...state, warning: msg };
  }
}

export function stepperMode(state: EditorState): string | null {
  const s = state.stepper?.state;
  return s && typeof s["mode"] === "string" ? (s["mode"] as string) : null;
}
