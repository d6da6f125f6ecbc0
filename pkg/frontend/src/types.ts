// Wire types mirrored from the analysis service. The algorithm state is
// opaque to the playground: it travels to /step and back untouched.

export type GlueJson = [string, number];

export interface TileJson {
  name: string;
  north: GlueJson;
  east: GlueJson;
  south: GlueJson;
  west: GlueJson;
}

export interface CellJson {
  x: number;
  y: number;
  tile: string;
}

export interface InstanceFile {
  tileset: TileJson[];
  seed: CellJson[];
  path: CellJson[];
}

export interface CertificateJson {
  kind: "pumpable" | "fragile";
  i?: number;
  j?: number;
  verified_horizon?: number;
  growth_order?: [number, number, string][];
  conflict_point?: [number, number];
  version?: number;
}

export interface OutcomeJson {
  kind: string;
  certificate?: CertificateJson;
  reason?: string;
  [extra: string]: unknown;
}

export interface AnalysisResponse {
  outcome: OutcomeJson;
  certificates: CertificateJson[];
  trace: Record<string, unknown>[];
  overlays: {
    visibility?: string;
    pumping?: { i: number; j: number; iterations: number };
    conflict?: [number, number];
    witness_order?: [number, number, string][];
  };
}

export type AlgoStateJson = Record<string, unknown>;

export interface StakeCell {
  x: number;
  y: number;
  tile: string;
  provenance: "FromP" | "FromPTranslated";
}

export interface StepResponse {
  halted: boolean;
  outcome: OutcomeJson | null;
  events: Record<string, unknown>[];
  state: AlgoStateJson | null;
  stake: StakeCell[];
}

export type Point = [number, number];
