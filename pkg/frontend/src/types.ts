/**
 * Wire types, mirrored field-for-field from the engine service schemas.
 * The UI renders these values verbatim; it never computes indicators itself.
 */

export type AtnState = "initialisation" | "deliberation" | "decision" | "action";

export const ATN_STATES: readonly AtnState[] = [
  "initialisation",
  "deliberation",
  "decision",
  "action",
];

/** One factual agent as it appears in a snapshot's `agents` list. */
export interface AgentRow {
  id: number;
  key: string;
  feature: string;
  state: AtnState;
  pp: number;
  ps: number;
  pa: number;
  satisfaction: number;
  constancy: number;
  localisation: string;
  close: number;
  opposite: number;
}

export interface ClusterRow {
  id: number;
  dominant_type: string;
  members: number[];
  count: number;
  centroid: number[];
  max_state: AtnState;
  bbox: number[] | null;
  formed_cycle: number;
  updated_cycle: number;
}

export interface SalientFact {
  cycle: number;
  agent: number;
  type: string;
  key: string;
  pp: number;
}

export interface Diagnostic {
  index: number;
  source: string;
  error: string;
  message: string;
}

export interface Snapshot {
  cycle: number;
  frozen: boolean;
  agents: AgentRow[];
  clusters: ClusterRow[];
  salient: SalientFact[];
  diagnostics: Diagnostic[];
}

export type StreamMessage =
  | ({ kind: "snapshot" } & Snapshot)
  | { kind: "ack"; cmd: string; cycle: number; [extra: string]: unknown }
  | { kind: "error"; error: string; message: string; cycle?: number }
  | ({ kind: "salient" } & SalientFact);

/** Commands the UI may issue, exactly as `POST /control` / the stream accept them. */
export type ControlCommand =
  | { cmd: "freeze" }
  | { cmd: "resume" }
  | { cmd: "step" };

/** The three 2-D projections of the (PP, PS, PA) indicator space. */
export type AxisKey = "pp" | "ps" | "pa";

export interface AxisPair {
  x: AxisKey;
  y: AxisKey;
}

export const AXIS_PAIRS: readonly AxisPair[] = [
  { x: "pp", y: "ps" },
  { x: "pp", y: "pa" },
  { x: "ps", y: "pa" },
];

export function axisLabel(pair: AxisPair): string {
  return `${pair.x.toUpperCase()} × ${pair.y.toUpperCase()}`;
}
