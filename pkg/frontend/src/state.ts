/**
 * ViewState: everything the panels render from, updated atomically per
 * stream message. The state renders only from the latest snapshot and never
 * mutates engine state itself — control commands are the only write path.
 */

import type {
  AgentRow,
  AxisPair,
  SalientFact,
  Snapshot,
  StreamMessage,
} from "./types.js";
import type { ConnectionStatus } from "./stream.js";

export const SALIENT_LOG_LIMIT = 50;

export interface ViewState {
  connection: ConnectionStatus;
  snapshot: Snapshot | null;
  selected: number | null;
  axes: AxisPair;
  frozen: boolean;
  salient: SalientFact[];
  status: string;
}

export function initialViewState(): ViewState {
  return {
    connection: "connecting",
    snapshot: null,
    selected: null,
    axes: { x: "pp", y: "ps" },
    frozen: false,
    salient: [],
    status: "",
  };
}

/** Fold one stream message into the view; always returns a fresh object. */
export function applyMessage(state: ViewState, message: StreamMessage): ViewState {
  switch (message.kind) {
    case "snapshot": {
      const { kind, ...snapshot } = message;
      void kind;
      return { ...state, snapshot, frozen: snapshot.frozen };
    }
    case "ack": {
      const frozen =
        message.cmd === "freeze" ? true :
        message.cmd === "resume" ? false :
        state.frozen;
      return { ...state, frozen, status: `ack: ${message.cmd} (cycle ${message.cycle})` };
    }
    case "error":
      return { ...state, status: `error: ${message.error} — ${message.message}` };
    case "salient": {
      const { kind, ...fact } = message;
      void kind;
      const salient = [fact, ...state.salient].slice(0, SALIENT_LOG_LIMIT);
      return { ...state, salient };
    }
  }
}

export function setConnection(state: ViewState, connection: ConnectionStatus): ViewState {
  return { ...state, connection };
}

export function selectAgent(state: ViewState, id: number | null): ViewState {
  return { ...state, selected: id };
}

export function setAxes(state: ViewState, axes: AxisPair): ViewState {
  return { ...state, axes };
}

/** The selected agent's current row, or null once it is gone from the pool. */
export function selectedRow(state: ViewState): AgentRow | null {
  if (state.selected === null || !state.snapshot) return null;
  return state.snapshot.agents.find((a) => a.id === state.selected) ?? null;
}
