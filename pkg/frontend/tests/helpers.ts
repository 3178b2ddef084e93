/**
 * Shared test scaffolding: the recorded stream fixture (captured from a
 * live engine service run) and a scripted socket standing in for the
 * service on the other end of the stream.
 */

import { readFileSync } from "node:fs";
import { resolve } from "node:path";

import { decodeStreamMessage, type StreamSocket } from "../src/stream.js";
import type { AgentRow, Snapshot, StreamMessage } from "../src/types.js";

export function fixtureLines(): string[] {
  const path = resolve(process.cwd(), "tests/fixtures/stream.jsonl");
  return readFileSync(path, "utf8")
    .split("\n")
    .filter((line) => line.trim() !== "");
}

export function fixtureMessages(): StreamMessage[] {
  return fixtureLines().map(decodeStreamMessage);
}

export function fixtureSnapshots(): Snapshot[] {
  return fixtureMessages()
    .filter((m): m is StreamMessage & { kind: "snapshot" } => m.kind === "snapshot")
    .map(({ kind, ...snapshot }) => {
      void kind;
      return snapshot;
    });
}

/** First fixture snapshot at the given cycle (heartbeats repeat cycles). */
export function snapshotAt(cycle: number): Snapshot {
  const found = fixtureSnapshots().find((s) => s.cycle === cycle);
  if (!found) throw new Error(`fixture has no snapshot for cycle ${cycle}`);
  return found;
}

export function makeAgent(overrides: Partial<AgentRow> = {}): AgentRow {
  return {
    id: 1,
    key: "Phenomenon#14",
    feature: "(Phenomenon#14, type, fire, intensity, starting, localisation, 20|25, time, 1)",
    state: "initialisation",
    pp: 1.0,
    ps: 1.0,
    pa: 1.0,
    satisfaction: 0.3,
    constancy: 0.0,
    localisation: "20|25",
    close: 0,
    opposite: 0,
    ...overrides,
  };
}

export function makeSnapshot(agents: AgentRow[], overrides: Partial<Snapshot> = {}): Snapshot {
  return {
    cycle: 1,
    frozen: false,
    agents,
    clusters: [],
    salient: [],
    diagnostics: [],
    ...overrides,
  };
}

/** A service stand-in: records outbound frames, replays scripted inbound ones. */
export class MockSocket implements StreamSocket {
  sent: string[] = [];
  closed = false;
  onopen: ((ev?: unknown) => void) | null = null;
  onclose: ((ev?: unknown) => void) | null = null;
  onerror: ((ev?: unknown) => void) | null = null;
  onmessage: ((ev: { data: string }) => void) | null = null;

  constructor(readonly url: string = "ws://test/stream") {}

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.closed = true;
    this.onclose?.();
  }

  open(): void {
    this.onopen?.();
  }

  deliver(line: string): void {
    this.onmessage?.({ data: line });
  }

  sentCommands(): unknown[] {
    return this.sent.map((frame) => JSON.parse(frame));
  }
}
