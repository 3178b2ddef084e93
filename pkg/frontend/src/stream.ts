/**
 * Stream codec and connection handling.
 *
 * One JSON object per message; `kind` discriminates. Decoding is strict so a
 * schema drift between engine and UI fails loudly instead of rendering junk.
 */

import type { ControlCommand, StreamMessage } from "./types.js";

const KINDS = new Set(["snapshot", "ack", "error", "salient"]);

export function decodeStreamMessage(text: string): StreamMessage {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch {
    throw new Error(`stream message is not JSON: ${text.slice(0, 80)}`);
  }
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    throw new Error("stream message must be a JSON object");
  }
  const kind = (doc as { kind?: unknown }).kind;
  if (typeof kind !== "string" || !KINDS.has(kind)) {
    throw new Error(`unknown stream message kind: ${String(kind)}`);
  }
  return doc as StreamMessage;
}

export function encodeCommand(command: ControlCommand): string {
  return JSON.stringify(command);
}

/** The part of WebSocket the client uses — injectable for tests. */
export interface StreamSocket {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: string }) => void) | null;
}

export type SocketFactory = (url: string) => StreamSocket;

export type ConnectionStatus = "connecting" | "open" | "closed";

export interface StreamHandlers {
  onMessage(message: StreamMessage): void;
  onStatus(status: ConnectionStatus): void;
}

/**
 * Maintains one duplex stream connection. Decoded messages and connection
 * changes are forwarded to the handlers; malformed frames are reported to
 * the console and skipped so one bad line cannot blank the view.
 */
export class StreamClient {
  private socket: StreamSocket | null = null;

  constructor(
    private readonly url: string,
    private readonly handlers: StreamHandlers,
    private readonly makeSocket: SocketFactory = (u) =>
      new WebSocket(u) as unknown as StreamSocket,
  ) {}

  connect(): void {
    this.handlers.onStatus("connecting");
    const socket = this.makeSocket(this.url);
    socket.onopen = () => this.handlers.onStatus("open");
    socket.onclose = () => this.handlers.onStatus("closed");
    socket.onerror = () => this.handlers.onStatus("closed");
    socket.onmessage = (ev) => {
      let message: StreamMessage;
      try {
        message = decodeStreamMessage(ev.data);
      } catch (err) {
        console.error(err);
        return;
      }
      this.handlers.onMessage(message);
    };
    this.socket = socket;
  }

  send(command: ControlCommand): void {
    if (!this.socket) throw new Error("not connected");
    this.socket.send(encodeCommand(command));
  }

  close(): void {
    this.socket?.close();
    this.socket = null;
  }
}
