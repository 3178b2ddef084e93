/**
 * Application wiring: one ViewState, one stream connection, four panels
 * re-rendered from scratch on every state change. Pool sizes are
 * desk-scale, so full re-render per message stays comfortably real-time
 * and keeps every panel a pure function of the state.
 */

import { renderControls } from "./controls.js";
import { renderGrid } from "./grid.js";
import { renderInspectPanel } from "./inspect.js";
import {
  applyMessage,
  initialViewState,
  selectAgent,
  setAxes,
  setConnection,
  type ViewState,
} from "./state.js";
import { StreamClient, type SocketFactory } from "./stream.js";
import { renderTicker } from "./ticker.js";
import { AXIS_PAIRS, axisLabel, type ControlCommand } from "./types.js";

export interface AppHandle {
  state(): ViewState;
  send(command: ControlCommand): void;
  close(): void;
}

interface Mounts {
  controls: HTMLElement;
  grid: HTMLElement;
  inspect: HTMLElement;
  ticker: HTMLElement;
}

function requireMount(doc: Document, id: string): HTMLElement {
  const node = doc.getElementById(id);
  if (!node) throw new Error(`missing mount point #${id}`);
  return node;
}

export function defaultStreamUrl(loc: Location): string {
  const scheme = loc.protocol === "https:" ? "wss" : "ws";
  return `${scheme}://${loc.host}/stream`;
}

export function boot(
  doc: Document,
  streamUrl: string,
  makeSocket?: SocketFactory,
): AppHandle {
  const mounts: Mounts = {
    controls: requireMount(doc, "controls"),
    grid: requireMount(doc, "grid"),
    inspect: requireMount(doc, "inspect"),
    ticker: requireMount(doc, "ticker"),
  };

  let state = initialViewState();

  const client = new StreamClient(
    streamUrl,
    {
      onMessage(message) {
        update(applyMessage(state, message));
      },
      onStatus(status) {
        update(setConnection(state, status));
      },
    },
    makeSocket,
  );

  const send = (command: ControlCommand): void => client.send(command);

  function axisSelector(): HTMLElement {
    const select = doc.createElement("select");
    select.className = "axis-selector";
    for (const [index, pair] of AXIS_PAIRS.entries()) {
      const option = doc.createElement("option");
      option.value = String(index);
      option.textContent = axisLabel(pair);
      option.selected = pair.x === state.axes.x && pair.y === state.axes.y;
      select.appendChild(option);
    }
    select.addEventListener("change", () => {
      update(setAxes(state, AXIS_PAIRS[Number(select.value)]!));
    });
    return select;
  }

  function render(): void {
    mounts.controls.replaceChildren(renderControls(doc, state, send));
    mounts.grid.replaceChildren(
      axisSelector(),
      renderGrid(doc, state.snapshot, state.axes, state.selected),
    );
    mounts.inspect.replaceChildren(renderInspectPanel(doc, state));
    mounts.ticker.replaceChildren(renderTicker(doc, state.salient));
  }

  function update(next: ViewState): void {
    state = next;
    render();
  }

  // one delegated listener covers grid points, list rows, and ticker entries
  doc.addEventListener("click", (ev) => {
    const target = ev.target as Element | null;
    const carrier = target?.closest?.("[data-agent-id]");
    if (!carrier) return;
    update(selectAgent(state, Number(carrier.getAttribute("data-agent-id"))));
  });

  render();
  client.connect();

  return {
    state: () => state,
    send,
    close: () => client.close(),
  };
}
