/**
 * The control panel: cycle counter, connection badge, freeze/step/resume
 * buttons, and the last ack/error from the engine. Step is a guarded
 * mirror of the service contract — while the engine runs free the button
 * is disabled and no command is sent.
 */

import type { ViewState } from "./state.js";
import type { ControlCommand } from "./types.js";

export type CommandSink = (command: ControlCommand) => void;

function button(
  doc: Document,
  label: string,
  command: ControlCommand,
  enabled: boolean,
  send: CommandSink,
): HTMLButtonElement {
  const btn = doc.createElement("button");
  btn.className = `control-button control-${command.cmd}`;
  btn.textContent = label;
  btn.disabled = !enabled;
  btn.addEventListener("click", () => {
    if (!btn.disabled) send(command);
  });
  return btn;
}

export function renderControls(
  doc: Document,
  state: ViewState,
  send: CommandSink,
): HTMLElement {
  const bar = doc.createElement("div");
  bar.className = "control-bar";

  const cycle = doc.createElement("span");
  cycle.className = "cycle-counter";
  cycle.textContent = state.snapshot ? `cycle ${state.snapshot.cycle}` : "cycle —";
  bar.appendChild(cycle);

  const connection = doc.createElement("span");
  connection.className = `connection-badge connection-${state.connection}`;
  connection.textContent = state.connection;
  bar.appendChild(connection);

  const clock = doc.createElement("span");
  clock.className = state.frozen ? "clock-state frozen" : "clock-state running";
  clock.textContent = state.frozen ? "frozen" : "running";
  bar.appendChild(clock);

  const connected = state.connection === "open";
  bar.appendChild(button(doc, "Freeze", { cmd: "freeze" },
    connected && !state.frozen, send));
  bar.appendChild(button(doc, "Step", { cmd: "step" },
    connected && state.frozen, send));
  bar.appendChild(button(doc, "Resume", { cmd: "resume" },
    connected && state.frozen, send));

  const status = doc.createElement("span");
  status.className = "control-status";
  status.textContent = state.status;
  bar.appendChild(status);

  return bar;
}
