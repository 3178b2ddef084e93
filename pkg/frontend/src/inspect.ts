/**
 * The inspect panel: every stored fact about the selected agent — feature
 * text, state, all five indicators, acquaintance counts — straight from the
 * latest snapshot row. With nothing selected it lists the pool instead,
 * which doubles as the hit-test fallback for overlapping grid points.
 */

import { STATE_COLORS } from "./grid.js";
import { selectedRow, type ViewState } from "./state.js";
import type { AgentRow } from "./types.js";

function el(doc: Document, tag: string, className: string, text?: string): HTMLElement {
  const node = doc.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function stateBadge(doc: Document, state: AgentRow["state"]): HTMLElement {
  const badge = el(doc, "span", "state-badge", state);
  badge.style.backgroundColor = STATE_COLORS[state];
  return badge;
}

function indicatorRows(doc: Document, agent: AgentRow): HTMLElement {
  const dl = el(doc, "dl", "indicator-list");
  const fields: Array<[string, string | number]> = [
    ["pp", agent.pp],
    ["ps", agent.ps],
    ["pa", agent.pa],
    ["satisfaction", agent.satisfaction],
    ["constancy", agent.constancy],
    ["localisation", agent.localisation],
    ["close acquaintances", agent.close],
    ["opposite acquaintances", agent.opposite],
  ];
  for (const [label, value] of fields) {
    dl.appendChild(el(doc, "dt", "indicator-name", label));
    dl.appendChild(el(doc, "dd", `indicator-value indicator-${label.split(" ")[0]}`,
      String(value)));
  }
  return dl;
}

function agentList(doc: Document, state: ViewState): HTMLElement {
  const list = el(doc, "ul", "agent-list");
  for (const agent of state.snapshot?.agents ?? []) {
    const item = el(doc, "li", "agent-list-row",
      `#${agent.id} ${agent.key} — ${agent.state}`);
    item.dataset.agentId = String(agent.id);
    list.appendChild(item);
  }
  return list;
}

export function renderInspectPanel(doc: Document, state: ViewState): HTMLElement {
  const panel = el(doc, "div", "inspect-panel");
  panel.appendChild(el(doc, "h2", "panel-title", "Inspect"));

  if (state.selected === null) {
    panel.appendChild(el(doc, "p", "inspect-placeholder",
      "Select an agent on the grid, or from the list below."));
    panel.appendChild(agentList(doc, state));
    return panel;
  }

  const agent = selectedRow(state);
  if (!agent) {
    panel.appendChild(el(doc, "p", "inspect-removed",
      `Agent #${state.selected} was removed from the pool.`));
    panel.appendChild(agentList(doc, state));
    return panel;
  }

  const heading = el(doc, "div", "inspect-heading");
  heading.appendChild(el(doc, "span", "agent-key", `#${agent.id} ${agent.key}`));
  heading.appendChild(stateBadge(doc, agent.state));
  panel.appendChild(heading);
  panel.appendChild(el(doc, "code", "feature-text", agent.feature));
  panel.appendChild(indicatorRows(doc, agent));
  return panel;
}
