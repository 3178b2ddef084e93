/**
 * The salient-fact ticker: agents entering action scroll past here, newest
 * first, so emergence is visible without watching the grid.
 */

import type { SalientFact } from "./types.js";

export function renderTicker(doc: Document, facts: SalientFact[]): HTMLElement {
  const ticker = doc.createElement("ul");
  ticker.className = "salient-ticker";
  if (facts.length === 0) {
    const quiet = doc.createElement("li");
    quiet.className = "ticker-empty";
    quiet.textContent = "no salient facts yet";
    ticker.appendChild(quiet);
    return ticker;
  }
  for (const fact of facts) {
    const item = doc.createElement("li");
    item.className = "ticker-entry";
    item.dataset.agentId = String(fact.agent);
    item.textContent =
      `cycle ${fact.cycle}: ${fact.type} (${fact.key}) entered action at pp=${fact.pp}`;
    ticker.appendChild(item);
  }
  return ticker;
}
