import { describe, expect, it } from "vitest";

import { STATE_COLORS } from "../src/grid.js";
import { renderInspectPanel } from "../src/inspect.js";
import { applyMessage, initialViewState, selectAgent, type ViewState } from "../src/state.js";
import { snapshotAt } from "./helpers.js";

function stateAtCycle(cycle: number, selected: number | null): ViewState {
  const base = applyMessage(initialViewState(), { kind: "snapshot", ...snapshotAt(cycle) });
  return selectAgent(base, selected);
}

function indicatorValues(panel: HTMLElement): Map<string, string> {
  const pairs = new Map<string, string>();
  const names = Array.from(panel.querySelectorAll("dt.indicator-name"));
  const values = Array.from(panel.querySelectorAll("dd.indicator-value"));
  names.forEach((dt, i) => pairs.set(dt.textContent!, values[i]!.textContent!));
  return pairs;
}

describe("renderInspectPanel with a selection", () => {
  it("shows the feature text, state, indicators, and acquaintance counts", () => {
    const panel = renderInspectPanel(document, stateAtCycle(7, 1));

    expect(panel.querySelector(".agent-key")?.textContent).toBe("#1 Phenomenon#14");
    expect(panel.querySelector("code.feature-text")?.textContent).toBe(
      "(Phenomenon#14, type, fire, intensity, extremely_strongly, localisation, 20|25, time, 7)",
    );

    const badge = panel.querySelector(".state-badge") as HTMLElement;
    expect(badge.textContent).toBe("action");
    expect(badge.style.backgroundColor).not.toBe("");

    const values = indicatorValues(panel);
    expect(values.get("pp")).toBe("6.247987");
    expect(values.get("ps")).toBe("0.838356");
    expect(values.get("pa")).toBe("0.004524");
    expect(values.get("satisfaction")).toBe("0.790328");
    expect(values.get("constancy")).toBe("0.6");
    expect(values.get("localisation")).toBe("20|25");
    expect(values.get("close acquaintances")).toBe("1");
    expect(values.get("opposite acquaintances")).toBe("0");
  });

  it("colors the state badge from the shared palette", () => {
    const panel = renderInspectPanel(document, stateAtCycle(4, 1));
    const badge = panel.querySelector(".state-badge") as HTMLElement;
    expect(badge.textContent).toBe("decision");
    // jsdom normalizes hex colors to rgb(); compare through a scratch node
    const probe = document.createElement("span");
    probe.style.backgroundColor = STATE_COLORS.decision;
    expect(badge.style.backgroundColor).toBe(probe.style.backgroundColor);
  });

  it("tracks the newest snapshot for the same selection", () => {
    const at7 = renderInspectPanel(document, stateAtCycle(7, 1));
    const at8 = renderInspectPanel(document, stateAtCycle(8, 1));
    expect(indicatorValues(at7).get("pp")).toBe("6.247987");
    expect(indicatorValues(at8).get("pp")).toBe("7.062643");
  });

  it("marks a selection that has left the pool", () => {
    const panel = renderInspectPanel(document, stateAtCycle(7, 99));
    expect(panel.querySelector(".inspect-removed")?.textContent).toBe(
      "Agent #99 was removed from the pool.",
    );
    expect(panel.querySelector("code.feature-text")).toBeNull();
  });
});

describe("renderInspectPanel without a selection", () => {
  it("shows a placeholder and the clickable pool list", () => {
    const panel = renderInspectPanel(document, stateAtCycle(7, null));
    expect(panel.querySelector(".inspect-placeholder")).not.toBeNull();

    const rows = Array.from(panel.querySelectorAll("li.agent-list-row"));
    expect(rows).toHaveLength(7);
    expect(rows[0]?.textContent).toBe("#1 Phenomenon#14 — action");
    // rows carry the same hit-test attribute as grid points
    expect(rows.map((r) => (r as HTMLElement).dataset.agentId)).toEqual(
      ["1", "2", "3", "4", "5", "6", "7"],
    );
  });

  it("keeps the list available next to the removed marker", () => {
    const panel = renderInspectPanel(document, stateAtCycle(7, 99));
    expect(panel.querySelectorAll("li.agent-list-row")).toHaveLength(7);
  });

  it("renders the placeholder with no snapshot yet", () => {
    const panel = renderInspectPanel(document, initialViewState());
    expect(panel.querySelector(".inspect-placeholder")).not.toBeNull();
    expect(panel.querySelectorAll("li.agent-list-row")).toHaveLength(0);
  });
});
