import { describe, expect, it } from "vitest";

import { STATE_COLORS, axisRange, renderGrid } from "../src/grid.js";
import type { AtnState } from "../src/types.js";
import { fixtureSnapshots, makeAgent, makeSnapshot, snapshotAt } from "./helpers.js";

const DEFAULT_AXES = { x: "pp", y: "ps" } as const;

function points(svg: SVGSVGElement): SVGCircleElement[] {
  return Array.from(svg.querySelectorAll("circle.agent-point"));
}

describe("renderGrid", () => {
  it("draws one point per agent for every recorded snapshot", () => {
    for (const snapshot of fixtureSnapshots()) {
      const svg = renderGrid(document, snapshot, DEFAULT_AXES, null);
      const circles = points(svg);
      expect(circles).toHaveLength(snapshot.agents.length);
      const ids = circles.map((c) => c.getAttribute("data-agent-id"));
      expect(ids).toEqual(snapshot.agents.map((a) => String(a.id)));
    }
  });

  it("colors every point by its behavioral state", () => {
    const seen = new Set<AtnState>();
    for (const snapshot of fixtureSnapshots()) {
      const svg = renderGrid(document, snapshot, DEFAULT_AXES, null);
      const circles = points(svg);
      snapshot.agents.forEach((agent, i) => {
        expect(circles[i]!.getAttribute("fill")).toBe(STATE_COLORS[agent.state]);
        seen.add(agent.state);
      });
    }
    // the recorded run exercises the full state palette
    expect(seen).toEqual(
      new Set(["initialisation", "deliberation", "decision", "action"]),
    );
  });

  it("highlights the selected agent", () => {
    const svg = renderGrid(document, snapshotAt(7), DEFAULT_AXES, 1);
    const selected = svg.querySelector('circle[data-agent-id="1"]')!;
    expect(selected.getAttribute("class")).toBe("agent-point selected");
    expect(selected.getAttribute("r")).toBe("9");
    expect(selected.getAttribute("stroke")).toBe("#ffffff");
    const other = svg.querySelector('circle[data-agent-id="2"]')!;
    expect(other.getAttribute("class")).toBe("agent-point");
    expect(other.getAttribute("r")).toBe("6");
  });

  it("renders axes only for an empty pool", () => {
    const empty = snapshotAt(0);
    expect(empty.agents).toHaveLength(0);
    for (const snapshot of [empty, null]) {
      const svg = renderGrid(document, snapshot, DEFAULT_AXES, null);
      expect(points(svg)).toHaveLength(0);
      expect(svg.querySelector("rect.grid-frame")).not.toBeNull();
      const labels = Array.from(svg.querySelectorAll("text.axis-label"));
      expect(labels.map((l) => l.textContent)).toEqual(["PP", "PS"]);
    }
  });

  it("labels the axes for the chosen pair", () => {
    const svg = renderGrid(document, snapshotAt(7), { x: "ps", y: "pa" }, null);
    const labels = Array.from(svg.querySelectorAll("text.axis-label"));
    expect(labels.map((l) => l.textContent)).toEqual(["PS", "PA"]);
  });

  it("keeps fully overlapping agents individually addressable", () => {
    const snapshot = makeSnapshot([
      makeAgent({ id: 1, pp: 2.5, ps: 0.5 }),
      makeAgent({ id: 2, key: "Phenomenon#15", pp: 2.5, ps: 0.5, state: "decision" }),
      makeAgent({ id: 3, key: "Phenomenon#16", pp: 4.0, ps: -0.5 }),
    ]);
    const svg = renderGrid(document, snapshot, DEFAULT_AXES, null);
    const circles = points(svg);
    expect(circles).toHaveLength(3);
    const [a, b] = circles;
    expect(a!.getAttribute("cx")).toBe(b!.getAttribute("cx"));
    expect(a!.getAttribute("cy")).toBe(b!.getAttribute("cy"));
    expect(a!.getAttribute("data-agent-id")).toBe("1");
    expect(b!.getAttribute("data-agent-id")).toBe("2");
  });

  it("projects values onto the declared axis pair", () => {
    const snapshot = makeSnapshot([
      makeAgent({ id: 1, pp: 0, ps: 0, pa: -5 }),
      makeAgent({ id: 2, key: "Phenomenon#15", pp: 10, ps: 0, pa: 5 }),
    ]);
    const byPp = renderGrid(document, snapshot, { x: "pp", y: "ps" }, null);
    const byPa = renderGrid(document, snapshot, { x: "pa", y: "ps" }, null);
    const ppXs = points(byPp).map((c) => Number(c.getAttribute("cx")));
    const paXs = points(byPa).map((c) => Number(c.getAttribute("cx")));
    expect(ppXs[0]).toBeLessThan(ppXs[1]!);
    expect(paXs[0]).toBeLessThan(paXs[1]!);
    // equal padded fractions: pp 0..10 and pa -5..5 land on the same pixels
    expect(ppXs).toEqual(paXs);
  });
});

describe("axisRange", () => {
  it("pads extrema by 10% of the span", () => {
    expect(axisRange([0, 10])).toEqual({ min: -1, max: 11 });
    expect(axisRange([-2, 0, 8])).toEqual({ min: -3, max: 9 });
  });

  it("gives a unit pad to a degenerate span", () => {
    expect(axisRange([5, 5, 5])).toEqual({ min: 4, max: 6 });
  });

  it("defaults to a symmetric window when there are no values", () => {
    expect(axisRange([])).toEqual({ min: -1, max: 1 });
  });
});
