/**
 * The agent scatter grid: one point per agent, projected onto the chosen
 * indicator axis pair, colored by behavioral state. Axes auto-scale to the
 * snapshot's extrema with a 10% margin so the flow stays in frame.
 */

import type { AgentRow, AtnState, AxisPair, Snapshot } from "./types.js";

export const STATE_COLORS: Record<AtnState, string> = {
  initialisation: "#8c93a0",
  deliberation: "#2f7fd1",
  decision: "#e09c1a",
  action: "#d6402f",
};

export const GRID_WIDTH = 640;
export const GRID_HEIGHT = 440;
const PLOT_MARGIN = 36; // room for axis labels inside the viewBox

export interface AxisRange {
  min: number;
  max: number;
}

/** Extrema padded by 10% of the span; degenerate spans get a unit pad. */
export function axisRange(values: number[]): AxisRange {
  if (values.length === 0) return { min: -1, max: 1 };
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const pad = lo === hi ? 1 : (hi - lo) * 0.1;
  return { min: lo - pad, max: hi + pad };
}

function toPixel(value: number, range: AxisRange, size: number, invert: boolean): number {
  const fraction = (value - range.min) / (range.max - range.min);
  const scaled = fraction * (size - 2 * PLOT_MARGIN);
  return invert ? size - PLOT_MARGIN - scaled : PLOT_MARGIN + scaled;
}

const SVG_NS = "http://www.w3.org/2000/svg";

function svgElement<K extends keyof SVGElementTagNameMap>(
  doc: Document,
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const el = doc.createElementNS(SVG_NS, tag);
  for (const [name, value] of Object.entries(attrs)) el.setAttribute(name, value);
  return el;
}

function drawAxes(doc: Document, svg: SVGSVGElement, axes: AxisPair): void {
  const frame = svgElement(doc, "rect", {
    class: "grid-frame",
    x: String(PLOT_MARGIN),
    y: String(PLOT_MARGIN),
    width: String(GRID_WIDTH - 2 * PLOT_MARGIN),
    height: String(GRID_HEIGHT - 2 * PLOT_MARGIN),
    fill: "none",
    stroke: "#3a4150",
  });
  svg.appendChild(frame);
  const xLabel = svgElement(doc, "text", {
    class: "axis-label axis-x",
    x: String(GRID_WIDTH / 2),
    y: String(GRID_HEIGHT - 8),
    "text-anchor": "middle",
  });
  xLabel.textContent = axes.x.toUpperCase();
  const yLabel = svgElement(doc, "text", {
    class: "axis-label axis-y",
    x: "12",
    y: String(GRID_HEIGHT / 2),
    "text-anchor": "middle",
    transform: `rotate(-90 12 ${GRID_HEIGHT / 2})`,
  });
  yLabel.textContent = axes.y.toUpperCase();
  svg.appendChild(xLabel);
  svg.appendChild(yLabel);
}

/**
 * Render the scatter for one snapshot. Every circle carries
 * `data-agent-id`, so callers hit-test by event delegation; overlapping
 * points remain reachable through the inspect panel's agent list.
 */
export function renderGrid(
  doc: Document,
  snapshot: Snapshot | null,
  axes: AxisPair,
  selected: number | null,
): SVGSVGElement {
  const svg = svgElement(doc, "svg", {
    class: "agent-grid",
    viewBox: `0 0 ${GRID_WIDTH} ${GRID_HEIGHT}`,
    role: "img",
  });
  drawAxes(doc, svg, axes);
  const agents: AgentRow[] = snapshot?.agents ?? [];
  if (agents.length === 0) return svg;

  const xRange = axisRange(agents.map((a) => a[axes.x]));
  const yRange = axisRange(agents.map((a) => a[axes.y]));
  for (const agent of agents) {
    const isSelected = agent.id === selected;
    const point = svgElement(doc, "circle", {
      class: isSelected ? "agent-point selected" : "agent-point",
      cx: toPixel(agent[axes.x], xRange, GRID_WIDTH, false).toFixed(2),
      cy: toPixel(agent[axes.y], yRange, GRID_HEIGHT, true).toFixed(2),
      r: isSelected ? "9" : "6",
      fill: STATE_COLORS[agent.state],
      stroke: isSelected ? "#ffffff" : "none",
      "stroke-width": isSelected ? "2" : "0",
      "data-agent-id": String(agent.id),
    });
    const title = svgElement(doc, "title", {});
    title.textContent =
      `#${agent.id} ${agent.key} [${agent.state}] ` +
      `${axes.x}=${agent[axes.x]} ${axes.y}=${agent[axes.y]}`;
    point.appendChild(title);
    svg.appendChild(point);
  }
  return svg;
}
