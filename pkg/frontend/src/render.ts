/** SVG rendering: node glyphs by kind, dashed red rings around the cut,
 * greyed-out removed nodes, cost labels, arrowed dependency edges. */

import { LayoutNode } from "./layout.js";
import { ViewState } from "./model.js";
import { GraphNode, isConnector } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const FILL: Record<string, string> = {
  sensor: "#7fb3d5",
  actuator: "#f5b041",
  agent: "#82e0aa",
  and: "#d7dbdd",
  or: "#d7dbdd",
  source: "#d2b4de",
};

function make(tag: string, attrs: Record<string, string | number>): SVGElement {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

export interface RenderCallbacks {
  onSelect: (nodeId: string) => void;
}

export function render(
  svg: SVGSVGElement,
  state: ViewState,
  positions: LayoutNode[],
  selected: string | null,
  callbacks: RenderCallbacks,
): void {
  svg.textContent = "";
  const defs = make("defs", {});
  defs.innerHTML =
    '<marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" ' +
    'markerWidth="7" markerHeight="7" orient="auto-start-reverse">' +
    '<path d="M 0 0 L 10 5 L 0 10 z" fill="#888"></path></marker>';
  svg.appendChild(defs);

  const pos = new Map(positions.map((p) => [p.id, p]));
  const byId = new Map(state.original.nodes.map((n) => [n.id, n]));
  const aliveEdges = new Set(state.graph.edges.map((e) => `${e.source}->${e.target}`));

  for (const edge of state.original.edges) {
    const a = pos.get(edge.source);
    const b = pos.get(edge.target);
    if (!a || !b) {
      continue;
    }
    const removed = !aliveEdges.has(`${edge.source}->${edge.target}`);
    const line = make("line", {
      x1: a.x,
      y1: a.y,
      x2: b.x,
      y2: b.y,
      class: removed ? "edge removed" : "edge",
    });
    if (!removed) {
      line.setAttribute("marker-end", "url(#arrow)");
    }
    svg.appendChild(line);
  }

  for (const node of state.original.nodes) {
    const p = pos.get(node.id);
    if (!p) {
      continue;
    }
    const group = make("g", {
      class: nodeClass(state, node, selected),
      transform: `translate(${p.x},${p.y})`,
    });
    group.addEventListener("click", () => callbacks.onSelect(node.id));
    group.appendChild(glyph(node));
    if (state.highlight.has(node.id) && !state.removed.has(node.id)) {
      group.appendChild(
        make("circle", { r: 24, class: "cut-ring", fill: "none" }),
      );
    }
    const label = make("text", { y: 4, class: "node-label" });
    label.textContent = node.id;
    group.appendChild(label);
    if (!isConnector(node.type)) {
      const effective = state.overrides.get(node.id) ?? node.value;
      const cost = make("text", { y: 30, class: "cost-label" });
      cost.textContent = effective;
      group.appendChild(cost);
    }
    svg.appendChild(group);
  }
}

function nodeClass(state: ViewState, node: GraphNode, selected: string | null): string {
  const classes = ["node", `kind-${node.type}`];
  if (state.removed.has(node.id)) {
    classes.push("removed");
  }
  if (selected === node.id) {
    classes.push("selected");
  }
  if (node.id === state.original.target) {
    classes.push("target");
  }
  return classes.join(" ");
}

function glyph(node: GraphNode): SVGElement {
  const fill = FILL[node.type] ?? "#ccc";
  switch (node.type) {
    case "actuator":
      return make("rect", { x: -16, y: -14, width: 32, height: 28, rx: 4, fill });
    case "and":
    case "or": {
      const g = make("g", {});
      g.appendChild(make("rect", { x: -16, y: -12, width: 32, height: 24, rx: 12, fill }));
      return g;
    }
    case "agent": {
      const g = make("g", {});
      g.appendChild(make("polygon", { points: "0,-18 18,0 0,18 -18,0", fill }));
      return g;
    }
    default:
      return make("circle", { r: 17, fill });
  }
}

export function renderHistory(container: HTMLElement, state: ViewState): void {
  container.textContent = "";
  state.history.forEach((entry, index) => {
    const row = document.createElement("li");
    const kappa = Number.isFinite(entry.kappa) ? entry.kappa : "inf";
    row.textContent = `#${index + 1} κ=${kappa} cut={${entry.cutIds.join(", ")}} — ${entry.note}`;
    container.appendChild(row);
  });
}
