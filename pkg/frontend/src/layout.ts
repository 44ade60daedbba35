/** Small force-directed layout: spring edges, pairwise repulsion, gentle
 * centering. Deterministic seeding from node ids keeps reloads stable. */

import { GraphDoc } from "./types.js";

export interface LayoutNode {
  id: string;
  x: number;
  y: number;
  vx: number;
  vy: number;
}

const SPRING_LENGTH = 90;
const SPRING_K = 0.02;
const REPULSION = 2600;
const CENTER_PULL = 0.012;
const DAMPING = 0.85;

function hash01(text: string, salt: number): number {
  let h = 2166136261 ^ salt;
  for (let i = 0; i < text.length; i += 1) {
    h = Math.imul(h ^ text.charCodeAt(i), 16777619);
  }
  return ((h >>> 0) % 10000) / 10000;
}

export function initialLayout(graph: GraphDoc, width: number, height: number): LayoutNode[] {
  return graph.nodes.map((node) => ({
    id: node.id,
    x: width * (0.15 + 0.7 * hash01(node.id, 1)),
    y: height * (0.15 + 0.7 * hash01(node.id, 2)),
    vx: 0,
    vy: 0,
  }));
}

export function tick(
  nodes: LayoutNode[],
  graph: GraphDoc,
  width: number,
  height: number,
): void {
  const byId = new Map(nodes.map((n) => [n.id, n]));
  for (let i = 0; i < nodes.length; i += 1) {
    for (let j = i + 1; j < nodes.length; j += 1) {
      const a = nodes[i];
      const b = nodes[j];
      const dx = a.x - b.x;
      const dy = a.y - b.y;
      const d2 = Math.max(dx * dx + dy * dy, 25);
      const force = REPULSION / d2;
      const d = Math.sqrt(d2);
      a.vx += (dx / d) * force;
      a.vy += (dy / d) * force;
      b.vx -= (dx / d) * force;
      b.vy -= (dy / d) * force;
    }
  }
  for (const edge of graph.edges) {
    const a = byId.get(edge.source);
    const b = byId.get(edge.target);
    if (!a || !b) {
      continue;
    }
    const dx = b.x - a.x;
    const dy = b.y - a.y;
    const d = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
    const pull = SPRING_K * (d - SPRING_LENGTH);
    a.vx += (dx / d) * pull;
    a.vy += (dy / d) * pull;
    b.vx -= (dx / d) * pull;
    b.vy -= (dy / d) * pull;
  }
  for (const node of nodes) {
    node.vx += (width / 2 - node.x) * CENTER_PULL;
    node.vy += (height / 2 - node.y) * CENTER_PULL;
    node.vx *= DAMPING;
    node.vy *= DAMPING;
    node.x = Math.min(width - 20, Math.max(20, node.x + node.vx));
    node.y = Math.min(height - 20, Math.max(20, node.y + node.vy));
  }
}

export function settle(
  graph: GraphDoc,
  width: number,
  height: number,
  iterations = 260,
): LayoutNode[] {
  const nodes = initialLayout(graph, width, height);
  for (let i = 0; i < iterations; i += 1) {
    tick(nodes, graph, width, height);
  }
  return nodes;
}
