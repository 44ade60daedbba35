/** Client-side node removal with the same propagation rules as the backend.
 *
 * Deleting a node also deletes each dependent that is atomic, an AND
 * connector, or an OR connector down to its last input (checked before the
 * deleted node's edges disappear). Kept in lockstep with the backend through
 * the shared fixture corpus under fixtures/removal/.
 */

import { GraphDoc, isConnector } from "./types.js";

export interface Survivors {
  nodes: string[]; // sorted ids
  edges: Array<[string, string]>; // sorted pairs
}

export function removeNodes(graph: GraphDoc, removed: Iterable<string>): GraphDoc {
  const kind = new Map(graph.nodes.map((n) => [n.id, n.type]));
  const successors = new Map<string, string[]>();
  const inDegree = new Map<string, number>();
  for (const node of graph.nodes) {
    successors.set(node.id, []);
    inDegree.set(node.id, 0);
  }
  for (const edge of graph.edges) {
    successors.get(edge.source)!.push(edge.target);
    inDegree.set(edge.target, (inDegree.get(edge.target) ?? 0) + 1);
  }

  const initial = [...new Set(removed)].sort();
  for (const id of initial) {
    if (!kind.has(id)) {
      throw new Error(`cannot remove unknown node '${id}'`);
    }
  }
  const alive = new Map([...kind.keys()].map((id) => [id, true]));
  const queue: string[] = [...initial];
  const queued = new Set(initial);
  let head = 0;
  while (head < queue.length) {
    const n = queue[head++];
    if (!alive.get(n)) {
      continue;
    }
    for (const x of successors.get(n)!) {
      if (!alive.get(x)) {
        continue;
      }
      const t = kind.get(x)!;
      if (!isConnector(t) || t === "and" || (t === "or" && inDegree.get(x) === 1)) {
        if (!queued.has(x)) {
          queue.push(x);
          queued.add(x);
        }
      }
    }
    alive.set(n, false);
    for (const x of successors.get(n)!) {
      if (alive.get(x)) {
        inDegree.set(x, inDegree.get(x)! - 1);
      }
    }
  }

  const target = graph.target !== null && alive.get(graph.target) ? graph.target : null;
  return {
    target,
    nodes: graph.nodes.filter((n) => alive.get(n.id)),
    edges: graph.edges.filter((e) => alive.get(e.source) && alive.get(e.target)),
  };
}

export function survivors(graph: GraphDoc): Survivors {
  return {
    nodes: graph.nodes.map((n) => n.id).sort(),
    edges: graph.edges
      .map((e) => [e.source, e.target] as [string, string])
      .sort((a, b) => (a[0] === b[0] ? a[1].localeCompare(b[1]) : a[0].localeCompare(b[0]))),
  };
}
