/** View model: what is shown, what is pending, and what already happened.
 *
 * The highlight set always equals the cut of the latest service response (or
 * of the loaded solution file); history only ever grows; undo restores whole
 * prior snapshots.
 */

import { removeNodes } from "./removal.js";
import { GraphDoc, HardenRound, ReportPayload, SolutionDoc } from "./types.js";

export interface HistoryEntry {
  kappa: number;
  cutIds: string[];
  note: string;
}

export interface ViewState {
  original: GraphDoc;
  graph: GraphDoc; // after interactive removals
  highlight: Set<string>;
  removed: Set<string>;
  overrides: Map<string, string>;
  pendingRemovals: Set<string>;
  history: HistoryEntry[];
  nonOperational: boolean;
  banner: string | null;
}

export function cutIds(doc: SolutionDoc | ReportPayload): string[] {
  return doc.cut.nodes.map((n) => n.id).sort();
}

export function loadSolution(doc: SolutionDoc): ViewState {
  const ids = cutIds(doc);
  return {
    original: doc.graph,
    graph: doc.graph,
    highlight: new Set(ids),
    removed: new Set(),
    overrides: new Map(),
    pendingRemovals: new Set(),
    history: [{ kappa: doc.cut.cost, cutIds: ids, note: "loaded solution" }],
    nonOperational: false,
    banner: null,
  };
}

export function loadGraph(graph: GraphDoc): ViewState {
  return {
    original: graph,
    graph,
    highlight: new Set(),
    removed: new Set(),
    overrides: new Map(),
    pendingRemovals: new Set(),
    history: [],
    nonOperational: false,
    banner: null,
  };
}

/** Remove one node locally (instant feedback), greying what collapses. */
export function applyLocalRemoval(state: ViewState, nodeId: string): ViewState {
  const remaining = removeNodes(state.graph, [nodeId]);
  const aliveIds = new Set(remaining.nodes.map((n) => n.id));
  const removed = new Set(state.removed);
  for (const node of state.graph.nodes) {
    if (!aliveIds.has(node.id)) {
      removed.add(node.id);
    }
  }
  const pending = new Set(state.pendingRemovals);
  pending.add(nodeId);
  return {
    ...state,
    graph: remaining,
    removed,
    pendingRemovals: pending,
    nonOperational: remaining.target === null,
  };
}

/** Fold a fresh analysis response into the view: new highlight, history row. */
export function applyServiceReport(
  state: ViewState,
  payload: ReportPayload,
  note: string,
): ViewState {
  const ids = cutIds(payload);
  return {
    ...state,
    highlight: new Set(ids),
    history: [...state.history, { kappa: payload.kappa, cutIds: ids, note }],
    banner: null,
  };
}

export function applyHardenTrace(state: ViewState, rounds: HardenRound[]): ViewState {
  const history = [...state.history];
  for (const round of rounds) {
    history.push({
      kappa: round.cost === "inf" ? Number.POSITIVE_INFINITY : round.cost,
      cutIds: [...round.cut].sort(),
      note: round.terminal ? "fully hardened" : "hardening round",
    });
  }
  const last = rounds[rounds.length - 1];
  return {
    ...state,
    highlight: new Set(last ? last.cut : []),
    history,
  };
}

/** Remediate the highlighted cut: pin every member to an infinite cost. */
export function remediateHighlight(state: ViewState): ViewState {
  const overrides = new Map(state.overrides);
  for (const id of state.highlight) {
    overrides.set(id, "inf");
  }
  return { ...state, overrides };
}

export function kappaSequence(state: ViewState): number[] {
  return state.history.map((h) => h.kappa);
}
