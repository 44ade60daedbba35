/** JSON contracts shared with the analysis service and its file formats. */

export type NodeType = "sensor" | "actuator" | "agent" | "and" | "or" | "source";

export interface GraphNode {
  id: string;
  type: NodeType;
  /** decimal string, "inf", or "none" for connectors */
  value: string;
}

export interface GraphEdge {
  source: string;
  target: string;
}

export interface GraphDoc {
  target: string | null;
  nodes: GraphNode[];
  edges: GraphEdge[];
}

/** Output file shape: the analyzed graph plus its minimal cut. */
export interface SolutionDoc {
  graph: GraphDoc;
  cut: {
    nodes: GraphNode[];
    cost: number;
  };
}

export interface ReportPayload {
  cut: { nodes: GraphNode[]; cost: number };
  kappa: number;
  cardinality: number;
  targetOnly: boolean;
  formulaText: string;
  objectiveText: string;
  cnfStats: { variables: number; clauses: number };
  timings: { transformationMs: number; solveMs: number };
  requestHash: string;
}

export interface HardenRound {
  cut: string[];
  cost: number | "inf";
  remediated: string[];
  terminal: boolean;
}

export interface HardenPayload {
  rounds: HardenRound[];
  status: string;
  requestHash: string;
}

export interface ErrorPayload {
  violations?: string[];
  error?: string;
  requestHash?: string;
}

export function isConnector(type: NodeType): boolean {
  return type === "and" || type === "or";
}
