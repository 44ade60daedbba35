/** Interactive console wiring: load a model or a solution file, inspect the
 * highlighted cut, and run what-if edits (cost overrides, removals,
 * remediation rounds) whose results feed the next decision. */

import { ServiceClient, ServiceError } from "./api.js";
import { LayoutNode, settle, tick } from "./layout.js";
import {
  ViewState,
  applyHardenTrace,
  applyLocalRemoval,
  applyServiceReport,
  loadGraph,
  loadSolution,
  remediateHighlight,
} from "./model.js";
import { render, renderHistory } from "./render.js";
import { GraphDoc, SolutionDoc } from "./types.js";

const SAMPLE: SolutionDoc = {
  graph: {
    target: "c1",
    nodes: [
      { id: "c1", type: "actuator", value: "inf" },
      { id: "d", type: "agent", value: "10" },
      { id: "or-d", type: "or", value: "none" },
      { id: "c", type: "sensor", value: "2" },
      { id: "b", type: "agent", value: "5" },
      { id: "a", type: "sensor", value: "2" },
      { id: "a-b", type: "and", value: "none" },
      { id: "b-c", type: "and", value: "none" },
    ],
    edges: [
      { source: "d", target: "c1" },
      { source: "or-d", target: "d" },
      { source: "a-b", target: "or-d" },
      { source: "b-c", target: "or-d" },
      { source: "a", target: "a-b" },
      { source: "b", target: "a-b" },
      { source: "b", target: "b-c" },
      { source: "c", target: "b-c" },
    ],
  },
  cut: {
    nodes: [
      { id: "a", type: "sensor", value: "2" },
      { id: "c", type: "sensor", value: "2" },
    ],
    cost: 4.0,
  },
};

class App {
  private state: ViewState;
  private undoStack: ViewState[] = [];
  private positions: LayoutNode[] = [];
  private selected: string | null = null;
  private client = new ServiceClient("");
  private svg: SVGSVGElement;
  private animating = 0;

  constructor() {
    this.svg = document.getElementById("graph") as unknown as SVGSVGElement;
    this.state = loadSolution(SAMPLE);
    this.relayout();
    this.bind();
    this.draw();
  }

  private bind(): void {
    byId("load-sample").addEventListener("click", () => {
      this.reset(loadSolution(SAMPLE));
    });
    (byId("load-file") as HTMLInputElement).addEventListener("change", (event) => {
      const input = event.target as HTMLInputElement;
      const file = input.files?.[0];
      if (file) {
        void file.text().then((text) => this.loadDocument(text));
      }
    });
    byId("analyze").addEventListener("click", () => void this.recompute("analysis"));
    byId("remove-node").addEventListener("click", () => this.removeSelected());
    byId("apply-override").addEventListener("click", () => this.overrideSelected());
    byId("remediate").addEventListener("click", () => void this.remediate());
    byId("harden").addEventListener("click", () => void this.harden());
    byId("undo").addEventListener("click", () => this.undo());
  }

  private loadDocument(text: string): void {
    try {
      const doc = JSON.parse(text) as Partial<SolutionDoc> & { graph?: GraphDoc };
      if (!doc.graph || !Array.isArray(doc.graph.nodes)) {
        throw new Error("document has no graph object");
      }
      this.reset(doc.cut ? loadSolution(doc as SolutionDoc) : loadGraph(doc.graph));
    } catch (err) {
      this.showError(`cannot load document: ${String(err)}`);
    }
  }

  private reset(state: ViewState): void {
    this.state = state;
    this.undoStack = [];
    this.selected = null;
    this.relayout();
    this.draw();
  }

  private snapshot(): void {
    this.undoStack.push(this.state);
  }

  private undo(): void {
    const previous = this.undoStack.pop();
    if (previous) {
      this.state = previous;
      this.draw();
    }
  }

  private removeSelected(): void {
    if (!this.selected || this.state.removed.has(this.selected)) {
      return;
    }
    this.snapshot();
    this.state = applyLocalRemoval(this.state, this.selected);
    this.draw();
  }

  private overrideSelected(): void {
    const value = (byId("override-value") as HTMLInputElement).value.trim();
    if (!this.selected || !value) {
      return;
    }
    this.snapshot();
    const overrides = new Map(this.state.overrides);
    overrides.set(this.selected, value);
    this.state = { ...this.state, overrides };
    this.draw();
    void this.recompute(`override ${this.selected}=${value}`);
  }

  private async remediate(): Promise<void> {
    if (this.state.highlight.size === 0) {
      return;
    }
    this.snapshot();
    this.state = remediateHighlight(this.state);
    await this.recompute("remediated cut");
  }

  private async recompute(note: string): Promise<void> {
    const ticket = this.client.nextTicket();
    try {
      const payload = await this.client.whatif(
        this.state.original,
        Object.fromEntries(this.state.overrides),
        [...this.state.pendingRemovals],
      );
      if (this.client.isStale(ticket)) {
        return; // superseded by a newer edit
      }
      this.snapshot();
      this.state = applyServiceReport(this.state, payload, note);
      this.draw();
    } catch (err) {
      this.handleServiceError(err);
    }
  }

  private async harden(): Promise<void> {
    const ticket = this.client.nextTicket();
    try {
      const payload = await this.client.harden(this.state.original, undefined, 8);
      if (this.client.isStale(ticket)) {
        return;
      }
      this.snapshot();
      this.state = applyHardenTrace(this.state, payload.rounds);
      this.draw();
    } catch (err) {
      this.handleServiceError(err);
    }
  }

  private handleServiceError(err: unknown): void {
    if (err instanceof ServiceError && err.status === 0) {
      this.showBanner("service offline — view unchanged");
    } else if (err instanceof ServiceError && err.violations.length > 0) {
      this.showError(err.violations.join("\n"));
    } else {
      this.showError(String(err instanceof Error ? err.message : err));
    }
  }

  private showBanner(text: string): void {
    this.state = { ...this.state, banner: text };
    this.draw();
  }

  private showError(text: string): void {
    const panel = byId("error-panel");
    panel.textContent = text;
    panel.classList.remove("hidden");
    window.setTimeout(() => panel.classList.add("hidden"), 6000);
  }

  private relayout(): void {
    const rect = this.svg.getBoundingClientRect();
    const width = rect.width || 900;
    const height = rect.height || 600;
    this.positions = settle(this.state.original, width, height, 200);
    this.animating = 60;
    const step = () => {
      if (this.animating <= 0) {
        return;
      }
      this.animating -= 1;
      tick(this.positions, this.state.original, width, height);
      this.draw();
      window.requestAnimationFrame(step);
    };
    window.requestAnimationFrame(step);
  }

  private draw(): void {
    render(this.svg, this.state, this.positions, this.selected, {
      onSelect: (nodeId) => {
        this.selected = nodeId;
        byId("selected-node").textContent = nodeId;
        this.draw();
      },
    });
    renderHistory(byId("history") as HTMLElement, this.state);
    const status = byId("status");
    if (this.state.banner) {
      status.textContent = this.state.banner;
    } else if (this.state.nonOperational) {
      status.textContent = "system non-operational — the target has collapsed";
    } else if (this.state.highlight.size > 0) {
      const kappa = this.state.history[this.state.history.length - 1]?.kappa;
      status.textContent = `critical set {${[...this.state.highlight].sort().join(", ")}}` +
        (kappa !== undefined ? ` at κ=${Number.isFinite(kappa) ? kappa : "inf"}` : "");
    } else {
      status.textContent = "no analysis yet";
    }
  }
}

new App();

function byId(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing element #${id}`);
  }
  return el;
}
