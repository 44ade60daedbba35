/** Parity with the backend's removal propagation on the shared fixture
 * corpus: same survivors after every single-node removal step. */

import { readFileSync, readdirSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { removeNodes, survivors } from "../src/removal.js";
import { GraphDoc } from "../src/types.js";

interface FixtureStep {
  remove: string;
  aliveNodes: string[];
  aliveEdges: Array<[string, string]>;
}

interface Fixture {
  name: string;
  graph: GraphDoc;
  steps: FixtureStep[];
}

const FIXTURE_DIR = join(__dirname, "..", "..", "fixtures", "removal");

function loadFixtures(): Fixture[] {
  return readdirSync(FIXTURE_DIR)
    .filter((name) => name.endsWith(".json"))
    .sort()
    .map((name) => JSON.parse(readFileSync(join(FIXTURE_DIR, name), "utf-8")) as Fixture);
}

describe("removal propagation parity", () => {
  const fixtures = loadFixtures();

  it("has the full shared corpus", () => {
    expect(fixtures.length).toBe(30);
  });

  for (const fixture of loadFixtures()) {
    it(`replays ${fixture.name}`, () => {
      let current = fixture.graph;
      for (const step of fixture.steps) {
        current = removeNodes(current, [step.remove]);
        const state = survivors(current);
        expect(state.nodes).toEqual(step.aliveNodes);
        expect(state.edges).toEqual(step.aliveEdges);
      }
    });
  }
});

describe("removal edge cases", () => {
  const graph: GraphDoc = {
    target: "t",
    nodes: [
      { id: "p", type: "agent", value: "1" },
      { id: "q", type: "agent", value: "1" },
      { id: "r", type: "agent", value: "1" },
      { id: "o", type: "or", value: "none" },
      { id: "t", type: "actuator", value: "1" },
    ],
    edges: [
      { source: "p", target: "o" },
      { source: "q", target: "o" },
      { source: "r", target: "o" },
      { source: "o", target: "t" },
    ],
  };

  it("keeps an OR connector while inputs remain", () => {
    const after = removeNodes(graph, ["p"]);
    expect(survivors(after).nodes).toEqual(["o", "q", "r", "t"]);
  });

  it("collapses the OR connector with its last input", () => {
    const after = removeNodes(removeNodes(graph, ["p"]), ["q", "r"]);
    expect(survivors(after).nodes).toEqual([]);
    expect(after.target).toBeNull();
  });

  it("rejects unknown ids", () => {
    expect(() => removeNodes(graph, ["ghost"])).toThrow(/unknown node/);
  });
});
