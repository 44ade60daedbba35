#!/usr/bin/env python3
"""Regenerate the shared removal-propagation fixtures.

Each fixture holds a graph and a sequence of single-node removals with the
surviving nodes and edges after every step. Both the Python suite and the
viewer's test suite replay these files, which pins the two implementations of
the propagation rules to each other.
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from criticut import graphjson
from criticut.genbench import CompositionConfig, generate
from criticut.graph import remove_nodes

OUT_DIR = Path(__file__).resolve().parents[1] / "fixtures" / "removal"
SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"


def fixture_for(name: str, graph, removals) -> dict:
    steps = []
    current = graph
    for nid in removals:
        current = remove_nodes(current, {nid})
        steps.append(
            {
                "remove": nid,
                "aliveNodes": list(current.node_ids),
                "aliveEdges": [[u, v] for u, v in sorted(current.edges)],
            }
        )
    return {"name": name, "graph": graphjson.graph_document(graph)["graph"], "steps": steps}


def pick_removals(graph, rng, count):
    removals = []
    current = graph
    for _ in range(count):
        candidates = [
            n.id
            for n in current.nodes()
            if n.kind.is_atomic and (n.cost is None or not n.cost.is_infinite)
        ]
        if not candidates:
            break
        nid = rng.choice(sorted(candidates))
        removals.append(nid)
        current = remove_nodes(current, {nid})
        if len(current) == 0:
            break
    return removals


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    fixtures = []

    example = graphjson.load_graph(SCENARIOS / "example.json")
    fixtures.append(fixture_for("example-a-then-c", example, ["a", "c"]))
    fixtures.append(fixture_for("example-b", example, ["b"]))
    fixtures.append(fixture_for("example-d", example, ["d"]))

    cycle = graphjson.load_graph(SCENARIOS / "cycle.json")
    fixtures.append(fixture_for("cycle-a", cycle, ["a"]))
    fixtures.append(fixture_for("cycle-s1-then-c", cycle, ["s1", "c"]))

    wtn = graphjson.load_graph(SCENARIOS / "wtn_basic.json")
    fixtures.append(fixture_for("wtn-s3", wtn, ["s3"]))
    expanded = graphjson.load_graph(SCENARIOS / "wtn_expanded_besteffort.json")
    fixtures.append(fixture_for("wtn-expanded-s1-s3", expanded, ["s1", "s3"]))

    rng = random.Random(20240811)
    configs = [CompositionConfig(60, 20, 20), CompositionConfig(50, 20, 30)]
    index = 0
    while len(fixtures) < 30:
        cfg = configs[index % len(configs)]
        graph = generate(8 + (index % 10), cfg, seed=1000 + index)
        removals = pick_removals(graph, rng, count=2 + index % 3)
        fixtures.append(fixture_for(f"generated-{index:02d}", graph, removals))
        index += 1

    for i, fixture in enumerate(fixtures):
        path = OUT_DIR / f"fixture_{i:02d}.json"
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(fixture, fh, indent=2)
            fh.write("\n")
    print(f"wrote {len(fixtures)} fixtures to {OUT_DIR}")


if __name__ == "__main__":
    main()
