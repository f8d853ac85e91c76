import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import { dots } from "../src/scene.js";
import { linearScale } from "../src/color.js";
import { MARGIN, PLOT_WIDTH } from "../src/plots.js";
import {
  ATTRIBUTES,
  RANKERS,
  candidateId,
  fakeFetch,
  importanceValue,
  makeExplanationsPayload,
} from "./helpers.js";

function makeApp() {
  const log = { urls: [] as string[] };
  const api = new ApiClient("", fakeFetch(log));
  return { app: new App(api), log };
}

const BASE = {
  dataset: "synthlin",
  rankers: [...RANKERS],
  year: 2011,
  lo: 1,
  hi: 12,
};

describe("rendered importance values", () => {
  it("equal the service payload values exactly (request interception)", async () => {
    const { app, log } = makeApp();
    const frame = await app.update(BASE);
    expect(frame).not.toBeNull();
    expect(log.urls.some((u) => u.startsWith("/explanations"))).toBe(true);

    const payload = makeExplanationsPayload(2011, 1, 12);
    const group = frame!.groups[0]!;
    const x = linearScale([0, 1], [MARGIN.left, PLOT_WIDTH - MARGIN.right]);
    for (const [column, scene] of group.importance.entries()) {
      const served = payload.rankers[column]!;
      const byRow = new Map(served.rows.map((r) => [r.candidate_id, r.values]));
      const importanceDots = dots(scene).filter((d) => d.id.startsWith("imp:"));
      expect(importanceDots.length).toBeGreaterThan(0);
      for (const dot of importanceDots) {
        const attribute = dot.id.split(":")[2]!;
        const servedValue = byRow.get(dot.candidateId)![attribute];
        // no numeric computation beyond presentation mapping:
        expect(dot.value).toBe(servedValue);
        expect(dot.x).toBeCloseTo(x(servedValue!), 12);
      }
    }
  });

  it("dot radius is strictly decreasing in deviation", async () => {
    const { app } = makeApp();
    const frame = await app.update(BASE);
    const scene = frame!.groups[0]!.importance[0]!;
    const served = makeExplanationsPayload(2011, 1, 12).rankers[0]!;
    const deviationOfCandidate = new Map(
      served.rows.map((r) => [r.candidate_id, r.deviation]),
    );
    const byDeviation = new Map<number, number>();
    for (const dot of dots(scene).filter((d) => d.id.startsWith("imp:"))) {
      byDeviation.set(deviationOfCandidate.get(dot.candidateId)!, dot.r);
    }
    const pairs = [...byDeviation.entries()].sort((a, b) => a[0] - b[0]);
    expect(pairs.length).toBeGreaterThan(2);
    for (let i = 1; i < pairs.length; i++) {
      expect(pairs[i]![1]).toBeLessThan(pairs[i - 1]![1]);
    }
  });

  it("correlation dots carry served importance and attribute value", async () => {
    const { app } = makeApp();
    const frame = await app.update({ ...BASE, correlationAttribute: "a3" });
    const scene = frame!.groups[0]!.correlation!;
    for (const dot of dots(scene)) {
      const expected = importanceValue(dot.rankerId, "a3", Number(dot.candidateId.slice(5)));
      expect(dot.value).toBe(expected);
    }
    // one point per candidate per ranker, equal y for the shared candidate
    const byCandidate = new Map<string, number[]>();
    for (const dot of dots(scene)) {
      byCandidate.set(dot.candidateId, [...(byCandidate.get(dot.candidateId) ?? []), dot.y]);
    }
    for (const ys of byCandidate.values()) {
      expect(ys.length).toBe(RANKERS.length);
      expect(new Set(ys).size).toBe(1);
    }
  });
});

describe("mode transitions", () => {
  it("animates persistent candidates and fades entries/exits on year change", async () => {
    const { app } = makeApp();
    await app.update({ ...BASE, mode: "time", year2: 2013 });
    const frame = await app.update({ lo: 1, hi: 12 });
    expect(frame!.groups.map((g) => g.key)).toEqual(["2011", "2013"]);

    // same candidate in both ranges of a range-mode switch: entering/exiting
    const rangeFrame = await app.update({ mode: "range", lo: 1, hi: 6, lo2: 7, hi2: 12 });
    const kinds = new Set(rangeFrame!.transitions.map((t) => t.kind));
    expect(kinds.has("enter") || kinds.has("move") || kinds.has("exit")).toBe(true);
  });

  it("keyed moves preserve candidate identity across updates", async () => {
    const { app } = makeApp();
    await app.update(BASE);
    const frame = await app.update({ hi: 10 }); // shrink the range: positions change
    const moves = frame!.transitions.filter((t) => t.kind === "move");
    expect(moves.length).toBeGreaterThan(0);
    for (const move of moves) {
      expect(move.id).toContain(move.candidateId);
    }
    const exits = frame!.transitions.filter((t) => t.kind === "exit");
    const exited = new Set(exits.map((t) => t.candidateId));
    expect(exited.has(candidateId(11))).toBe(true);
    expect(exited.has(candidateId(12))).toBe(true);
  });

  it("highlights survive mode switches (state contract)", async () => {
    const { app } = makeApp();
    await app.update(BASE);
    await app.toggleCandidateHighlight(candidateId(3));
    const frame = await app.update({ mode: "time", year2: 2013, rankers: ["MART"] });
    expect(frame!.state.highlightedCandidates).toEqual([candidateId(3)]);
    const highlighted = frame!.groups.flatMap((g) =>
      dots(g.deviation).filter((d) => d.highlighted),
    );
    expect(highlighted.every((d) => d.candidateId === candidateId(3))).toBe(true);
    expect(highlighted.length).toBeGreaterThan(0);
  });

  it("stale responses are dropped (latest wins)", async () => {
    const { app } = makeApp();
    const slow = app.update({ ...BASE, hi: 12 });
    const fast = app.update({ ...BASE, hi: 8 });
    const [slowFrame, fastFrame] = await Promise.all([slow, fast]);
    expect(slowFrame).toBeNull();
    expect(fastFrame).not.toBeNull();
    expect(fastFrame!.state.hi).toBe(8);
  });
});

describe("attribute ordering comes from the server", () => {
  it("renders bands in served importance order", async () => {
    const { app } = makeApp();
    const frame = await app.update(BASE);
    const scene = frame!.groups[0]!.importance[0]!;
    const served = makeExplanationsPayload(2011, 1, 12).rankers[0]!;
    const labels = scene.nodes
      .filter((n) => n.kind === "text" && n.id.startsWith("label:") && n.id !== "label:title")
      .map((n) => n.id.slice("label:".length));
    expect(labels).toEqual(served.attribute_order.slice(0, 8));
    expect(ATTRIBUTES.length).toBeGreaterThan(8); // queue has something to promote
  });
});
