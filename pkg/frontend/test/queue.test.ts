import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import { jitter } from "../src/color.js";
import { attributeQueue } from "../src/plots.js";
import { dots } from "../src/scene.js";
import { fakeFetch, makeExplanationsPayload } from "./helpers.js";

const ORDER = makeExplanationsPayload().rankers[0]!.attribute_order;

describe("attribute queue", () => {
  it("shows the eight most influential attributes by default", () => {
    expect(attributeQueue(ORDER, [])).toEqual(ORDER.slice(0, 8));
  });

  it("removal promotes the ninth attribute", () => {
    const removed = [ORDER[2]!];
    const queue = attributeQueue(ORDER, removed);
    expect(queue).toHaveLength(8);
    expect(queue).not.toContain(ORDER[2]);
    expect(queue[7]).toBe(ORDER[8]);
  });

  it("second removal promotes the tenth", () => {
    const queue = attributeQueue(ORDER, [ORDER[0]!, ORDER[5]!]);
    expect(queue).toHaveLength(8);
    expect(queue[6]).toBe(ORDER[8]);
    expect(queue[7]).toBe(ORDER[9]);
  });

  it("app.removeAttribute re-renders with the promoted attribute", async () => {
    const app = new App(new ApiClient("", fakeFetch({ urls: [] })));
    await app.update({ dataset: "synthlin", rankers: ["MART"], year: 2011, lo: 1, hi: 12 });
    const before = await app.removeAttribute(ORDER[1]!);
    const scene = before!.groups[0]!.importance[0]!;
    const shownAttributes = new Set(
      dots(scene).filter((d) => d.id.startsWith("imp:")).map((d) => d.id.split(":")[2]),
    );
    expect(shownAttributes.has(ORDER[1]!)).toBe(false);
    expect(shownAttributes.has(ORDER[8]!)).toBe(true);
    expect(shownAttributes.size).toBe(8);
  });
});

describe("jitter determinism", () => {
  it("is stable across re-renders and distinct per candidate", async () => {
    const app = new App(new ApiClient("", fakeFetch({ urls: [] })));
    const base = { dataset: "synthlin", rankers: ["MART"], year: 2011, lo: 1, hi: 12 };
    const a = await app.update(base);
    const b = await app.update(base);
    const positions = (frame: typeof a) =>
      new Map(
        dots(frame!.groups[0]!.importance[0]!)
          .filter((d) => d.id.startsWith("imp:"))
          .map((d) => [d.id, d.y]),
      );
    expect(positions(a)).toEqual(positions(b));
    expect(jitter("ent-001")).toBe(jitter("ent-001"));
    expect(jitter("ent-001")).not.toBe(jitter("ent-002"));
  });
});
