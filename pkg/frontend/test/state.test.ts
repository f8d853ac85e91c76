import { describe, expect, it } from "vitest";

import {
  DEFAULT_STATE,
  deserializeState,
  serializeState,
  type ViewState,
} from "../src/state.js";

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function randomState(rng: () => number): ViewState {
  const pick = <T>(xs: readonly T[]): T => xs[Math.floor(rng() * xs.length)] as T;
  const int = (lo: number, hi: number) => lo + Math.floor(rng() * (hi - lo + 1));
  const maybe = <T>(value: T): T | null => (rng() < 0.5 ? value : null);
  const mode = pick(["ranker", "range", "time"] as const);
  const lo = int(1, 40);
  return {
    dataset: pick(["synthlin", "university", "fiscal"]),
    mode,
    rankers: Array.from({ length: int(0, 3) }, (_, i) => `ranker${i}`),
    year: int(2006, 2016),
    year2: mode === "time" ? int(2006, 2016) : maybe(int(2006, 2016)),
    lo,
    hi: lo + int(0, 60),
    lo2: maybe(int(1, 50)),
    hi2: maybe(int(51, 99)),
    threshold: maybe(int(0, 20)),
    method: pick(["LIME", "ICE"] as const),
    correlationAttribute: maybe(pick(["teaching", "research", "cash ratio"])),
    highlightedCandidates: Array.from({ length: int(0, 3) }, (_, i) => `ent-${i}`),
    highlightedAttributes: Array.from({ length: int(0, 2) }, (_, i) => `attr${i}`),
    removedAttributes: Array.from({ length: int(0, 2) }, (_, i) => `rm${i}`),
    filters: Array.from({ length: int(0, 2) }, (_, i) => ({
      attribute: `f${i}`,
      min: int(0, 5) + 0.5,
      max: int(6, 12),
    })),
  };
}

describe("view state URL round trip", () => {
  it("serialize(deserialize(q)) === q for every reachable query string", () => {
    const rng = mulberry32(2024);
    for (let i = 0; i < 300; i++) {
      const q = serializeState(randomState(rng));
      expect(serializeState(deserializeState(q))).toBe(q);
    }
  });

  it("deserialize(serialize(s)) reproduces the state", () => {
    const rng = mulberry32(99);
    for (let i = 0; i < 300; i++) {
      const state = randomState(rng);
      expect(deserializeState(serializeState(state))).toEqual(state);
    }
  });

  it("round trips the default state", () => {
    const q = serializeState(DEFAULT_STATE);
    expect(deserializeState(q)).toEqual(DEFAULT_STATE);
  });

  it("tolerates leading question marks and unknown params", () => {
    const q = serializeState({ ...DEFAULT_STATE, dataset: "d", year: 2011 });
    const parsed = deserializeState(`?${q}&unknown=1`);
    expect(parsed.dataset).toBe("d");
    expect(parsed.year).toBe(2011);
  });

  it("encodes attribute names with spaces and colons in filters", () => {
    const state: ViewState = {
      ...DEFAULT_STATE,
      dataset: "fiscal",
      filters: [{ attribute: "cash ratio", min: 0.5, max: 2 }],
    };
    const q = serializeState(state);
    expect(deserializeState(q).filters).toEqual(state.filters);
    expect(serializeState(deserializeState(q))).toBe(q);
  });
});
