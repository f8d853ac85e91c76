// Deterministic payload fixtures and a fetch interceptor for driving the app
// without a server.

import type { FetchLike } from "../src/api.js";
import type {
  ComparePayload,
  CorrelationPayload,
  DeviationPayload,
  ExplanationsPayload,
  RankerExplanations,
} from "../src/types.js";

export const ATTRIBUTES = ["a0", "a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8", "a9"];
export const RANKERS = ["MART", "RankingSVM"];
const N = 12;

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

export function candidateId(rank: number): string {
  return `cand-${String(rank).padStart(2, "0")}`;
}

export function deviationOf(rank: number, ranker: string): number {
  // fixed, varied deviations: MART fits mid ranks, SVM the top
  const base = ranker === "MART" ? (rank * 7) % 5 : (rank * 3) % 4;
  return base;
}

export function makeDeviationPayload(year = 2011, lo = 1, hi = N): DeviationPayload {
  const rows = [];
  for (let rank = lo; rank <= hi; rank++) {
    rows.push({
      candidate_id: candidateId(rank),
      truth_rank: rank,
      color_index: rank - lo,
      deviations: Object.fromEntries(RANKERS.map((r) => [r, deviationOf(rank, r)])),
    });
  }
  return { dataset: "synthlin", year, range: [lo, hi], rankers: [...RANKERS], rows };
}

export function importanceValue(ranker: string, attribute: string, rank: number): number {
  const rng = mulberry32(
    ranker.length * 1000 + ATTRIBUTES.indexOf(attribute) * 97 + rank,
  );
  return Math.round(rng() * 1000) / 1000;
}

export function makeRankerExplanations(
  ranker: string,
  year: number,
  lo = 1,
  hi = N,
): RankerExplanations {
  const rows = [];
  for (let rank = lo; rank <= hi; rank++) {
    rows.push({
      candidate_id: candidateId(rank),
      truth_rank: rank,
      color_index: rank - lo,
      deviation: deviationOf(rank, ranker),
      dot_size: 1 / (1 + deviationOf(rank, ranker)),
      values: Object.fromEntries(
        ATTRIBUTES.map((a) => [a, importanceValue(ranker, a, rank)]),
      ),
    });
  }
  const means = Object.fromEntries(
    ATTRIBUTES.map((a) => {
      const vals = rows.map((r) => r.values[a] ?? 0);
      return [a, vals.reduce((s, v) => s + v, 0) / vals.length];
    }),
  );
  // server sorts by descending group mean
  const order = [...ATTRIBUTES].sort((a, b) => (means[b] ?? 0) - (means[a] ?? 0));
  return {
    ranker_id: ranker,
    method: "LIME",
    seed: 7,
    attribute_order: order,
    attribute_means: means,
    rows,
  };
}

export function makeExplanationsPayload(year = 2011, lo = 1, hi = N): ExplanationsPayload {
  return {
    dataset: "synthlin",
    year,
    method: "LIME",
    range: [lo, hi],
    rankers: RANKERS.map((r) => makeRankerExplanations(r, year, lo, hi)),
  };
}

export function makeCorrelationPayload(
  attribute: string,
  year = 2011,
  lo = 1,
  hi = N,
): CorrelationPayload {
  const points = [];
  for (const ranker of RANKERS) {
    for (let rank = lo; rank <= hi; rank++) {
      points.push({
        candidate_id: candidateId(rank),
        truth_rank: rank,
        deviation: deviationOf(rank, ranker),
        ranker_id: ranker,
        importance: importanceValue(ranker, attribute, rank),
        attribute_value: 10 + rank * 2.5,
        dot_size: 1 / (1 + deviationOf(rank, ranker)),
      });
    }
  }
  return { dataset: "synthlin", year, attribute, method: "LIME", range: [lo, hi], points };
}

export function makeComparePayload(mode: "range" | "time"): ComparePayload {
  const groups =
    mode === "range"
      ? [
          { key: "1-6", year: 2011, range: [1, 6] as [number, number] },
          { key: "7-12", year: 2011, range: [7, 12] as [number, number] },
        ]
      : [
          { key: "2011", year: 2011, range: [1, 12] as [number, number] },
          { key: "2013", year: 2013, range: [1, 12] as [number, number] },
        ];
  return {
    dataset: "synthlin",
    mode,
    method: "LIME",
    groups: groups.map((g) => ({
      ...g,
      deviation: makeDeviationPayload(g.year, g.range[0], g.range[1]).rows,
      explanations: [makeRankerExplanations("MART", g.year, g.range[0], g.range[1])],
    })),
  };
}

export interface RequestLog {
  urls: string[];
}

/** Fetch stub routing by path; records every request it served. */
export function fakeFetch(log: RequestLog): FetchLike {
  return (url: string) => {
    log.urls.push(url);
    const [path, query = ""] = url.split("?");
    const params = new Map(
      query.split("&").filter(Boolean).map((kv) => {
        const i = kv.indexOf("=");
        return [kv.slice(0, i), decodeURIComponent(kv.slice(i + 1))] as [string, string];
      }),
    );
    const lo = Number(params.get("lo") ?? 1);
    const hi = Number(params.get("hi") ?? N);
    const year = Number(params.get("year") ?? 2011);
    let payload: unknown;
    if (path === "/deviation") {
      payload = makeDeviationPayload(year, lo, hi);
    } else if (path === "/explanations") {
      payload = makeExplanationsPayload(year, lo, hi);
    } else if (path === "/correlation") {
      payload = makeCorrelationPayload(params.get("attribute") ?? "a0", year, lo, hi);
    } else if (path === "/compare") {
      payload = makeComparePayload(params.get("mode") as "range" | "time");
    } else {
      return Promise.resolve({
        ok: false,
        status: 404,
        json: () => Promise.resolve({ code: "not_found" }),
      });
    }
    return Promise.resolve({ ok: true, status: 200, json: () => Promise.resolve(payload) });
  };
}
