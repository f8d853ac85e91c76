// View state and its URL query-string form. Every reachable state serializes
// to one canonical query string, so exploration sessions are shareable links;
// serialize(deserialize(q)) === q for any q produced by serialize.

export type Mode = "ranker" | "range" | "time";
export type Method = "LIME" | "ICE";

export interface AttributeFilter {
  attribute: string;
  min: number;
  max: number;
}

export interface ViewState {
  dataset: string;
  mode: Mode;
  rankers: string[];
  year: number;
  year2: number | null; // time mode counterpart
  lo: number;
  hi: number;
  lo2: number | null; // range mode counterpart
  hi2: number | null;
  threshold: number | null; // permissible deviation; null = no filtering
  method: Method;
  correlationAttribute: string | null;
  highlightedCandidates: string[];
  highlightedAttributes: string[];
  removedAttributes: string[];
  filters: AttributeFilter[];
}

export const DEFAULT_STATE: ViewState = {
  dataset: "",
  mode: "ranker",
  rankers: [],
  year: 0,
  year2: null,
  lo: 1,
  hi: 100,
  lo2: null,
  hi2: null,
  threshold: null,
  method: "LIME",
  correlationAttribute: null,
  highlightedCandidates: [],
  highlightedAttributes: [],
  removedAttributes: [],
  filters: [],
};

const MODES: readonly Mode[] = ["ranker", "range", "time"];
const METHODS: readonly Method[] = ["LIME", "ICE"];

function put(params: string[], key: string, value: string): void {
  params.push(`${key}=${encodeURIComponent(value)}`);
}

export function serializeState(state: ViewState): string {
  const params: string[] = [];
  put(params, "dataset", state.dataset);
  put(params, "mode", state.mode);
  if (state.rankers.length) put(params, "rankers", state.rankers.join(","));
  put(params, "year", String(state.year));
  if (state.year2 !== null) put(params, "year2", String(state.year2));
  put(params, "lo", String(state.lo));
  put(params, "hi", String(state.hi));
  if (state.lo2 !== null) put(params, "lo2", String(state.lo2));
  if (state.hi2 !== null) put(params, "hi2", String(state.hi2));
  if (state.threshold !== null) put(params, "threshold", String(state.threshold));
  put(params, "method", state.method);
  if (state.correlationAttribute !== null) {
    put(params, "attr", state.correlationAttribute);
  }
  if (state.highlightedCandidates.length) {
    put(params, "hl", state.highlightedCandidates.join(","));
  }
  if (state.highlightedAttributes.length) {
    put(params, "hlattr", state.highlightedAttributes.join(","));
  }
  if (state.removedAttributes.length) {
    put(params, "removed", state.removedAttributes.join(","));
  }
  for (const filter of state.filters) {
    put(params, "filter", `${filter.attribute}:${filter.min}:${filter.max}`);
  }
  return params.join("&");
}

function splitList(value: string | undefined): string[] {
  return value ? value.split(",").filter((v) => v.length > 0) : [];
}

function intOrNull(value: string | undefined): number | null {
  return value === undefined ? null : Number(value);
}

export function deserializeState(query: string): ViewState {
  const pairs: [string, string][] = [];
  for (const part of query.replace(/^\?/, "").split("&")) {
    if (!part) continue;
    const eq = part.indexOf("=");
    if (eq < 0) continue;
    pairs.push([part.slice(0, eq), decodeURIComponent(part.slice(eq + 1))]);
  }
  const first = new Map<string, string>();
  const filters: AttributeFilter[] = [];
  for (const [key, value] of pairs) {
    if (key === "filter") {
      const [attribute, min, max] = value.split(":");
      if (attribute !== undefined && min !== undefined && max !== undefined) {
        filters.push({ attribute, min: Number(min), max: Number(max) });
      }
    } else if (!first.has(key)) {
      first.set(key, value);
    }
  }
  const mode = first.get("mode") as Mode | undefined;
  const method = first.get("method") as Method | undefined;
  return {
    dataset: first.get("dataset") ?? DEFAULT_STATE.dataset,
    mode: mode !== undefined && MODES.includes(mode) ? mode : DEFAULT_STATE.mode,
    rankers: splitList(first.get("rankers")),
    year: Number(first.get("year") ?? DEFAULT_STATE.year),
    year2: intOrNull(first.get("year2")),
    lo: Number(first.get("lo") ?? DEFAULT_STATE.lo),
    hi: Number(first.get("hi") ?? DEFAULT_STATE.hi),
    lo2: intOrNull(first.get("lo2")),
    hi2: intOrNull(first.get("hi2")),
    threshold: intOrNull(first.get("threshold")),
    method: method !== undefined && METHODS.includes(method) ? method : DEFAULT_STATE.method,
    correlationAttribute: first.get("attr") ?? null,
    highlightedCandidates: splitList(first.get("hl")),
    highlightedAttributes: splitList(first.get("hlattr")),
    removedAttributes: splitList(first.get("removed")),
    filters,
  };
}

export function withChanges(state: ViewState, changes: Partial<ViewState>): ViewState {
  return { ...state, ...changes };
}
