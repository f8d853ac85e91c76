// Service client. One in-flight request per linked view: issuing a new
// request for a view aborts the previous one, so the latest state always wins.

import type {
  AgreementPayload,
  ComparePayload,
  CorrelationPayload,
  DeviationPayload,
  ExplanationsPayload,
} from "./types.js";
import type { ViewState } from "./state.js";

export type FetchLike = (url: string, init?: { signal?: AbortSignal }) => Promise<{
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  private inflight = new Map<string, AbortController>();

  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async get<T>(view: string, path: string): Promise<T> {
    this.inflight.get(view)?.abort();
    const controller = typeof AbortController === "undefined" ? null : new AbortController();
    if (controller) this.inflight.set(view, controller);
    const response = await this.fetchFn(
      `${this.baseUrl}${path}`,
      controller ? { signal: controller.signal } : undefined,
    );
    if (!response.ok) {
      throw new ApiError(response.status, `request failed: ${path}`);
    }
    return (await response.json()) as T;
  }

  datasets(): Promise<{ datasets: string[] }> {
    return this.get("datasets", "/datasets");
  }

  years(dataset: string): Promise<{ years: number[] }> {
    return this.get("years", `/datasets/${encodeURIComponent(dataset)}/years`);
  }

  attributes(dataset: string): Promise<{ attributes: string[] }> {
    return this.get("attributes", `/datasets/${encodeURIComponent(dataset)}/attributes`);
  }

  rankers(dataset: string): Promise<{ rankers: string[] }> {
    return this.get("rankers", `/datasets/${encodeURIComponent(dataset)}/rankers`);
  }

  deviation(state: ViewState): Promise<DeviationPayload> {
    return this.get("deviation", `/deviation?${baseQuery(state)}`);
  }

  explanations(state: ViewState): Promise<ExplanationsPayload> {
    return this.get("explanations", `/explanations?${baseQuery(state)}&method=${state.method}`);
  }

  correlation(state: ViewState, attribute: string): Promise<CorrelationPayload> {
    return this.get(
      "correlation",
      `/correlation?${baseQuery(state)}&method=${state.method}` +
        `&attribute=${encodeURIComponent(attribute)}`,
    );
  }

  agreement(dataset: string, ranker: string, year: number): Promise<AgreementPayload> {
    return this.get(
      "agreement",
      `/agreement?dataset=${encodeURIComponent(dataset)}` +
        `&ranker=${encodeURIComponent(ranker)}&year=${year}`,
    );
  }

  compare(state: ViewState): Promise<ComparePayload> {
    const base =
      `dataset=${encodeURIComponent(state.dataset)}&method=${state.method}` +
      `&lo=${state.lo}&hi=${state.hi}`;
    if (state.mode === "range") {
      return this.get(
        "compare",
        `/compare?mode=range&${base}&year=${state.year}` +
          `&ranker=${encodeURIComponent(state.rankers[0] ?? "")}` +
          `&lo2=${state.lo2}&hi2=${state.hi2}`,
      );
    }
    if (state.mode === "time") {
      return this.get(
        "compare",
        `/compare?mode=time&${base}&year=${state.year}&year2=${state.year2}` +
          `&ranker=${encodeURIComponent(state.rankers[0] ?? "")}`,
      );
    }
    return this.get(
      "compare",
      `/compare?mode=ranker&${base}&year=${state.year}` +
        `&rankers=${encodeURIComponent(state.rankers.join(","))}`,
    );
  }
}

function baseQuery(state: ViewState): string {
  const parts = [
    `dataset=${encodeURIComponent(state.dataset)}`,
    `year=${state.year}`,
    `rankers=${encodeURIComponent(state.rankers.join(","))}`,
    `lo=${state.lo}`,
    `hi=${state.hi}`,
  ];
  for (const f of state.filters) {
    parts.push(`filter=${encodeURIComponent(`${f.attribute}:${f.min}:${f.max}`)}`);
  }
  return parts.join("&");
}
