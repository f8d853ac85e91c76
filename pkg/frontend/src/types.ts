// Payload shapes served by the ranklens HTTP API. The client treats every
// numeric field as opaque presentation input: no importance value is ever
// recomputed here, only mapped to position, size and color.

export interface DeviationRow {
  candidate_id: string;
  truth_rank: number;
  color_index: number;
  deviations: Record<string, number>;
}

export interface DeviationPayload {
  dataset: string;
  year: number;
  range: [number, number];
  rankers: string[];
  rows: DeviationRow[];
}

export interface ExplanationRow {
  candidate_id: string;
  truth_rank: number;
  color_index: number;
  deviation: number;
  dot_size: number;
  values: Record<string, number>;
}

export interface RankerExplanations {
  ranker_id: string;
  method: string;
  seed: number;
  attribute_order: string[];
  attribute_means: Record<string, number>;
  rows: ExplanationRow[];
}

export interface ExplanationsPayload {
  dataset: string;
  year: number;
  method: string;
  range: [number, number];
  rankers: RankerExplanations[];
}

export interface CorrelationPoint {
  candidate_id: string;
  truth_rank: number;
  deviation: number;
  ranker_id: string;
  importance: number;
  attribute_value: number;
  dot_size: number;
}

export interface CorrelationPayload {
  dataset: string;
  year: number;
  attribute: string;
  method: string;
  range: [number, number];
  points: CorrelationPoint[];
}

export interface CompareGroup {
  key: string;
  year: number;
  range: [number, number];
  deviation: DeviationRow[];
  explanations: RankerExplanations[];
}

export interface ComparePayload {
  dataset: string;
  mode: string;
  method: string;
  groups: CompareGroup[];
}

export interface AgreementPayload {
  ranker_id: string;
  query_id: number;
  candidate_ids: string[];
  correlations: (number | null)[];
  histogram: number[];
  median: number | null;
  n_defined: number;
}
