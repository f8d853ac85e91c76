// Plot builders: payload + view state -> scene graph.
//
// The deviation threshold applies per (candidate, ranker) dot in every plot,
// so the set of visible candidates is identical across the three linked views
// by construction. Importance and correlation plots never recompute a served
// number; dots carry the payload value verbatim and only map it to position.

import { jitter, divergingColor, linearScale, rankT } from "./color.js";
import type {
  CorrelationPayload,
  DeviationPayload,
  RankerExplanations,
} from "./types.js";
import type { Scene, SceneNode } from "./scene.js";
import type { ViewState } from "./state.js";

export const PLOT_WIDTH = 420;
export const PLOT_HEIGHT = 340;
export const MARGIN = { top: 28, right: 16, bottom: 24, left: 56 };
export const TOP_ATTRIBUTES = 8;
const BASE_RADIUS = 6;

export function dotVisible(deviation: number, threshold: number | null): boolean {
  return threshold === null || deviation <= threshold;
}

/** Dot radius from the served size factor; strictly decreasing in deviation. */
export function dotRadius(dotSize: number): number {
  return BASE_RADIUS * dotSize;
}

export function buildDeviationScene(payload: DeviationPayload, state: ViewState): Scene {
  const [lo, hi] = payload.range;
  const maxDeviation = Math.max(
    1,
    ...payload.rows.flatMap((row) => Object.values(row.deviations)),
  );
  const x = linearScale([0, maxDeviation], [MARGIN.left, PLOT_WIDTH - MARGIN.right]);
  const y = linearScale([lo, hi], [MARGIN.top, PLOT_HEIGHT - MARGIN.bottom]);

  const nodes: SceneNode[] = [
    {
      kind: "line",
      id: "axis:y",
      x1: x(0),
      y1: MARGIN.top - 8,
      x2: x(0),
      y2: PLOT_HEIGHT - MARGIN.bottom + 8,
      stroke: "#444",
      width: 1,
    },
    {
      kind: "text",
      id: "label:title",
      x: MARGIN.left,
      y: 16,
      text: `rank deviation, ${payload.year}`,
      size: 12,
      anchor: "start",
    },
  ];
  for (const row of payload.rows) {
    const fill = divergingColor(rankT(row.color_index, lo, hi));
    for (const rankerId of payload.rankers) {
      const deviation = row.deviations[rankerId];
      if (deviation === undefined || !dotVisible(deviation, state.threshold)) continue;
      const cy = y(row.truth_rank);
      const cx = x(deviation);
      // stripe from the axis to the dot: its length is the deviation itself
      nodes.push({
        kind: "line",
        id: `stripe:${rankerId}:${row.candidate_id}`,
        x1: x(0),
        y1: cy,
        x2: cx,
        y2: cy,
        stroke: fill,
        width: 1,
        dash: "3,2",
      });
      nodes.push({
        kind: "dot",
        id: `dev:${rankerId}:${row.candidate_id}`,
        x: cx,
        y: cy,
        r: 1.0 / (1.0 + deviation) * BASE_RADIUS + 2,
        fill,
        opacity: 0.85,
        candidateId: row.candidate_id,
        rankerId,
        value: deviation,
        tooltip: `${row.candidate_id} — ${rankerId}: deviation ${deviation}`,
        highlighted: state.highlightedCandidates.includes(row.candidate_id),
      });
    }
  }
  return { width: PLOT_WIDTH, height: PLOT_HEIGHT, title: "deviation plot", nodes };
}

/**
 * Attribute queue: server importance order minus removed attributes, cut to
 * the display budget. Removing an attribute promotes the next in the queue.
 */
export function attributeQueue(order: string[], removed: string[], budget = TOP_ATTRIBUTES): string[] {
  return order.filter((name) => !removed.includes(name)).slice(0, budget);
}

export function buildImportanceScene(
  payload: RankerExplanations,
  range: [number, number],
  state: ViewState,
): Scene {
  const shown = attributeQueue(payload.attribute_order, state.removedAttributes);
  const [lo, hi] = range;
  const bandHeight = (PLOT_HEIGHT - MARGIN.top - MARGIN.bottom) / Math.max(shown.length, 1);
  const x = linearScale([0, 1], [MARGIN.left, PLOT_WIDTH - MARGIN.right]);

  const nodes: SceneNode[] = [
    {
      kind: "text",
      id: "label:title",
      x: MARGIN.left,
      y: 16,
      text: `${payload.ranker_id} (${payload.method})`,
      size: 12,
      anchor: "start",
    },
  ];
  shown.forEach((attribute, band) => {
    const top = MARGIN.top + band * bandHeight;
    const highlighted = state.highlightedAttributes.includes(attribute);
    nodes.push({
      kind: "text",
      id: `label:${attribute}`,
      x: MARGIN.left - 6,
      y: top + bandHeight / 2 + 4,
      text: highlighted ? `[${attribute}]` : attribute,
      size: 11,
      anchor: "end",
    });
    const mean = payload.attribute_means[attribute];
    if (mean !== undefined) {
      nodes.push({
        kind: "line",
        id: `avg:${payload.ranker_id}:${attribute}`,
        x1: x(mean),
        y1: top + 3,
        x2: x(mean),
        y2: top + bandHeight - 3,
        stroke: "#888",
        width: 1.5,
      });
    }
    for (const row of payload.rows) {
      if (!dotVisible(row.deviation, state.threshold)) continue;
      const value = row.values[attribute];
      if (value === undefined) continue;
      nodes.push({
        kind: "dot",
        id: `imp:${payload.ranker_id}:${attribute}:${row.candidate_id}`,
        x: x(value),
        y: top + 6 + jitter(row.candidate_id) * (bandHeight - 12),
        r: dotRadius(row.dot_size),
        fill: divergingColor(rankT(row.color_index, lo, hi)),
        opacity: 0.8,
        candidateId: row.candidate_id,
        rankerId: payload.ranker_id,
        value,
        tooltip: `${row.candidate_id} — ${attribute}: ${value}`,
        highlighted: state.highlightedCandidates.includes(row.candidate_id),
      });
    }
  });
  return {
    width: PLOT_WIDTH,
    height: PLOT_HEIGHT,
    title: `importance distribution: ${payload.ranker_id}`,
    nodes,
  };
}

export function buildCorrelationScene(payload: CorrelationPayload, state: ViewState): Scene {
  const [lo, hi] = payload.range;
  const values = payload.points.map((p) => p.attribute_value);
  const yDomain: [number, number] = values.length
    ? [Math.min(...values), Math.max(...values)]
    : [0, 1];
  const x = linearScale([0, 1], [MARGIN.left, PLOT_WIDTH - MARGIN.right]);
  const y = linearScale(yDomain, [PLOT_HEIGHT - MARGIN.bottom, MARGIN.top]);

  const nodes: SceneNode[] = [
    {
      kind: "text",
      id: "label:title",
      x: MARGIN.left,
      y: 16,
      text: `importance vs ${payload.attribute}`,
      size: 12,
      anchor: "start",
    },
    {
      kind: "line",
      id: "axis:y",
      x1: MARGIN.left,
      y1: MARGIN.top,
      x2: MARGIN.left,
      y2: PLOT_HEIGHT - MARGIN.bottom,
      stroke: "#444",
      width: 1,
    },
    {
      kind: "line",
      id: "axis:x",
      x1: MARGIN.left,
      y1: PLOT_HEIGHT - MARGIN.bottom,
      x2: PLOT_WIDTH - MARGIN.right,
      y2: PLOT_HEIGHT - MARGIN.bottom,
      stroke: "#444",
      width: 1,
    },
  ];
  for (const point of payload.points) {
    if (!dotVisible(point.deviation, state.threshold)) continue;
    nodes.push({
      kind: "dot",
      id: `cor:${point.ranker_id}:${point.candidate_id}`,
      x: x(point.importance),
      y: y(point.attribute_value),
      r: dotRadius(point.dot_size),
      fill: divergingColor(rankT(point.truth_rank - lo, lo, hi)),
      opacity: 0.8,
      candidateId: point.candidate_id,
      rankerId: point.ranker_id,
      value: point.importance,
      tooltip:
        `${point.candidate_id} — ${point.ranker_id}: ` +
        `importance ${point.importance}, value ${point.attribute_value}`,
      highlighted: state.highlightedCandidates.includes(point.candidate_id),
    });
  }
  return {
    width: PLOT_WIDTH,
    height: PLOT_HEIGHT,
    title: `correlation plot: ${payload.attribute}`,
    nodes,
  };
}
