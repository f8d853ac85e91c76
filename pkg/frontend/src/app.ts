// Controller: view state -> API requests -> scene graphs -> transition plan.
// The DOM layer subscribes to finished frames; everything here is pure enough
// to drive from tests with an intercepted fetch.

import { ApiClient } from "./api.js";
import { buildCorrelationScene, buildDeviationScene, buildImportanceScene } from "./plots.js";
import { diffScenes, type Scene, type Transition } from "./scene.js";
import { DEFAULT_STATE, withChanges, type ViewState } from "./state.js";
import type { CompareGroup, DeviationPayload, RankerExplanations } from "./types.js";

export interface ViewGroup {
  key: string;
  year: number;
  range: [number, number];
  deviation: Scene;
  importance: Scene[];
  correlation: Scene | null;
}

export interface Frame {
  state: ViewState;
  groups: ViewGroup[];
  transitions: Transition[];
}

function groupToScenes(
  group: CompareGroup,
  state: ViewState,
  rankers: string[],
): { deviation: Scene; importance: Scene[] } {
  const payload: DeviationPayload = {
    dataset: state.dataset,
    year: group.year,
    range: group.range,
    rankers,
    rows: group.deviation,
  };
  return {
    deviation: buildDeviationScene(payload, state),
    importance: group.explanations.map((e: RankerExplanations) =>
      buildImportanceScene(e, group.range, state),
    ),
  };
}

export class App {
  state: ViewState = DEFAULT_STATE;
  private lastScenes: Scene[] = [];
  private epoch = 0;

  constructor(
    private api: ApiClient,
    private onFrame: (frame: Frame) => void = () => {},
  ) {}

  /** Apply a state change and re-render; stale responses are dropped. */
  async update(changes: Partial<ViewState>): Promise<Frame | null> {
    this.state = withChanges(this.state, changes);
    const epoch = ++this.epoch;
    const state = this.state;

    let groups: ViewGroup[];
    if (state.mode === "ranker") {
      const [deviation, explanations] = await Promise.all([
        this.api.deviation(state),
        this.api.explanations(state),
      ]);
      const correlation = state.correlationAttribute
        ? buildCorrelationScene(
            await this.api.correlation(state, state.correlationAttribute),
            state,
          )
        : null;
      groups = [
        {
          key: "current",
          year: state.year,
          range: [state.lo, state.hi],
          deviation: buildDeviationScene(deviation, state),
          importance: explanations.rankers.map((e) =>
            buildImportanceScene(e, [state.lo, state.hi], state),
          ),
          correlation,
        },
      ];
    } else {
      const compare = await this.api.compare(state);
      groups = compare.groups.map((group) => {
        const scenes = groupToScenes(group, state, state.rankers);
        return {
          key: group.key,
          year: group.year,
          range: group.range,
          deviation: scenes.deviation,
          importance: scenes.importance,
          correlation: null,
        };
      });
    }

    if (epoch !== this.epoch) {
      return null; // a newer update superseded this one
    }
    const scenes = groups.flatMap((g) => [g.deviation, ...g.importance,
                                          ...(g.correlation ? [g.correlation] : [])]);
    const transitions = diffScenes(this.lastScenes, scenes);
    this.lastScenes = scenes;
    const frame: Frame = { state, groups, transitions };
    this.onFrame(frame);
    return frame;
  }

  /** Remove an attribute from the importance queue (the next one promotes). */
  removeAttribute(name: string): Promise<Frame | null> {
    if (this.state.removedAttributes.includes(name)) {
      return Promise.resolve(null);
    }
    return this.update({ removedAttributes: [...this.state.removedAttributes, name] });
  }

  toggleCandidateHighlight(candidateId: string): Promise<Frame | null> {
    const current = this.state.highlightedCandidates;
    const next = current.includes(candidateId)
      ? current.filter((c) => c !== candidateId)
      : [...current, candidateId];
    return this.update({ highlightedCandidates: next });
  }
}
