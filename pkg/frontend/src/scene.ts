// Scene graph: plots are built as plain data first, then rendered to SVG.
// Keeping geometry in data makes every visual claim testable without a DOM
// and gives the transition differ stable node identities.

export interface DotNode {
  kind: "dot";
  id: string;
  x: number;
  y: number;
  r: number;
  fill: string;
  opacity: number;
  candidateId: string;
  rankerId: string;
  /** The payload value this dot presents, carried through unchanged. */
  value: number;
  tooltip: string;
  highlighted: boolean;
}

export interface LineNode {
  kind: "line";
  id: string;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  stroke: string;
  width: number;
  dash?: string;
}

export interface TextNode {
  kind: "text";
  id: string;
  x: number;
  y: number;
  text: string;
  size: number;
  anchor: "start" | "middle" | "end";
}

export type SceneNode = DotNode | LineNode | TextNode;

export interface Scene {
  width: number;
  height: number;
  title: string;
  nodes: SceneNode[];
}

export function dots(scene: Scene): DotNode[] {
  return scene.nodes.filter((n): n is DotNode => n.kind === "dot");
}

export function visibleCandidateIds(scene: Scene): Set<string> {
  return new Set(dots(scene).map((d) => d.candidateId));
}

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

export function sceneToSvg(scene: Scene): string {
  const body = scene.nodes
    .map((node) => {
      if (node.kind === "dot") {
        const stroke = node.highlighted ? ' stroke="#d62728" stroke-width="2.5"' : "";
        return (
          `<circle data-id="${esc(node.id)}" data-candidate="${esc(node.candidateId)}"` +
          ` data-value="${node.value}" cx="${node.x}" cy="${node.y}" r="${node.r}"` +
          ` fill="${node.fill}" fill-opacity="${node.opacity}"${stroke}>` +
          `<title>${esc(node.tooltip)}</title></circle>`
        );
      }
      if (node.kind === "line") {
        const dash = node.dash ? ` stroke-dasharray="${node.dash}"` : "";
        return (
          `<line data-id="${esc(node.id)}" x1="${node.x1}" y1="${node.y1}"` +
          ` x2="${node.x2}" y2="${node.y2}" stroke="${node.stroke}"` +
          ` stroke-width="${node.width}"${dash}/>`
        );
      }
      return (
        `<text data-id="${esc(node.id)}" x="${node.x}" y="${node.y}"` +
        ` font-size="${node.size}" text-anchor="${node.anchor}">${esc(node.text)}</text>`
      );
    })
    .join("");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${scene.width} ${scene.height}"` +
    ` width="${scene.width}" height="${scene.height}" role="img"` +
    ` aria-label="${esc(scene.title)}">${body}</svg>`
  );
}

// -- transitions -------------------------------------------------------------

export type Transition =
  | { kind: "move"; id: string; candidateId: string; from: { x: number; y: number; r: number }; to: { x: number; y: number; r: number } }
  | { kind: "enter"; id: string; candidateId: string }
  | { kind: "exit"; id: string; candidateId: string };

/**
 * Diff two scene lists by node id (ids embed candidate identity), producing
 * the animation plan: persistent candidates move, the rest fade in or out.
 */
export function diffScenes(previous: Scene[], next: Scene[]): Transition[] {
  const prevDots = new Map<string, DotNode>();
  for (const scene of previous) for (const d of dots(scene)) prevDots.set(d.id, d);
  const nextDots = new Map<string, DotNode>();
  for (const scene of next) for (const d of dots(scene)) nextDots.set(d.id, d);

  const transitions: Transition[] = [];
  for (const [id, d] of nextDots) {
    const before = prevDots.get(id);
    if (before === undefined) {
      transitions.push({ kind: "enter", id, candidateId: d.candidateId });
    } else if (before.x !== d.x || before.y !== d.y || before.r !== d.r) {
      transitions.push({
        kind: "move",
        id,
        candidateId: d.candidateId,
        from: { x: before.x, y: before.y, r: before.r },
        to: { x: d.x, y: d.y, r: d.r },
      });
    }
  }
  for (const [id, d] of prevDots) {
    if (!nextDots.has(id)) transitions.push({ kind: "exit", id, candidateId: d.candidateId });
  }
  return transitions;
}
