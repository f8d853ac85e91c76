// Thin browser layer: inject rendered SVG and animate transition plans.
// Everything above this file is DOM-free.

import type { Frame } from "./app.js";
import { sceneToSvg } from "./scene.js";

const EASE_MS = 450;

export function renderFrame(frame: Frame, root: HTMLElement): void {
  const previous = new Map<string, { x: number; y: number; r: number }>();
  root.querySelectorAll<SVGCircleElement>("circle[data-id]").forEach((el) => {
    previous.set(el.dataset.id ?? "", {
      x: Number(el.getAttribute("cx")),
      y: Number(el.getAttribute("cy")),
      r: Number(el.getAttribute("r")),
    });
  });

  root.innerHTML = frame.groups
    .map((group) => {
      const panels = [group.deviation, ...group.importance];
      if (group.correlation) panels.push(group.correlation);
      const svgs = panels.map((scene) => sceneToSvg(scene)).join("");
      return `<section class="group"><h3>${group.key}</h3>${svgs}</section>`;
    })
    .join("");

  // Animate: start persistent dots at their previous geometry, then release.
  const moving = new Map(frame.transitions
    .filter((t) => t.kind === "move")
    .map((t) => [t.id, t] as const));
  root.querySelectorAll<SVGCircleElement>("circle[data-id]").forEach((el) => {
    const id = el.dataset.id ?? "";
    const target = {
      x: el.getAttribute("cx"),
      y: el.getAttribute("cy"),
      r: el.getAttribute("r"),
    };
    const move = moving.get(id);
    const before = previous.get(id);
    el.style.transition = `cx ${EASE_MS}ms ease, cy ${EASE_MS}ms ease, r ${EASE_MS}ms ease, opacity ${EASE_MS}ms ease`;
    if (move && before) {
      el.setAttribute("cx", String(move.from.x));
      el.setAttribute("cy", String(move.from.y));
      el.setAttribute("r", String(move.from.r));
      requestAnimationFrame(() => {
        el.setAttribute("cx", target.x ?? "0");
        el.setAttribute("cy", target.y ?? "0");
        el.setAttribute("r", target.r ?? "0");
      });
    } else if (!before) {
      el.style.opacity = "0";
      requestAnimationFrame(() => {
        el.style.opacity = "";
      });
    }
  });
}

export function syncUrl(frame: Frame, serialize: (s: Frame["state"]) => string): void {
  history.replaceState(null, "", `?${serialize(frame.state)}`);
}
