// Presentation mappings: diverging rank color, deterministic jitter, scales.

/** Linear interpolation between two RGB triples. */
function lerp(a: [number, number, number], b: [number, number, number], t: number): string {
  const c = a.map((v, i) => Math.round(v + ((b[i] ?? 0) - v) * t));
  return `rgb(${c[0]},${c[1]},${c[2]})`;
}

const GREEN: [number, number, number] = [53, 183, 121];
const YELLOW: [number, number, number] = [253, 231, 55]; // neutral midpoint
const PURPLE: [number, number, number] = [106, 61, 154];

/**
 * Diverging color over the selected rank range: green at the top of the
 * range, neutral yellow at the center rank, purple at the bottom.
 */
export function divergingColor(t: number): string {
  const clamped = Math.max(0, Math.min(1, t));
  return clamped <= 0.5 ? lerp(GREEN, YELLOW, clamped * 2) : lerp(YELLOW, PURPLE, clamped * 2 - 1);
}

/** Position of a rank inside the range, 0..1; degenerate ranges center. */
export function rankT(colorIndex: number, lo: number, hi: number): number {
  return hi > lo ? colorIndex / (hi - lo) : 0.5;
}

/**
 * Deterministic jitter in [0, 1) from a candidate id (FNV-1a hash), so
 * re-renders and screenshots are reproducible.
 */
export function jitter(candidateId: string): number {
  let h = 0x811c9dc5;
  for (let i = 0; i < candidateId.length; i++) {
    h ^= candidateId.charCodeAt(i);
    h = Math.imul(h, 0x01000193);
  }
  return (h >>> 0) / 0x100000000;
}

export interface LinearScale {
  (value: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): LinearScale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0;
  const fn = ((value: number) =>
    span === 0 ? (r0 + r1) / 2 : r0 + ((value - d0) / span) * (r1 - r0)) as LinearScale;
  fn.domain = domain;
  fn.range = range;
  return fn;
}
