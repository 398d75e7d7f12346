/** Small deterministic SVG path and markup helpers. */

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Fixed two-decimal coordinate formatting keeps output byte-stable. */
export function fmt(value: number): string {
  const rounded = Math.round(value * 100) / 100;
  return Object.is(rounded, -0) ? "0" : String(rounded);
}

/** Polyline through the given pixel points. */
export function polylinePath(points: Array<[number, number]>): string {
  return points
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)} ${fmt(y)}`)
    .join(" ");
}

/**
 * Step path over contiguous cells: edges has one more entry than values;
 * value k is drawn as a horizontal run from edges[k] to edges[k+1].
 */
export function stepPath(edges: number[], values: number[]): string {
  if (values.length === 0 || edges.length !== values.length + 1) {
    throw new Error("stepPath needs edges = values + 1");
  }
  const parts = [`M${fmt(edges[0])} ${fmt(values[0])}`, `H${fmt(edges[1])}`];
  for (let k = 1; k < values.length; k++) {
    parts.push(`V${fmt(values[k])}`, `H${fmt(edges[k + 1])}`);
  }
  return parts.join(" ");
}

/** Closed band between an upper and a lower step function on shared edges. */
export function bandPath(edges: number[], upper: number[], lower: number[]): string {
  const forward = stepPath(edges, upper);
  const reversedEdges = [...edges].reverse();
  const reversedLower = [...lower].reverse();
  const back = stepPath(reversedEdges, reversedLower);
  return `${forward} L${back.slice(1)} Z`;
}

export function tag(
  name: string,
  attrs: Record<string, string>,
  body?: string
): string {
  const parts = Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${esc(v)}"`)
    .join("");
  if (body === undefined) {
    return `<${name}${parts}/>`;
  }
  return `<${name}${parts}>${body}</${name}>`;
}
