import { SummaryRow } from "./csv.js";
import { buildLayout, FigureLayout, orderLabel, Panel } from "./layout.js";
import { bandPath, esc, fmt, polylinePath, stepPath, tag } from "./svg.js";

const PANEL_W = 240;
const PANEL_H = 170;
const GAP_X = 20;
const GAP_Y = 30;
const MARGIN_LEFT = 150;
const MARGIN_TOP = 46;
const MARGIN_RIGHT = 20;
const MARGIN_BOTTOM = 40;

const STYLE = [
  ".frame{stroke:#555;fill:none;stroke-width:1}",
  ".iqr-band{fill:#bfbfbf;fill-opacity:0.55;stroke:none}",
  ".hinge-step{stroke:#1f4e9c;fill:none;stroke-width:1;stroke-dasharray:1.5 3}",
  ".median-step{stroke:#1f4e9c;fill:none;stroke-width:1.3;stroke-dasharray:7 3 2 3}",
  ".true-density{stroke:#000;fill:none;stroke-width:1.5}",
  "text{font-family:Helvetica,Arial,sans-serif;font-size:12px;fill:#222}",
  ".tick{font-size:10px;fill:#555}",
].join("");

/** Shared vertical scale for one figure row: headroom above every drawn value. */
function rowScale(panels: Panel[]): number {
  let top = 0;
  for (const panel of panels) {
    for (const row of panel.rows) {
      top = Math.max(top, row.trueF, row.hingeHi, row.q75, row.median);
    }
  }
  return top > 0 ? 1.05 * top : 1;
}

/** Cell edges shared by the step elements of one panel. */
function cellEdges(rows: SummaryRow[]): number[] {
  const width = rows.length > 1 ? rows[1].x - rows[0].x : 1;
  const edges = rows.map((r) => Math.max(0, r.x - width / 2));
  edges.push(Math.min(1, rows[rows.length - 1].x + width / 2));
  return edges;
}

function renderPanel(panel: Panel, yMax: number): string {
  const sx = (x: number) => x * PANEL_W;
  const sy = (y: number) => PANEL_H * (1 - y / yMax);
  const edges = cellEdges(panel.rows).map(sx);
  const pick = (f: (r: SummaryRow) => number) => panel.rows.map((r) => sy(f(r)));
  const parts = [
    tag("rect", { class: "frame", x: "0", y: "0", width: fmt(PANEL_W), height: fmt(PANEL_H) }),
    tag("path", { class: "iqr-band", d: bandPath(edges, pick((r) => r.q75), pick((r) => r.q25)) }),
    tag("path", { class: "hinge-step", d: stepPath(edges, pick((r) => r.hingeLo)) }),
    tag("path", { class: "hinge-step", d: stepPath(edges, pick((r) => r.hingeHi)) }),
    tag("path", { class: "median-step", d: stepPath(edges, pick((r) => r.median)) }),
    tag("path", {
      class: "true-density",
      d: polylinePath(panel.rows.map((r) => [sx(r.x), sy(r.trueF)])),
    }),
  ];
  return parts.join("");
}

function xTicks(): string {
  return [0, 0.5, 1]
    .map((v) =>
      tag(
        "text",
        { class: "tick", x: fmt(v * PANEL_W), y: fmt(PANEL_H + 14), "text-anchor": "middle" },
        String(v)
      )
    )
    .join("");
}

function yTick(yMax: number): string {
  return tag(
    "text",
    { class: "tick", x: "-6", y: "10", "text-anchor": "end" },
    fmt(yMax)
  );
}

/** Render a parsed summary into a complete SVG document string. */
export function renderFigure(rows: SummaryRow[]): string {
  const layout: FigureLayout = buildLayout(rows);
  const nRows = layout.densities.length;
  const nCols = layout.orders.length;
  const width = MARGIN_LEFT + nCols * PANEL_W + (nCols - 1) * GAP_X + MARGIN_RIGHT;
  const height = MARGIN_TOP + nRows * PANEL_H + (nRows - 1) * GAP_Y + MARGIN_BOTTOM;
  const body: string[] = [tag("style", {}, STYLE)];

  layout.orders.forEach((order, c) => {
    const cx = MARGIN_LEFT + c * (PANEL_W + GAP_X) + PANEL_W / 2;
    body.push(
      tag(
        "text",
        { x: fmt(cx), y: fmt(MARGIN_TOP - 14), "text-anchor": "middle" },
        esc(orderLabel(order))
      )
    );
  });

  layout.panels.forEach((panelRow, r) => {
    const ty = MARGIN_TOP + r * (PANEL_H + GAP_Y);
    const yMax = rowScale(panelRow);
    body.push(
      tag(
        "text",
        {
          x: fmt(MARGIN_LEFT - 16),
          y: fmt(ty + PANEL_H / 2),
          "text-anchor": "end",
        },
        esc(layout.densities[r])
      )
    );
    panelRow.forEach((panel, c) => {
      const tx = MARGIN_LEFT + c * (PANEL_W + GAP_X);
      const inner =
        renderPanel(panel, yMax) +
        (c === 0 ? yTick(yMax) : "") +
        (r === nRows - 1 ? xTicks() : "");
      body.push(
        tag(
          "g",
          {
            class: "panel",
            "data-density": panel.densityId,
            "data-order": String(panel.order),
            transform: `translate(${fmt(tx)} ${fmt(ty)})`,
          },
          inner
        )
      );
    });
  });

  return tag(
    "svg",
    {
      xmlns: "http://www.w3.org/2000/svg",
      width: fmt(width),
      height: fmt(height),
      viewBox: `0 0 ${fmt(width)} ${fmt(height)}`,
    },
    body.join("")
  );
}
