/** Plot request dispatch: one figure per (scheme, n) group. */

import { groupRecords, parseCsv, SchemaError, SurfaceRecord, ValueColumn } from "./schema.js";
import { renderHeatmap } from "./heatmap.js";
import { renderCompareLines } from "./lines.js";
import { renderSurface } from "./surface.js";

export type PlotKind = "surface" | "heatmap" | "compare-lines";

export interface PlotRequest {
  kind: PlotKind;
  value: ValueColumn;
  title?: string;
}

export interface Figure {
  label: string;
  value: ValueColumn;
  svg: string;
}

export const PLOT_KINDS: PlotKind[] = ["surface", "heatmap", "compare-lines"];
export const VALUE_COLUMNS: ValueColumn[] = [
  "success_recorded",
  "success_true",
  "fidelity",
  "hellinger",
];

/** Render every (scheme, n) group of the records for one request;
 * compare-lines spans all groups and yields a single figure. */
export function renderFigures(records: SurfaceRecord[], req: PlotRequest): Figure[] {
  if (!PLOT_KINDS.includes(req.kind)) {
    throw new SchemaError(`unknown plot kind "${req.kind}"`);
  }
  if (!VALUE_COLUMNS.includes(req.value)) {
    throw new SchemaError(`unknown value column "${req.value}"`);
  }
  if (req.kind === "compare-lines") {
    return [
      {
        label: "compare",
        value: req.value,
        svg: renderCompareLines(records, req.value, req.title),
      },
    ];
  }
  const render = req.kind === "surface" ? renderSurface : renderHeatmap;
  return groupRecords(records).map((g) => ({
    label: `${g.scheme}-n${g.n}`,
    value: req.value,
    svg: render(g, req.value, req.title),
  }));
}

export function renderCsv(text: string, req: PlotRequest): Figure[] {
  return renderFigures(parseCsv(text), req);
}
