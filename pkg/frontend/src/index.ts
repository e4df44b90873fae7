export { CSV_COLUMNS, Group, groupRecords, parseCsv, SchemaError, SurfaceRecord, ValueColumn, valueOf } from "./schema.js";
export { Figure, PlotKind, PlotRequest, PLOT_KINDS, renderCsv, renderFigures, VALUE_COLUMNS } from "./render.js";
export { renderSurface } from "./surface.js";
export { renderHeatmap } from "./heatmap.js";
export { renderCompareLines } from "./lines.js";
export { renderReport, ReportError } from "./report.js";
