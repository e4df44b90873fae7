/**
 * Scheme-comparison line chart: one line per scheme with the value
 * column against the chain length n, error bars from the stderr column
 * when present.
 */

import { SchemaError, SurfaceRecord, ValueColumn, valueOf } from "./schema.js";
import { escapeXml, fmt, svgOpen, SVG_CLOSE, WIDTH, HEIGHT } from "./style.js";

const MARGIN = { left: 70, right: 140, top: 50, bottom: 55 };
const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"];

export function renderCompareLines(
  records: SurfaceRecord[],
  column: ValueColumn,
  title?: string,
): string {
  if (records.length === 0) {
    throw new SchemaError("compare-lines needs at least one record");
  }
  const schemes = [...new Set(records.map((r) => r.scheme))];
  const ns = [...new Set(records.map((r) => r.n))].sort((a, b) => a - b);
  const nMin = ns[0];
  const nMax = ns[ns.length - 1];
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const xOf = (n: number) =>
    MARGIN.left + (nMax === nMin ? plotW / 2 : ((n - nMin) / (nMax - nMin)) * plotW);
  const yOf = (v: number) => MARGIN.top + (1 - v) * plotH; // fixed [0, 1] range

  let svg = svgOpen(escapeXml(title ?? `scheme comparison — ${column}`));
  // frame
  const y0 = MARGIN.top + plotH;
  svg += `<g stroke="#333" stroke-width="1">\n`;
  svg += `<line x1="${MARGIN.left}" y1="${y0}" x2="${MARGIN.left + plotW}" y2="${y0}"/>\n`;
  svg += `<line x1="${MARGIN.left}" y1="${y0}" x2="${MARGIN.left}" y2="${MARGIN.top}"/>\n`;
  svg += `</g>\n`;
  svg += `<text x="${MARGIN.left + plotW / 2}" y="${y0 + 36}" text-anchor="middle" font-size="14">n</text>\n`;
  svg += `<text x="${MARGIN.left - 44}" y="${MARGIN.top + plotH / 2}" font-size="14" transform="rotate(-90 ${MARGIN.left - 44} ${MARGIN.top + plotH / 2})" text-anchor="middle">${escapeXml(column)}</text>\n`;
  for (const n of ns) {
    svg += `<text x="${fmt(xOf(n))}" y="${y0 + 18}" font-size="11" text-anchor="middle">${n}</text>\n`;
  }
  for (const v of [0, 0.5, 1]) {
    svg += `<text x="${MARGIN.left - 8}" y="${fmt(yOf(v) + 4)}" font-size="11" text-anchor="end">${v}</text>\n`;
  }

  schemes.forEach((scheme, si) => {
    const color = COLORS[si % COLORS.length];
    const pts: Array<{ n: number; v: number; e: number | null }> = [];
    for (const n of ns) {
      const rs = records.filter((r) => r.scheme === scheme && r.n === n);
      if (rs.length === 0) continue; // e.g. teleport at even n
      const v = rs.reduce((s, r) => s + valueOf(r, column), 0) / rs.length;
      const errs = rs.map((r) => r.stderr).filter((e): e is number => e !== null);
      const e = errs.length
        ? errs.reduce((s, x) => s + x, 0) / errs.length
        : null;
      pts.push({ n, v, e });
    }
    const path = pts
      .map((pt, i) => `${i === 0 ? "M" : "L"}${fmt(xOf(pt.n))},${fmt(yOf(pt.v))}`)
      .join(" ");
    svg += `<g class="series" data-scheme="${escapeXml(scheme)}">\n`;
    svg += `<path d="${path}" fill="none" stroke="${color}" stroke-width="2"/>\n`;
    for (const pt of pts) {
      const x = xOf(pt.n);
      svg += `<circle cx="${fmt(x)}" cy="${fmt(yOf(pt.v))}" r="3" fill="${color}"/>\n`;
      if (pt.e !== null && pt.e > 0) {
        svg +=
          `<line class="errorbar" x1="${fmt(x)}" y1="${fmt(yOf(pt.v - pt.e))}" ` +
          `x2="${fmt(x)}" y2="${fmt(yOf(pt.v + pt.e))}" stroke="${color}" stroke-width="1"/>\n`;
      }
    }
    svg += `</g>\n`;
    const ly = MARGIN.top + 16 + si * 18;
    svg += `<rect x="${WIDTH - MARGIN.right + 12}" y="${ly - 9}" width="12" height="12" fill="${color}"/>\n`;
    svg += `<text x="${WIDTH - MARGIN.right + 30}" y="${ly + 1}" font-size="12">${escapeXml(scheme)}</text>\n`;
  });
  return svg + SVG_CLOSE;
}
