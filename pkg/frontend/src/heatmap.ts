/** Flat (p, q) heatmap of a value column; one rect per CSV row. */

import { Group, SchemaError, ValueColumn, valueOf } from "./schema.js";
import { colormap, escapeXml, fmt, svgOpen, SVG_CLOSE, WIDTH, HEIGHT } from "./style.js";

const MARGIN = { left: 70, right: 30, top: 50, bottom: 55 };

export function renderHeatmap(group: Group, column: ValueColumn, title?: string): string {
  const ps = [...new Set(group.records.map((r) => r.p))].sort((a, b) => a - b);
  const qs = [...new Set(group.records.map((r) => r.q))].sort((a, b) => a - b);
  if (ps.length === 0 || qs.length === 0) {
    throw new SchemaError("heatmap needs at least one record");
  }
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const cw = plotW / qs.length;
  const chh = plotH / ps.length;

  const heading = title ?? `${group.scheme} n=${group.n} — ${column}`;
  let svg = svgOpen(escapeXml(heading));
  svg += `<g class="cells" stroke="none">\n`;
  for (const r of group.records) {
    const i = ps.indexOf(r.p);
    const j = qs.indexOf(r.q);
    const v = valueOf(r, column);
    const x = MARGIN.left + j * cw;
    // p increases upward, matching the surface orientation
    const y = MARGIN.top + (ps.length - 1 - i) * chh;
    svg +=
      `<rect data-p="${r.p}" data-q="${r.q}" x="${fmt(x)}" y="${fmt(y)}" ` +
      `width="${fmt(cw)}" height="${fmt(chh)}" fill="${colormap(v)}"/>\n`;
  }
  svg += `</g>\n`;

  // axes and tick labels at the extremes
  const x0 = MARGIN.left;
  const y0 = MARGIN.top + plotH;
  svg += `<g stroke="#333" stroke-width="1">\n`;
  svg += `<line x1="${x0}" y1="${y0}" x2="${x0 + plotW}" y2="${y0}"/>\n`;
  svg += `<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${MARGIN.top}"/>\n`;
  svg += `</g>\n`;
  svg += `<text x="${x0 + plotW / 2}" y="${y0 + 36}" text-anchor="middle" font-size="14">q</text>\n`;
  svg += `<text x="${x0 - 44}" y="${MARGIN.top + plotH / 2}" font-size="14" transform="rotate(-90 ${x0 - 44} ${MARGIN.top + plotH / 2})" text-anchor="middle">p</text>\n`;
  svg += `<text x="${x0}" y="${y0 + 18}" font-size="11" text-anchor="middle">${qs[0]}</text>\n`;
  svg += `<text x="${x0 + plotW}" y="${y0 + 18}" font-size="11" text-anchor="middle">${qs[qs.length - 1]}</text>\n`;
  svg += `<text x="${x0 - 8}" y="${y0}" font-size="11" text-anchor="end">${ps[0]}</text>\n`;
  svg += `<text x="${x0 - 8}" y="${MARGIN.top + 10}" font-size="11" text-anchor="end">${ps[ps.length - 1]}</text>\n`;
  return svg + SVG_CLOSE;
}
