/**
 * Isometric 3D surface of a value column over the (p, q) grid.
 *
 * The z range is fixed to [0, 1] (all plotted columns are
 * probabilities), so every projected vertex depends on exactly one CSV
 * cell: perturbing a value moves one vertex and the quads sharing it,
 * nothing else.
 */

import { Group, SchemaError, ValueColumn, valueOf } from "./schema.js";
import { colormap, escapeXml, fmt, svgOpen, SVG_CLOSE, WIDTH, HEIGHT } from "./style.js";

const CX = 210; // horizontal spread of one grid unit
const CY = 120; // depth foreshortening
const CZ = 220; // height of z = 1
const OX = WIDTH / 2;
const OY = HEIGHT - 110;

interface Vertex {
  p: number;
  q: number;
  z: number;
  x: number;
  y: number;
}

function project(pu: number, qu: number, z: number): [number, number] {
  const x = OX + (qu - pu) * (CX / 2);
  const y = OY - (pu + qu) * (CY / 2) - z * CZ + CY;
  return [x, y];
}

export function renderSurface(group: Group, column: ValueColumn, title?: string): string {
  const ps = [...new Set(group.records.map((r) => r.p))].sort((a, b) => a - b);
  const qs = [...new Set(group.records.map((r) => r.q))].sort((a, b) => a - b);
  if (ps.length < 2 || qs.length < 2) {
    throw new SchemaError(
      `surface needs a 2D grid; got ${ps.length} p values x ${qs.length} q values`,
    );
  }
  const byKey = new Map<string, number>();
  for (const r of group.records) {
    byKey.set(`${r.p} ${r.q}`, valueOf(r, column));
  }

  const span = (v: number, axis: number[]) =>
    (v - axis[0]) / (axis[axis.length - 1] - axis[0]);

  const verts: Vertex[] = [];
  const index = new Map<string, Vertex>();
  for (const p of ps) {
    for (const q of qs) {
      const z = byKey.get(`${p} ${q}`);
      if (z === undefined) {
        throw new SchemaError(`grid hole at p=${p}, q=${q}`);
      }
      const [x, y] = project(span(p, ps), span(q, qs), z);
      const v = { p, q, z, x, y };
      verts.push(v);
      index.set(`${p} ${q}`, v);
    }
  }

  // painter's algorithm: far rows (low p+q) first
  const quads: Array<{ vs: Vertex[]; depth: number }> = [];
  for (let i = 0; i < ps.length - 1; i++) {
    for (let j = 0; j < qs.length - 1; j++) {
      const vs = [
        index.get(`${ps[i]} ${qs[j]}`)!,
        index.get(`${ps[i]} ${qs[j + 1]}`)!,
        index.get(`${ps[i + 1]} ${qs[j + 1]}`)!,
        index.get(`${ps[i + 1]} ${qs[j]}`)!,
      ];
      quads.push({ vs, depth: span(ps[i], ps) + span(qs[j], qs) });
    }
  }
  quads.sort((a, b) => a.depth - b.depth);

  const heading =
    title ?? `${group.scheme} n=${group.n} — ${column}`;
  let svg = svgOpen(escapeXml(heading));

  // base axes
  const [x00, y00] = project(0, 0, 0);
  const [x10, y10] = project(1, 0, 0);
  const [x01, y01] = project(0, 1, 0);
  svg += `<g stroke="#555" stroke-width="1">\n`;
  svg += `<line x1="${fmt(x00)}" y1="${fmt(y00)}" x2="${fmt(x10)}" y2="${fmt(y10)}"/>\n`;
  svg += `<line x1="${fmt(x00)}" y1="${fmt(y00)}" x2="${fmt(x01)}" y2="${fmt(y01)}"/>\n`;
  svg += `</g>\n`;
  svg += `<text x="${fmt(x10 - 24)}" y="${fmt(y10 + 18)}" font-size="14">p</text>\n`;
  svg += `<text x="${fmt(x01 + 14)}" y="${fmt(y01 + 18)}" font-size="14">q</text>\n`;
  const [xz, yz] = project(0, 0, 1);
  svg += `<text x="${fmt(xz - 10)}" y="${fmt(yz - 8)}" font-size="12" text-anchor="end">${escapeXml(column)}</text>\n`;

  svg += `<g stroke="#333" stroke-width="0.5">\n`;
  for (const { vs } of quads) {
    const mean = (vs[0].z + vs[1].z + vs[2].z + vs[3].z) / 4;
    const points = vs.map((v) => `${fmt(v.x)},${fmt(v.y)}`).join(" ");
    svg += `<polygon points="${points}" fill="${colormap(mean)}" fill-opacity="0.95"/>\n`;
  }
  svg += `</g>\n`;

  // one marker per grid vertex: the pass-through contract surface
  svg += `<g class="vertices" fill="#000">\n`;
  for (const v of verts) {
    svg +=
      `<circle data-p="${v.p}" data-q="${v.q}" cx="${fmt(v.x)}" cy="${fmt(v.y)}" r="1"/>\n`;
  }
  svg += `</g>\n`;
  return svg + SVG_CLOSE;
}
