/** Single-file HTML report bundling rendered figures with the run
 * manifest echoed alongside. */

import { Figure } from "./render.js";
import { escapeXml } from "./style.js";

export class ReportError extends Error {}

const CSS = `
body { font-family: sans-serif; margin: 2rem auto; max-width: 1380px; color: #222; }
h1 { font-size: 1.4rem; }
.figures { display: flex; flex-wrap: wrap; gap: 1rem; }
figure { margin: 0; border: 1px solid #ddd; padding: 0.5rem; }
figcaption { font-size: 0.85rem; color: #555; text-align: center; }
pre.manifest { background: #f6f6f6; border: 1px solid #ddd; padding: 1rem;
  overflow-x: auto; font-size: 0.8rem; }
`;

export function renderReport(
  figures: Figure[],
  manifest: unknown = null,
  title = "sweep report",
): string {
  if (figures.length === 0) {
    throw new ReportError("report needs at least one figure");
  }
  const panels = figures
    .map(
      (f) =>
        `<figure>\n${f.svg}<figcaption>${escapeXml(f.label)} — ${escapeXml(f.value)}</figcaption>\n</figure>`,
    )
    .join("\n");
  const manifestBlock =
    manifest === null
      ? ""
      : `<h2>Manifest</h2>\n<pre class="manifest">${escapeXml(
          JSON.stringify(manifest, null, 2),
        )}</pre>\n`;
  return `<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>${escapeXml(title)}</title>
<style>${CSS}</style>
</head>
<body>
<h1>${escapeXml(title)}</h1>
<div class="figures">
${panels}
</div>
${manifestBlock}</body>
</html>
`;
}
