/** Shared plot geometry and color helpers. */

export const WIDTH = 640;
export const HEIGHT = 480;

/** Fixed-range colormap on [0, 1] (all plotted columns are
 * probabilities), dark blue -> teal -> yellow. Fixing the range keeps
 * rendering strictly local: one changed cell recolors one cell. */
export function colormap(t: number): string {
  const x = Math.min(1, Math.max(0, t));
  const stops: Array<[number, [number, number, number]]> = [
    [0.0, [38, 10, 84]],
    [0.35, [32, 110, 140]],
    [0.7, [60, 185, 115]],
    [1.0, [250, 230, 60]],
  ];
  for (let i = 1; i < stops.length; i++) {
    const [t1, c1] = stops[i];
    const [t0, c0] = stops[i - 1];
    if (x <= t1) {
      const u = (x - t0) / (t1 - t0);
      const mix = c0.map((a, j) => Math.round(a + u * (c1[j] - a)));
      return `rgb(${mix[0]},${mix[1]},${mix[2]})`;
    }
  }
  return "rgb(250,230,60)";
}

export function fmt(v: number): string {
  // fixed decimals keep output byte-stable across runs
  return v.toFixed(2);
}

export function svgOpen(title: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
    `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">\n` +
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>\n` +
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="16">${title}</text>\n`
  );
}

export const SVG_CLOSE = "</svg>\n";

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
