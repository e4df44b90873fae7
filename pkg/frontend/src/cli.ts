#!/usr/bin/env node
/**
 * Standalone renderer for sweep CSV artifacts.
 *
 *   render --input sweep.csv --kind surface|heatmap|compare-lines
 *          --value success_recorded|success_true|fidelity|hellinger
 *          --out figure.svg [--title ...]
 *   report --input a.csv[,b.csv] --out report.html [--kind ...] [--value ...]
 *
 * Exit codes: 0 success, 2 bad arguments or schema mismatch.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { parseCsv, SchemaError, ValueColumn } from "./schema.js";
import { Figure, PlotKind, renderFigures } from "./render.js";
import { renderReport, ReportError } from "./report.js";

function parseArgs(argv: string[]): Record<string, string> {
  const out: Record<string, string> = {};
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    if (!key.startsWith("--") || i + 1 >= argv.length) {
      throw new SchemaError(`malformed argument "${key}"`);
    }
    out[key.slice(2)] = argv[i + 1];
  }
  return out;
}

function loadManifest(csvPath: string): unknown {
  const mpath = csvPath.replace(/\.[^.]+$/, "") + ".manifest.json";
  if (fs.existsSync(mpath)) {
    return JSON.parse(fs.readFileSync(mpath, "utf8"));
  }
  return null;
}

function figuresFor(csvPath: string, kind: PlotKind, value: ValueColumn, title?: string): Figure[] {
  const records = parseCsv(fs.readFileSync(csvPath, "utf8"));
  return renderFigures(records, { kind, value, title });
}

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  try {
    const args = parseArgs(rest);
    const kind = (args.kind ?? "surface") as PlotKind;
    const value = (args.value ?? "success_recorded") as ValueColumn;
    if (!args.input || !args.out) {
      throw new SchemaError(`${command}: --input and --out are required`);
    }
    if (command === "render") {
      const figures = figuresFor(args.input, kind, value, args.title);
      if (figures.length === 1) {
        fs.writeFileSync(args.out, figures[0].svg);
        console.log(`wrote ${args.out}`);
      } else {
        const ext = path.extname(args.out);
        const stem = args.out.slice(0, args.out.length - ext.length);
        for (const f of figures) {
          const target = `${stem}-${f.label}${ext}`;
          fs.writeFileSync(target, f.svg);
          console.log(`wrote ${target}`);
        }
      }
      return 0;
    }
    if (command === "report") {
      const inputs = args.input.split(",");
      const figures = inputs.flatMap((p) => figuresFor(p, kind, value, args.title));
      const manifest = loadManifest(inputs[0]);
      fs.writeFileSync(
        args.out,
        renderReport(figures, manifest, args.title ?? "sweep report"),
      );
      console.log(`wrote ${args.out}`);
      return 0;
    }
    throw new SchemaError(`unknown command "${command ?? "<none>"}"`);
  } catch (err) {
    if (err instanceof SchemaError || err instanceof ReportError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    throw err;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
