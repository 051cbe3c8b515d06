/**
 * Command-line figure kit.
 *
 *   dfsswe-figures convergence <table.csv> <out.svg> [--x dt|J] [--y linf|l2]
 *                  [--ref-slope 2] [--ref-slope -5/3] [--title text]
 *   dfsswe-figures field <snapshot.bin> <out.svg> --style contour --levels 5000:50:6000
 *   dfsswe-figures field <snapshot.bin> <out.svg> --style heatmap
 *
 * Exit codes: 0 ok, 1 bad input or malformed file.
 */

import { writeFileSync } from "node:fs";
import { renderConvergence } from "./convergence.js";
import { parseLevels, renderField } from "./field.js";
import { readSnapshot } from "./snapshot.js";
import { readTable } from "./table.js";

function fail(msg: string): never {
  process.stderr.write(`error: ${msg}\n`);
  process.exit(1);
}

export function main(argv: string[]): number {
  const [cmd, ...rest] = argv;
  try {
    if (cmd === "convergence") {
      const pos = rest.filter((a) => !a.startsWith("--"));
      if (pos.length !== 2) fail("usage: convergence <table.csv> <out.svg> [options]");
      const opt = parseFlags(rest);
      const table = readTable(pos[0]);
      const refs: number[] = [];
      for (const s of opt.multi["ref-slope"] ?? []) {
        refs.push(s === "-5/3" ? -5 / 3 : Number(s));
      }
      const svg = renderConvergence(table, {
        x: opt.single["x"],
        y: opt.single["y"],
        title: opt.single["title"],
        referenceSlopes: refs,
      });
      writeFileSync(pos[1], svg);
      return 0;
    }
    if (cmd === "field") {
      const pos = rest.filter((a) => !a.startsWith("--"));
      if (pos.length !== 2) fail("usage: field <snapshot.bin> <out.svg> [options]");
      const opt = parseFlags(rest);
      const style = (opt.single["style"] ?? "heatmap") as "heatmap" | "contour";
      if (style !== "heatmap" && style !== "contour") fail(`unknown style '${style}'`);
      const snap = readSnapshot(pos[0]);
      const levels = opt.single["levels"] ? parseLevels(opt.single["levels"]) : null;
      writeFileSync(pos[1], renderField(snap, style, levels));
      return 0;
    }
    fail("usage: dfsswe-figures <convergence|field> ...");
  } catch (e) {
    fail((e as Error).message);
  }
}

function parseFlags(args: string[]): {
  single: Record<string, string>;
  multi: Record<string, string[]>;
} {
  const single: Record<string, string> = {};
  const multi: Record<string, string[]> = {};
  for (let i = 0; i < args.length; i++) {
    if (!args[i].startsWith("--")) continue;
    const key = args[i].slice(2);
    const val = args[i + 1];
    if (val === undefined || val.startsWith("--")) {
      fail(`flag --${key} needs a value`);
    }
    single[key] = val;
    (multi[key] ??= []).push(val);
    i++;
  }
  return { single, multi };
}

const isMain = process.argv[1] && import.meta.url.endsWith(process.argv[1].split("/").pop()!);
if (isMain) {
  process.exit(main(process.argv.slice(2)));
}
