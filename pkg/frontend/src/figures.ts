/**
 * The three figure kinds rendered from the benchmark CSVs:
 *
 * - llsp_vs_h: mean residual ratio vs the sketch-size ratio h, one line per
 *   multiplier, one panel per input class.
 * - refine_curves: per-iteration principal-angle distance (log y), error
 *   ratio, and time, one line per solver, one panel row per input class.
 * - lscore_table: the score-stability study as a formatted table.
 */

import { Table, columnIndex, numeric, parseCsv, requireColumns } from "./csv.js";
import { Series, lineChart, stack, svgTable } from "./svg.js";

export type FigureKind = "llsp_vs_h" | "refine_curves" | "lscore_table";

function distinct(table: Table, col: number): string[] {
  return [...new Set(table.rows.map((r) => r[col]))];
}

function groupSeries(
  table: Table,
  groupCol: number,
  xCol: number,
  yCol: number
): Series[] {
  return distinct(table, groupCol).map((label) => {
    const rows = table.rows.filter((r) => r[groupCol] === label);
    rows.sort((a, b) => numeric(a[xCol]) - numeric(b[xCol]));
    return {
      label,
      x: rows.map((r) => numeric(r[xCol])),
      y: rows.map((r) => numeric(r[yCol])),
    };
  });
}

export function renderLlspVsH(text: string): string {
  const table = parseCsv(text);
  requireColumns(table, ["input_class", "multiplier", "h", "mean_ratio"]);
  const cInput = columnIndex(table, "input_class");
  const cMult = columnIndex(table, "multiplier");
  const cH = columnIndex(table, "h");
  const cMean = columnIndex(table, "mean_ratio");

  const usable = {
    ...table,
    rows: table.rows.filter((r) => r[cMult] !== "SKIPPED"),
  };
  const classes = distinct(usable, cInput);
  if (classes.length === 0) {
    return lineChart({
      title: "Relative residual ratio vs h (no data)",
      xLabel: "h = s / d",
      yLabel: "mean residual ratio",
      series: [],
    });
  }
  const hTicks = [...new Set(usable.rows.map((r) => numeric(r[cH])))]
    .filter(Number.isFinite)
    .sort((a, b) => a - b);
  const panels = classes.map((cls) => {
    const sub = {
      ...usable,
      rows: usable.rows.filter((r) => r[cInput] === cls),
    };
    return lineChart({
      title: `Relative residual ratio vs h (${cls})`,
      xLabel: "h = s / d",
      yLabel: "mean residual ratio",
      xTicks: hTicks,
      series: groupSeries(sub, cMult, cH, cMean),
    });
  });
  return panels.length === 1 ? panels[0] : stack(panels, 560);
}

export function renderRefineCurves(text: string): string {
  const table = parseCsv(text);
  requireColumns(table, [
    "input_class", "solver", "iter", "distA", "err_ratio", "ms",
  ]);
  const cInput = columnIndex(table, "input_class");
  const cSolver = columnIndex(table, "solver");
  const cIter = columnIndex(table, "iter");
  const panels: string[] = [];
  const classes = distinct(table, cInput);
  if (classes.length === 0) {
    return lineChart({
      title: "Refinement (no data)",
      xLabel: "iteration",
      yLabel: "",
      series: [],
    });
  }
  for (const cls of classes) {
    const sub = { ...table, rows: table.rows.filter((r) => r[cInput] === cls) };
    const iters = [...new Set(sub.rows.map((r) => numeric(r[cIter])))]
      .sort((a, b) => a - b);
    const spec: Array<[string, string, boolean]> = [
      ["distA", "principal angle distance", true],
      ["err_ratio", "residual error ratio", false],
      ["ms", "time per iteration (ms)", false],
    ];
    for (const [col, label, logY] of spec) {
      panels.push(
        lineChart({
          title: `${cls}: ${label}`,
          xLabel: "iteration",
          yLabel: label,
          xTicks: iters,
          logY,
          series: groupSeries(sub, cSolver, cIter, columnIndex(table, col)),
        })
      );
    }
  }
  return panels.length === 1 ? panels[0] : stack(panels, 560);
}

export function renderLscoreTable(text: string): string {
  const table = parseCsv(text);
  const cols = [
    "input_class", "r", "nrank", "lra_err_mean", "lra_err_std",
    "score_err_mean", "score_err_std",
  ];
  requireColumns(table, cols);
  const idx = cols.map((c) => columnIndex(table, c));
  const fmt = (s: string, c: number) => {
    if (c < 3) return s;
    const v = numeric(s);
    return Number.isFinite(v) ? v.toExponential(2) : s;
  };
  const rows = table.rows.map((r) => idx.map((i, c) => fmt(r[i], c)));
  return svgTable("Leverage-score stability of low-rank approximations",
    cols, rows);
}

export function render(kind: FigureKind, text: string): string {
  switch (kind) {
    case "llsp_vs_h":
      return renderLlspVsH(text);
    case "refine_curves":
      return renderRefineCurves(text);
    case "lscore_table":
      return renderLscoreTable(text);
    default:
      throw new Error(`unknown figure kind '${kind as string}'`);
  }
}
