/**
 * Hand-rolled SVG chart primitives: a line chart with explicit x ticks,
 * optional log-scale y axis, a legend, and a plain table.  No DOM, no
 * dependencies; every builder returns an SVG string.
 */

export interface Series {
  label: string;
  x: number[];
  y: number[];
  color?: string;
}

export interface ChartOpts {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  xTicks?: number[];
  logY?: boolean;
  width?: number;
  height?: number;
}

export const PALETTE = [
  "#4361ee",
  "#e63946",
  "#2d6a4f",
  "#f4a261",
  "#7209b7",
  "#0096c7",
];

const MARGIN = { top: 42, right: 24, bottom: 46, left: 64 };

function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(0);
  return Number(v.toPrecision(4)).toString();
}

function niceTicks(lo: number, hi: number, n = 5): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / n)));
  const err = span / (n * step);
  const mult = err >= 7.5 ? 10 : err >= 3 ? 5 : err >= 1.5 ? 2 : 1;
  const s = step * mult;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / s) * s; v <= hi + 1e-12 * span; v += s) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.floor(Math.log10(lo)); e <= Math.ceil(Math.log10(hi)); e++) {
    const v = Math.pow(10, e);
    if (v >= lo / 1.001 && v <= hi * 1.001) ticks.push(v);
  }
  return ticks.length > 0 ? ticks : [lo, hi];
}

/** Line chart; series with empty data are listed in the legend only. */
export function lineChart(opts: ChartOpts): string {
  const W = opts.width ?? 560;
  const H = opts.height ?? 360;
  const iw = W - MARGIN.left - MARGIN.right;
  const ih = H - MARGIN.top - MARGIN.bottom;

  const xs = opts.series.flatMap((s) => s.x).filter(Number.isFinite);
  const ys = opts.series.flatMap((s) => s.y).filter(Number.isFinite);
  const hasData = xs.length > 0 && ys.length > 0;

  let x0 = hasData ? Math.min(...xs) : 0;
  let x1 = hasData ? Math.max(...xs) : 1;
  if (opts.xTicks && opts.xTicks.length > 0) {
    x0 = Math.min(x0, ...opts.xTicks);
    x1 = Math.max(x1, ...opts.xTicks);
  }
  if (x1 === x0) {
    x1 = x0 + 1;
  }
  let y0: number;
  let y1: number;
  if (opts.logY) {
    const pos = ys.filter((v) => v > 0);
    y0 = pos.length ? Math.min(...pos) : 0.1;
    y1 = pos.length ? Math.max(...pos) : 10;
    if (y1 === y0) {
      y0 /= 10;
      y1 *= 10;
    }
  } else {
    y0 = hasData ? Math.min(...ys) : 0;
    y1 = hasData ? Math.max(...ys) : 1;
    if (y1 === y0) {
      y1 = y0 + 1;
    }
    const pad = 0.06 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
  }

  const px = (x: number) => MARGIN.left + ((x - x0) / (x1 - x0)) * iw;
  const py = (y: number) =>
    opts.logY
      ? MARGIN.top + ih - ((Math.log10(y) - Math.log10(y0)) /
          (Math.log10(y1) - Math.log10(y0))) * ih
      : MARGIN.top + ih - ((y - y0) / (y1 - y0)) * ih;

  const xTicks = opts.xTicks ?? niceTicks(x0, x1);
  const yTicks = opts.logY ? logTicks(y0, y1) : niceTicks(y0, y1);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" ` +
      `viewBox="0 0 ${W} ${H}" font-family="sans-serif" font-size="11">`
  );
  parts.push(`<rect width="${W}" height="${H}" fill="white"/>`);
  parts.push(
    `<text x="${W / 2}" y="20" text-anchor="middle" font-size="14">` +
      `${esc(opts.title)}</text>`
  );
  // frame
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${iw}" height="${ih}" ` +
      `fill="none" stroke="#999"/>`
  );
  // ticks
  for (const t of xTicks) {
    const x = px(t);
    parts.push(
      `<line x1="${x}" y1="${MARGIN.top + ih}" x2="${x}" ` +
        `y2="${MARGIN.top + ih + 5}" stroke="#333"/>`
    );
    parts.push(
      `<text class="x-tick" x="${x}" y="${MARGIN.top + ih + 18}" ` +
        `text-anchor="middle">${fmtTick(t)}</text>`
    );
  }
  for (const t of yTicks) {
    const y = py(t);
    parts.push(
      `<line x1="${MARGIN.left - 5}" y1="${y}" x2="${MARGIN.left}" ` +
        `y2="${y}" stroke="#333"/>`
    );
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + iw}" ` +
        `y2="${y}" stroke="#eee"/>`
    );
    parts.push(
      `<text class="y-tick" x="${MARGIN.left - 8}" y="${y + 4}" ` +
        `text-anchor="end">${fmtTick(t)}</text>`
    );
  }
  parts.push(
    `<text x="${MARGIN.left + iw / 2}" y="${H - 8}" text-anchor="middle">` +
      `${esc(opts.xLabel)}</text>`
  );
  parts.push(
    `<text x="16" y="${MARGIN.top + ih / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 16 ${MARGIN.top + ih / 2})">` +
      `${esc(opts.yLabel)}</text>`
  );
  // series
  opts.series.forEach((s, i) => {
    const color = s.color ?? PALETTE[i % PALETTE.length];
    const pts = s.x
      .map((x, j) => [x, s.y[j]] as const)
      .filter(([x, y]) => Number.isFinite(x) && Number.isFinite(y) &&
        (!opts.logY || y > 0));
    if (pts.length > 0) {
      const d = pts.map(([x, y]) => `${px(x).toFixed(2)},${py(y).toFixed(2)}`)
        .join(" ");
      parts.push(
        `<polyline class="series" data-label="${esc(s.label)}" points="${d}" ` +
          `fill="none" stroke="${color}" stroke-width="1.6"/>`
      );
      for (const [x, y] of pts) {
        parts.push(
          `<circle cx="${px(x).toFixed(2)}" cy="${py(y).toFixed(2)}" r="2.4" ` +
            `fill="${color}"/>`
        );
      }
    }
    // legend entry (also for empty series, so the caller sees what was asked)
    const ly = MARGIN.top + 10 + i * 16;
    const lx = MARGIN.left + iw - 130;
    parts.push(
      `<line x1="${lx}" y1="${ly}" x2="${lx + 18}" y2="${ly}" ` +
        `stroke="${color}" stroke-width="2"/>`
    );
    parts.push(
      `<text class="legend" x="${lx + 24}" y="${ly + 4}">${esc(s.label)}</text>`
    );
  });
  parts.push("</svg>");
  return parts.join("\n");
}

/** Stack several SVG strings vertically into one document. */
export function stack(svgs: string[], width: number): string {
  let y = 0;
  const inner: string[] = [];
  for (const svg of svgs) {
    const hMatch = svg.match(/height="(\d+(?:\.\d+)?)"/);
    const h = hMatch ? Number(hMatch[1]) : 360;
    inner.push(`<g transform="translate(0 ${y})">${svg}</g>`);
    y += h;
  }
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${y}">` +
    inner.join("\n") +
    "</svg>"
  );
}

/** Plain table rendered as SVG text rows. */
export function svgTable(title: string, header: string[], rows: string[][]): string {
  const colW = 110;
  const rowH = 20;
  const W = Math.max(360, 20 + colW * header.length);
  const H = 70 + rowH * (rows.length + 1);
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" ` +
      `font-family="monospace" font-size="11">`
  );
  parts.push(`<rect width="${W}" height="${H}" fill="white"/>`);
  parts.push(
    `<text x="${W / 2}" y="22" text-anchor="middle" font-size="14" ` +
      `font-family="sans-serif">${esc(title)}</text>`
  );
  header.forEach((h, c) => {
    parts.push(
      `<text class="th" x="${16 + c * colW}" y="48" font-weight="bold">` +
        `${esc(h)}</text>`
    );
  });
  parts.push(
    `<line x1="10" y1="54" x2="${W - 10}" y2="54" stroke="#333"/>`
  );
  rows.forEach((row, r) => {
    row.forEach((cell, c) => {
      parts.push(
        `<text class="td" x="${16 + c * colW}" y="${48 + rowH * (r + 1)}">` +
          `${esc(cell)}</text>`
      );
    });
  });
  parts.push("</svg>");
  return parts.join("\n");
}
