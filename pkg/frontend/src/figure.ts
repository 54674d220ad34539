/**
 * Hand-rolled SVG rendering of the multi-panel figure: one row per
 * snapshot time, columns |u|, v, w against x.  An optional x-window
 * restricts every panel to the interaction region for close-ups.
 */

import type { SnapshotData } from "./snapshot.js";

export interface FigureRow {
  /** row annotation, e.g. "t = 0.001" */
  label: string;
  data: SnapshotData;
}

export interface FigureSpec {
  rows: FigureRow[];
  /** optional [a, b] close-up window on x */
  window?: [number, number];
  /** panel width in pixels (default 320) */
  panelWidth?: number;
  /** panel height in pixels (default 150) */
  panelHeight?: number;
}

interface Series {
  label: string;
  color: string;
  values: (snap: SnapshotData, i: number) => number;
}

const COLUMNS: Series[] = [
  { label: "|u|", color: "#4361ee", values: (s, i) => Math.hypot(s.reU[i], s.imU[i]) },
  { label: "v", color: "#2d6a4f", values: (s, i) => s.v[i] },
  { label: "w", color: "#e63946", values: (s, i) => s.w[i] },
];

const MARGIN = { left: 64, right: 16, top: 34, bottom: 34 };
const GAP_X = 18;
const GAP_Y = 16;

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((n) => n >= rough) ?? rough;
  const start = Math.ceil(min / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= max + step * 0.01; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

function fmt(value: number): string {
  if (value === 0) return "0";
  const a = Math.abs(value);
  if (a >= 1000 || a < 0.01) return value.toExponential(1);
  return String(parseFloat(value.toPrecision(4)));
}

/** indices of the nodes inside the window (all nodes when no window) */
function windowIndices(x: number[], window?: [number, number]): number[] {
  const idx: number[] = [];
  for (let i = 0; i < x.length; i++) {
    if (!window || (x[i] >= window[0] && x[i] <= window[1])) idx.push(i);
  }
  if (idx.length < 2) {
    throw new Error("x-window keeps fewer than two grid nodes");
  }
  return idx;
}

// ---------------------------------------------------------------------------
// rendering
// ---------------------------------------------------------------------------

export function renderFigure(spec: FigureSpec): string {
  if (spec.rows.length === 0) {
    throw new Error("figure needs at least one snapshot row");
  }
  const pw = spec.panelWidth ?? 320;
  const ph = spec.panelHeight ?? 150;
  const nRows = spec.rows.length;
  const nCols = COLUMNS.length;

  const width = MARGIN.left + nCols * pw + (nCols - 1) * GAP_X + MARGIN.right;
  const height = MARGIN.top + nRows * ph + (nRows - 1) * GAP_Y + MARGIN.bottom;

  const idx = windowIndices(spec.rows[0].data.x, spec.window);
  const xs = idx.map((i) => spec.rows[0].data.x[i]);
  const xMin = xs[0];
  const xMax = xs[xs.length - 1];

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="11">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
  );

  for (let col = 0; col < nCols; col++) {
    const cx = MARGIN.left + col * (pw + GAP_X) + pw / 2;
    parts.push(
      `<text x="${cx}" y="${MARGIN.top - 12}" text-anchor="middle" ` +
        `font-size="14" font-weight="bold">${esc(COLUMNS[col].label)}</text>`,
    );
  }

  for (let row = 0; row < nRows; row++) {
    const snap = spec.rows[row].data;
    const y0 = MARGIN.top + row * (ph + GAP_Y);

    const ry = y0 + ph / 2;
    parts.push(
      `<text x="14" y="${ry}" text-anchor="middle" font-size="12" ` +
        `transform="rotate(-90 14 ${ry})">${esc(spec.rows[row].label)}</text>`,
    );

    for (let col = 0; col < nCols; col++) {
      const x0 = MARGIN.left + col * (pw + GAP_X);
      parts.push(
        renderPanel(snap, COLUMNS[col], idx, xMin, xMax, x0, y0, pw, ph,
                    row === nRows - 1),
      );
    }
  }

  parts.push("</svg>");
  return parts.join("\n");
}

function renderPanel(
  snap: SnapshotData,
  series: Series,
  idx: number[],
  xMin: number,
  xMax: number,
  x0: number,
  y0: number,
  pw: number,
  ph: number,
  labelXAxis: boolean,
): string {
  const values = idx.map((i) => series.values(snap, i));
  let vMin = Math.min(...values);
  let vMax = Math.max(...values);
  if (vMax - vMin < 1e-300) {
    vMin -= 1;
    vMax += 1;
  }
  const pad = 0.08 * (vMax - vMin);
  vMin -= pad;
  vMax += pad;

  const sx = (x: number) => x0 + ((x - xMin) / (xMax - xMin)) * pw;
  const sy = (v: number) => y0 + ph - ((v - vMin) / (vMax - vMin)) * ph;

  const parts: string[] = [];
  parts.push(
    `<rect x="${x0}" y="${y0}" width="${pw}" height="${ph}" fill="none" ` +
      `stroke="#222" stroke-width="1"/>`,
  );

  for (const t of niceTicks(vMin, vMax, 4)) {
    const y = sy(t);
    parts.push(
      `<line x1="${x0}" y1="${y.toFixed(2)}" x2="${x0 + 4}" y2="${y.toFixed(2)}" stroke="#222"/>`,
      `<text x="${x0 - 4}" y="${(y + 3.5).toFixed(2)}" text-anchor="end" ` +
        `font-size="9" fill="#444">${esc(fmt(t))}</text>`,
    );
  }
  for (const t of niceTicks(xMin, xMax, 5)) {
    const x = sx(t);
    parts.push(
      `<line x1="${x.toFixed(2)}" y1="${y0 + ph}" x2="${x.toFixed(2)}" y2="${y0 + ph - 4}" stroke="#222"/>`,
    );
    if (labelXAxis) {
      parts.push(
        `<text x="${x.toFixed(2)}" y="${y0 + ph + 14}" text-anchor="middle" ` +
          `font-size="9" fill="#444">${esc(fmt(t))}</text>`,
      );
    }
  }
  if (labelXAxis) {
    parts.push(
      `<text x="${x0 + pw / 2}" y="${y0 + ph + 28}" text-anchor="middle" ` +
        `font-size="12">x</text>`,
    );
  }

  const points: string[] = [];
  for (let k = 0; k < idx.length; k++) {
    points.push(`${sx(snap.x[idx[k]]).toFixed(2)},${sy(values[k]).toFixed(2)}`);
  }
  parts.push(
    `<polyline points="${points.join(" ")}" fill="none" ` +
      `stroke="${series.color}" stroke-width="1.1"/>`,
  );
  return parts.join("\n");
}
