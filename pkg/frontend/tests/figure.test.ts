import { describe, expect, it } from "vitest";

import { renderFigure, type FigureRow } from "../src/figure.js";
import { parseSnapshot, SNAPSHOT_HEADER } from "../src/snapshot.js";

function syntheticRow(label: string, n = 33): FigureRow {
  const lines = [SNAPSHOT_HEADER];
  for (let i = 0; i < n; i++) {
    const x = -1 + (2 * i) / (n - 1);
    const re = Math.exp(-4 * x * x) * Math.cos(6 * x);
    const im = Math.exp(-4 * x * x) * Math.sin(6 * x);
    lines.push(
      [x, re, im, Math.hypot(re, im), 0.3 * Math.cos(x), 0.4 * Math.sin(x)].join(", "),
    );
  }
  return { label, data: parseSnapshot(lines.join("\n")) };
}

describe("renderFigure", () => {
  it("renders one row of three panels with labels", () => {
    const svg = renderFigure({ rows: [syntheticRow("t = 0")] });
    expect(svg).toContain("<svg");
    expect(svg).toContain("</svg>");
    expect((svg.match(/<polyline/g) ?? []).length).toBe(3);
    expect(svg).toContain("|u|");
    expect(svg).toContain(">v<");
    expect(svg).toContain(">w<");
    expect(svg).toContain("t = 0");
    expect(svg).toContain(">x<");
  });

  it("renders one panel row per snapshot", () => {
    const rows = [syntheticRow("t = 0"), syntheticRow("t = 1"), syntheticRow("t = 2")];
    const svg = renderFigure({ rows });
    expect((svg.match(/<polyline/g) ?? []).length).toBe(9);
    expect(svg).toContain("t = 2");
  });

  it("flat fields render as flat lines without degenerate scales", () => {
    const zero = syntheticRow("t = 0");
    zero.data.v.fill(0);
    const svg = renderFigure({ rows: [zero] });
    expect(svg).toContain("<polyline");
    expect(svg).not.toContain("NaN");
  });

  it("applies the x-window to every panel", () => {
    const row = syntheticRow("t = 0", 201);
    const full = renderFigure({ rows: [row] });
    const windowed = renderFigure({ rows: [row], window: [-0.25, 0.25] });
    const count = (svg: string) =>
      (svg.match(/<polyline points="([^"]*)"/)?.[1] ?? "").split(" ").length;
    expect(count(windowed)).toBeLessThan(count(full));
    expect(count(windowed)).toBeGreaterThan(10);
  });

  it("rejects windows that keep no data", () => {
    expect(() => renderFigure({ rows: [syntheticRow("t")], window: [5, 6] }))
      .toThrow(/fewer than two/);
  });

  it("rejects empty figures", () => {
    expect(() => renderFigure({ rows: [] })).toThrow(/at least one/);
  });
});
