import { describe, expect, it } from "vitest";

import { escapeXml, renderChart } from "../src/chart.js";
import type { PlayerLine } from "../src/state.js";

function line(playerId: string, points: Array<[number, number]>, onPitch = true): PlayerLine {
  return {
    playerId,
    teamId: "HOME",
    label: playerId,
    points: points.map(([mark, score]) => ({ mark, score })),
    onPitch,
  };
}

describe("renderChart", () => {
  it("draws one polyline per player with all its points", () => {
    const svg = renderChart([
      line("p1", [[0, 0], [5, 0.2], [10, 0.4]]),
      line("p2", [[0, 0], [5, -0.1]]),
    ]);
    expect(svg.match(/<polyline/g)).toHaveLength(2);
    const p1 = svg.match(/data-player="p1"[^>]*$/m) ?? svg.match(/points="([^"]*)" data-player="p1"/);
    expect(p1).not.toBeNull();
    const coords = /points="([^"]*)" data-player="p1"/.exec(svg)![1]!;
    expect(coords.split(" ")).toHaveLength(3);
  });

  it("is a pure function of its input", () => {
    const lines = [line("p1", [[0, 0], [5, 0.3]])];
    expect(renderChart(lines)).toBe(renderChart(lines));
    const moved = [line("p1", [[0, 0], [5, 0.30001]])];
    expect(renderChart(moved)).not.toBe(renderChart(lines));
  });

  it("marks substitutions and goals on the time axis", () => {
    const svg = renderChart([line("p1", [[0, 0], [50, 0.2]])], {
      markers: [
        { minute: 45, kind: "sub", teamId: "HOME" },
        { minute: 28, kind: "goal", teamId: "HOME" },
      ],
    });
    expect(svg.match(/data-marker="sub"/g)).toHaveLength(1);
    expect(svg.match(/data-marker="goal"/g)).toHaveLength(1);
  });

  it("labels substituted players as off", () => {
    const svg = renderChart([line("p1", [[0, 0], [5, 0.1]], false)]);
    expect(svg).toContain("(off)");
  });

  it("escapes markup in labels and ids", () => {
    const svg = renderChart([line('x"<svg>', [[0, 0]])]);
    expect(svg).not.toContain("<svg>\"");
    expect(svg).toContain("&lt;svg&gt;");
  });

  it("renders an empty frame without lines", () => {
    const svg = renderChart([]);
    expect(svg).toContain("<svg");
    expect(svg).not.toContain("<polyline");
  });
});

describe("escapeXml", () => {
  it("escapes the five XML specials", () => {
    expect(escapeXml(`<&>"'`)).toBe("&lt;&amp;&gt;&quot;&apos;");
  });
});
