/** SVG line chart rendered to a string: no chart library, no DOM required.
 *
 * Input values are plotted exactly as received; the only arithmetic here is
 * coordinate mapping.
 */

import type { PlayerLine } from "./state.js";

export interface ChartMarker {
  minute: number;
  kind: "sub" | "goal";
  teamId: string;
}

export interface ChartOptions {
  width?: number;
  height?: number;
  markers?: ChartMarker[];
  title?: string;
}

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
                "#e377c2", "#17becf", "#bcbd22", "#7f7f7f", "#aec7e8"];
const DASHES = ["", "6 3", "2 2", "8 3 2 3"];

function niceTicks(lo: number, hi: number, count: number): number[] {
  if (hi <= lo) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const scaled = [1, 2, 5, 10].find((m) => span / (step * m) <= count) ?? 10;
  const tick = step * scaled;
  const first = Math.ceil(lo / tick) * tick;
  const ticks: number[] = [];
  for (let v = first; v <= hi + 1e-12; v += tick) ticks.push(Number(v.toFixed(10)));
  return ticks;
}

export function renderChart(lines: PlayerLine[], options: ChartOptions = {}): string {
  const width = options.width ?? 560;
  const height = options.height ?? 300;
  const pad = { left: 46, right: 120, top: options.title ? 26 : 12, bottom: 28 };
  const innerW = width - pad.left - pad.right;
  const innerH = height - pad.top - pad.bottom;

  const marks = lines.flatMap((l) => l.points.map((p) => p.mark));
  const scores = lines.flatMap((l) => l.points.map((p) => p.score));
  const xMax = Math.max(5, ...marks);
  const yMin = Math.min(0, ...(scores.length ? scores : [0]));
  const yMax = Math.max(0.1, ...(scores.length ? scores : [0.1]));
  const x = (m: number) => pad.left + (m / xMax) * innerW;
  const y = (s: number) => pad.top + innerH - ((s - yMin) / (yMax - yMin)) * innerH;

  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
    `width="${width}" height="${height}" role="img">`);
  if (options.title) {
    parts.push(`<text x="${pad.left}" y="16" class="chart-title">${escapeXml(options.title)}</text>`);
  }

  for (const tick of niceTicks(yMin, yMax, 5)) {
    const ty = y(tick);
    parts.push(`<line x1="${pad.left}" y1="${ty}" x2="${width - pad.right}" y2="${ty}" ` +
      `stroke="#e3e3e3" stroke-width="1"/>`);
    parts.push(`<text x="${pad.left - 6}" y="${ty + 3}" text-anchor="end" class="tick">` +
      `${tick.toFixed(2)}</text>`);
  }
  for (let m = 0; m <= xMax; m += 15) {
    parts.push(`<text x="${x(m)}" y="${height - 8}" text-anchor="middle" class="tick">${m}'</text>`);
  }
  const zeroY = y(0);
  parts.push(`<line x1="${pad.left}" y1="${zeroY}" x2="${width - pad.right}" y2="${zeroY}" ` +
    `stroke="#888" stroke-width="1"/>`);

  for (const marker of options.markers ?? []) {
    const mx = x(marker.minute);
    const color = marker.kind === "goal" ? "#c9a400" : "#b9b9b9";
    parts.push(`<line x1="${mx}" y1="${pad.top}" x2="${mx}" y2="${pad.top + innerH}" ` +
      `stroke="${color}" stroke-width="1" stroke-dasharray="3 3" data-marker="${marker.kind}"/>`);
  }

  lines.forEach((line, i) => {
    const color = COLORS[i % COLORS.length];
    const dash = DASHES[Math.floor(i / COLORS.length) % DASHES.length];
    const coords = line.points.map((p) => `${x(p.mark).toFixed(1)},${y(p.score).toFixed(1)}`).join(" ");
    parts.push(`<polyline fill="none" stroke="${color}" stroke-width="1.8" ` +
      (dash ? `stroke-dasharray="${dash}" ` : "") +
      `points="${coords}" data-player="${escapeXml(line.playerId)}"/>`);
    const lastPoint = line.points[line.points.length - 1]!;
    const ly = y(lastPoint.score);
    parts.push(`<text x="${width - pad.right + 6}" y="${ly + 3}" class="legend" ` +
      `fill="${color}">${escapeXml(line.label)}${line.onPitch ? "" : " (off)"}</text>`);
  });

  parts.push("</svg>");
  return parts.join("");
}

export function escapeXml(value: string): string {
  return value.replace(/[<>&"']/g, (ch) =>
    ({ "<": "&lt;", ">": "&gt;", "&": "&amp;", '"': "&quot;", "'": "&apos;" })[ch]!,
  );
}
