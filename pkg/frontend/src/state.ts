/** Pure console state: chart lines, feed ordering, and the click queue.
 *
 * Every plotted value comes verbatim from a server snapshot; nothing in this
 * module computes or adjusts a score.
 */

import type { FeedRow, SnapshotDoc } from "./types.js";

export interface LinePoint {
  mark: number;
  score: number;
}

export interface PlayerLine {
  playerId: string;
  teamId: string;
  label: string;
  points: LinePoint[];
  onPitch: boolean; // at the latest mark
}

/** One line per fielded player; a substituted player's line freezes at the
 * last mark where the server reported them on pitch. */
export function buildChartLines(series: SnapshotDoc[]): PlayerLine[] {
  if (series.length === 0) return [];
  const first = series[0]!;
  const lines: PlayerLine[] = [];
  for (const p of first.players) {
    const points: LinePoint[] = [];
    let fielded = false;
    let frozen = false;
    let onPitch = false;
    for (const snap of series) {
      const current = snap.players.find((sp) => sp.player_id === p.player_id);
      if (current === undefined) continue;
      onPitch = current.on_pitch;
      if (frozen) continue;
      if (current.on_pitch) {
        fielded = true;
        points.push({ mark: snap.mark_minute, score: current.score });
      } else if (fielded) {
        frozen = true;
      }
    }
    if (points.length > 0) {
      lines.push({
        playerId: p.player_id,
        teamId: p.team_id,
        label: p.label,
        points,
        onPitch,
      });
    }
  }
  return lines;
}

/** Insert keeping ascending sequence order, whatever the arrival order. */
export function feedInsert(rows: readonly FeedRow[], row: FeedRow): FeedRow[] {
  const next = rows.filter((r) => r.seq !== row.seq);
  next.push(row);
  next.sort((a, b) => a.seq - b.seq);
  return next;
}

export function compositeName(event: string, subEvent: string | null, tags: string[]): string {
  const parts = [event];
  if (subEvent) parts.push(subEvent);
  for (const tag of tags) parts.push(tag);
  return parts.join("-");
}

/** Serializes posts: at most one in flight, later calls queue in FIFO order. */
export class PostQueue {
  private chain: Promise<void> = Promise.resolve();

  enqueue<T>(task: () => Promise<T>): Promise<T> {
    const run = this.chain.then(task);
    this.chain = run.then(
      () => undefined,
      () => undefined, // a failed post must not wedge the queue
    );
    return run;
  }
}

/** Minute shown in the feed for a logged event. */
export function eventMinute(period: "1H" | "2H", clockS: number): number {
  return (period === "2H" ? 45 : 0) + Math.floor(clockS / 60);
}

/** Growth check used by the poller: how many points each on-pitch player
 * gained between two chart states (the UI expects exactly one per tick). */
export function pointGrowth(before: PlayerLine[], after: PlayerLine[]): Map<string, number> {
  const counts = new Map<string, number>();
  const prior = new Map(before.map((l) => [l.playerId, l.points.length]));
  for (const line of after) {
    counts.set(line.playerId, line.points.length - (prior.get(line.playerId) ?? 0));
  }
  return counts;
}
