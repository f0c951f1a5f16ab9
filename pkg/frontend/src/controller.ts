/** Headless console controller: session lifecycle, event logging, polling.
 *
 * main.ts binds this to the DOM; tests drive it with a mocked ApiClient.
 * The controller never computes scores; chart state mirrors /series.
 */

import { ApiError, type Api } from "./api.js";
import {
  buildChartLines,
  compositeName,
  eventMinute,
  feedInsert,
  PostQueue,
  type PlayerLine,
} from "./state.js";
import type { ChartMarker } from "./chart.js";
import type { EventBody, FeedRow, RostersDoc, SnapshotDoc } from "./types.js";

export interface ConsoleState {
  sessionId: string | null;
  rosters: RostersDoc;
  tickMinutes: number;
  feed: FeedRow[];
  lines: PlayerLine[];
  markers: ChartMarker[];
  banner: string | null; // connectivity / rejection message, null when healthy
}

export class ConsoleController {
  readonly state: ConsoleState = {
    sessionId: null,
    rosters: {},
    tickMinutes: 5,
    feed: [],
    lines: [],
    markers: [],
    banner: null,
  };

  private queue = new PostQueue();
  private listeners: Array<() => void> = [];

  constructor(private readonly api: Api) {}

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  async createSession(rosters: RostersDoc, modelId: string, tickMinutes: number): Promise<void> {
    const { session_id } = await this.api.createSession(rosters, modelId, tickMinutes);
    this.state.sessionId = session_id;
    this.state.rosters = rosters;
    this.state.tickMinutes = tickMinutes;
    this.state.feed = [];
    this.state.markers = [];
    this.state.banner = null;
    await this.refreshSeries();
  }

  /** Rebuild the full view from the server alone (page reload path). */
  async resume(sessionId: string): Promise<void> {
    const meta = await this.api.sessionMeta(sessionId);
    this.state.sessionId = meta.session_id;
    this.state.rosters = meta.rosters;
    this.state.tickMinutes = meta.tick_minutes;
    const log = await this.api.exportLog(sessionId);
    this.state.feed = [];
    this.state.markers = [];
    for (const raw of log.split("\n")) {
      if (!raw.trim()) continue;
      const doc = JSON.parse(raw) as Record<string, unknown>;
      if (doc.kind === "event") {
        const body = doc as unknown as EventBody & { seq: number; player_id: string };
        this.recordFeedRow(body.seq, body);
        if (body.event === "Goal") {
          this.state.markers.push({ minute: eventMinute(body.period, body.clock_s),
                                    kind: "goal", teamId: body.team_id });
        }
      } else if (doc.kind === "sub") {
        this.state.markers.push({ minute: doc.minute as number, kind: "sub",
                                  teamId: doc.team_id as string });
      }
    }
    this.state.banner = null;
    await this.refreshSeries();
  }

  private labelOf(playerId: string): string {
    for (const entries of Object.values(this.state.rosters)) {
      const hit = entries.find((e) => e.player_id === playerId);
      if (hit) return hit.label;
    }
    return playerId;
  }

  private recordFeedRow(seq: number, body: EventBody & { player_id: string }): void {
    this.state.feed = feedInsert(this.state.feed, {
      seq,
      playerId: body.player_id,
      label: this.labelOf(body.player_id),
      minute: eventMinute(body.period, body.clock_s),
      name: compositeName(body.event, body.sub_event, body.tags),
    });
  }

  /** Queued so rapid clicks post one at a time and keep server order. */
  logEvent(body: EventBody & { player_id: string }): Promise<number> {
    return this.queue.enqueue(async () => {
      const sessionId = this.requireSession();
      try {
        const { seq } = await this.api.postEvent(sessionId, body);
        this.recordFeedRow(seq, body);
        if (body.event === "Goal") {
          this.state.markers.push({ minute: eventMinute(body.period, body.clock_s),
                                    kind: "goal", teamId: body.team_id });
        }
        this.state.banner = null;
        this.emit();
        return seq;
      } catch (err) {
        this.state.banner = describeError(err);
        this.emit();
        throw err;
      }
    });
  }

  substitute(minute: number, offPlayer: string, onPlayer: string, teamId: string): Promise<void> {
    return this.queue.enqueue(async () => {
      const sessionId = this.requireSession();
      try {
        await this.api.postSub(sessionId, minute, offPlayer, onPlayer);
        this.state.markers.push({ minute, kind: "sub", teamId });
        this.state.banner = null;
        this.emit();
      } catch (err) {
        this.state.banner = describeError(err);
        this.emit();
        throw err;
      }
    });
  }

  async refreshSeries(): Promise<SnapshotDoc[]> {
    const sessionId = this.requireSession();
    try {
      const series = await this.api.series(sessionId);
      this.state.lines = buildChartLines(series);
      this.state.banner = null;
      this.emit();
      return series;
    } catch (err) {
      this.state.banner = describeError(err);
      this.emit();
      throw err;
    }
  }

  exportLog(): Promise<string> {
    return this.api.exportLog(this.requireSession());
  }

  private requireSession(): string {
    if (this.state.sessionId === null) throw new Error("no live session");
    return this.state.sessionId;
  }
}

export function describeError(err: unknown): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`;
  if (err instanceof Error) return `server unreachable: ${err.message}`;
  return "server unreachable";
}
