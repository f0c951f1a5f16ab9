/** Thin fetch client for the live-session API; fetch is injectable for tests. */

import type { EventBody, RostersDoc, SessionMetaDoc, SnapshotDoc } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    detail: string,
  ) {
    super(detail);
  }
}

/** Server surface the console consumes; ApiClient is the HTTP implementation
 * and tests substitute an in-memory fake. */
export interface Api {
  listModels(): Promise<{ models: string[] }>;
  createSession(rosters: RostersDoc, modelId: string, tickMinutes: number): Promise<{ session_id: string }>;
  sessionMeta(sessionId: string): Promise<SessionMetaDoc>;
  postEvent(sessionId: string, event: EventBody): Promise<{ seq: number }>;
  postSub(sessionId: string, minute: number, offPlayer: string, onPlayer: string): Promise<{ ok: boolean }>;
  series(sessionId: string): Promise<SnapshotDoc[]>;
  snapshot(sessionId: string, mark: number): Promise<SnapshotDoc>;
  exportLog(sessionId: string): Promise<string>;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient implements Api {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchImpl(this.baseUrl + path, init);
    if (!resp.ok) {
      let code = "http_error";
      let detail = `${resp.status}`;
      try {
        const body = (await resp.json()) as { error?: string; detail?: string };
        code = body.error ?? code;
        detail = body.detail ?? detail;
      } catch {
        /* non-JSON error body: keep the status text */
      }
      throw new ApiError(resp.status, code, detail);
    }
    return (await resp.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  listModels(): Promise<{ models: string[] }> {
    return this.request("/models");
  }

  createSession(rosters: RostersDoc, modelId: string, tickMinutes: number): Promise<{ session_id: string }> {
    return this.post("/sessions", { rosters, model_id: modelId, tick_minutes: tickMinutes });
  }

  sessionMeta(sessionId: string): Promise<SessionMetaDoc> {
    return this.request(`/sessions/${sessionId}`);
  }

  postEvent(sessionId: string, event: EventBody): Promise<{ seq: number }> {
    return this.post(`/sessions/${sessionId}/events`, event);
  }

  postSub(sessionId: string, minute: number, offPlayer: string, onPlayer: string): Promise<{ ok: boolean }> {
    return this.post(`/sessions/${sessionId}/subs`, {
      minute,
      off_player: offPlayer,
      on_player: onPlayer,
    });
  }

  series(sessionId: string): Promise<SnapshotDoc[]> {
    return this.request(`/sessions/${sessionId}/series`);
  }

  snapshot(sessionId: string, mark: number): Promise<SnapshotDoc> {
    return this.request(`/sessions/${sessionId}/snapshots?mark=${mark}`);
  }

  async exportLog(sessionId: string): Promise<string> {
    const resp = await this.fetchImpl(`${this.baseUrl}/sessions/${sessionId}/export`);
    if (!resp.ok) throw new ApiError(resp.status, "http_error", `${resp.status}`);
    return resp.text();
  }
}
