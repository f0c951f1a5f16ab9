/** Payload types of the live-session HTTP API. */

export interface RosterEntryDoc {
  player_id: string;
  label: string;
  starting: boolean;
}

export type RostersDoc = Record<string, RosterEntryDoc[]>;

export interface PlayerSnapshotDoc {
  player_id: string;
  team_id: string;
  label: string;
  score: number;
  on_pitch: boolean;
}

export interface TeamSnapshotDoc {
  team_id: string;
  mean_score: number;
  players_fielded: number;
}

export interface SnapshotDoc {
  session_id: string;
  mark_minute: number;
  players: PlayerSnapshotDoc[];
  teams: TeamSnapshotDoc[];
}

export interface SessionMetaDoc {
  session_id: string;
  model_id: string;
  tick_minutes: number;
  rosters: RostersDoc;
  elapsed_minute: number;
  next_seq: number;
}

export interface EventBody {
  team_id: string;
  player_id: string;
  period: "1H" | "2H";
  clock_s: number;
  event: string;
  sub_event: string | null;
  tags: string[];
}

export interface FeedRow {
  seq: number;
  playerId: string;
  label: string;
  minute: number;
  name: string; // composite feature name, e.g. "Pass-High pass-assist"
}

export interface PadButton {
  label: string;
  event: string;
  sub_event: string | null;
  default_tags: string[];
}

export interface PadLayout {
  buttons: PadButton[];
  tags: string[];
}
