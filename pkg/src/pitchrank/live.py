"""Live match sessions: rolling cumulative scores over a durable event log.

A session is an append-only sequence of numbered commands (events and
substitutions) over two rosters, scored with a frozen weight model.  The log
file is the single source of truth: a header line holds the rosters, the
tick length, and the full model document, then every command follows as one
numbered JSON line.  Replaying a log therefore rebuilds the exact session,
including bit-identical score series, with no external lookups.

Snapshots are recomputed from scratch at every mark from the integer event
counts, so they are pure functions of the command prefix and agree exactly
with batch scoring of the same events.

Cutoff rule: an event belongs to match minute 45*(2H) + min(clock_s//60 + 1, 45)
(first-minute events are minute 1, stoppage time folds into the period's
final tick) and a snapshot at mark M covers events with minute <= M, so the
mark-0 snapshot is always all zeros.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .errors import (
    AlreadyUsed,
    ClockRegression,
    CorruptLog,
    DuplicatePlayer,
    InvalidEvent,
    MalformedLine,
    NotOnPitch,
    PlayerOffPitch,
    UnknownModel,
    UnknownPlayer,
    UnknownSession,
)
from .events import EventRecord, Appearance, MatchRecord, event_to_json, explode_features
from .learning import WeightModel, model_from_json_dict, model_to_json_dict
from .ratings import match_score

LOG_FORMAT_VERSION = 1
_PERIOD_INDEX = {"1H": 0, "2H": 1}


def cutoff_minute(e: EventRecord) -> int:
    """Match minute used for tick cutoffs (1-based, clamped to period end)."""
    return 45 * _PERIOD_INDEX[e.period] + min(e.clock_s // 60 + 1, 45)


@dataclass(frozen=True)
class RosterEntry:
    player_id: str
    label: str
    starting: bool


@dataclass(frozen=True)
class Substitution:
    minute: int
    off_player: str
    on_player: str
    team_id: str


@dataclass(frozen=True)
class PlayerSnapshot:
    player_id: str
    team_id: str
    label: str
    score: float
    on_pitch: bool


@dataclass(frozen=True)
class TeamSnapshot:
    team_id: str
    mean_score: float
    players_fielded: int


@dataclass(frozen=True)
class SessionSnapshot:
    session_id: str
    mark_minute: int
    players: tuple[PlayerSnapshot, ...]
    teams: tuple[TeamSnapshot, ...]

    def to_json_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "mark_minute": self.mark_minute,
            "players": [vars(p) for p in self.players],
            "teams": [vars(t) for t in self.teams],
        }


class LiveSession:
    """In-memory session state machine; persistence lives in SessionStore."""

    def __init__(self, session_id: str, model_id: str, model: WeightModel,
                 rosters: dict[str, tuple[RosterEntry, ...]], tick_minutes: int = 5):
        if len(rosters) != 2 or any(not entries for entries in rosters.values()):
            raise InvalidEvent("a session needs exactly two non-empty rosters")
        if not isinstance(tick_minutes, int) or tick_minutes <= 0:
            raise InvalidEvent("tick_minutes must be a positive integer")
        seen: set[str] = set()
        for entries in rosters.values():
            for entry in entries:
                if entry.player_id in seen:
                    raise DuplicatePlayer(f"player {entry.player_id!r} listed twice")
                seen.add(entry.player_id)
        self.session_id = session_id
        self.model_id = model_id
        self.model = model
        self.rosters = {team: tuple(entries) for team, entries in rosters.items()}
        self.tick_minutes = tick_minutes
        self.events: list[tuple[int, EventRecord]] = []
        self.subs: list[tuple[int, Substitution]] = []
        self.clock: tuple[int, int] = (0, 0)  # (period index, clock_s)
        self.next_seq = 1
        self._team_of = {e.player_id: team for team, entries in rosters.items()
                         for e in entries}
        self._entry_of = {e.player_id: e for entries in rosters.values()
                          for e in entries}
        self._on_pitch = {e.player_id for entries in rosters.values()
                          for e in entries if e.starting}
        self._used = set(self._on_pitch)

    # -- command application ------------------------------------------------

    def apply_event(self, e: EventRecord) -> int:
        team = self._team_of.get(e.player_id)
        if team is None or team != e.team_id:
            raise UnknownPlayer(e.player_id, self.session_id)
        if e.player_id not in self._on_pitch:
            raise PlayerOffPitch(f"player {e.player_id!r} is not on the pitch")
        when = (_PERIOD_INDEX[e.period], e.clock_s)
        if when < self.clock:
            raise ClockRegression(
                f"event at {e.period} {e.clock_s}s is before the session clock")
        seq = self.next_seq
        self.events.append((seq, e))
        self.clock = when
        self.next_seq += 1
        return seq

    def apply_substitution(self, minute: int, off_player: str, on_player: str) -> int:
        if not isinstance(minute, int) or not (1 <= minute <= 90):
            raise InvalidEvent("substitution minute must be in 1..90")
        if off_player not in self._on_pitch:
            raise NotOnPitch(f"player {off_player!r} is not on the pitch")
        team = self._team_of.get(on_player)
        if team is None or team != self._team_of[off_player]:
            raise UnknownPlayer(on_player, self.session_id)
        if on_player in self._used:
            raise AlreadyUsed(f"player {on_player!r} was already fielded")
        seq = self.next_seq
        self.subs.append((seq, Substitution(minute, off_player, on_player, team)))
        self._on_pitch.discard(off_player)
        self._on_pitch.add(on_player)
        self._used.add(on_player)
        self.next_seq += 1
        return seq

    # -- derived views --------------------------------------------------------

    def elapsed_minute(self) -> int:
        period, clock_s = self.clock
        return 45 * period + min(clock_s // 60, 45)

    def _entered_minute(self, player_id: str, mark: int) -> int | None:
        """Minute the player came on, considering subs up to `mark`; None if
        not fielded by then."""
        entry = self._entry_of[player_id]
        if entry.starting:
            return 0
        for _, sub in self.subs:
            if sub.on_player == player_id and sub.minute <= mark:
                return sub.minute
        return None

    def _off_minute(self, player_id: str, mark: int) -> int | None:
        for _, sub in self.subs:
            if sub.off_player == player_id and sub.minute <= mark:
                return sub.minute
        return None

    def snapshot(self, mark_minute: int) -> SessionSnapshot:
        if mark_minute < 0:
            raise InvalidEvent("mark_minute must be >= 0")
        counts: dict[str, Counter] = {}
        for _, e in self.events:
            if cutoff_minute(e) <= mark_minute:
                counts.setdefault(e.player_id, Counter()).update(explode_features(e))
        players = []
        fielded: dict[str, list[float]] = {team: [] for team in self.rosters}
        for team, entries in self.rosters.items():
            for entry in entries:
                score = match_score(dict(counts.get(entry.player_id, ())), self.model)
                entered = self._entered_minute(entry.player_id, mark_minute)
                off = self._off_minute(entry.player_id, mark_minute)
                on_pitch = entered is not None and off is None
                players.append(PlayerSnapshot(entry.player_id, team, entry.label,
                                              score, on_pitch))
                if entered is not None:
                    fielded[team].append(score)
        teams = tuple(
            TeamSnapshot(team, sum(scores) / len(scores) if scores else 0.0, len(scores))
            for team, scores in fielded.items()
        )
        return SessionSnapshot(self.session_id, mark_minute, tuple(players), teams)

    def series(self) -> list[SessionSnapshot]:
        last = self.elapsed_minute()
        marks = range(0, last + 1, self.tick_minutes)
        return [self.snapshot(mark) for mark in marks]

    def as_match_record(self, home_team_id: str | None = None) -> MatchRecord:
        """Batch view of the session so far (goals read off the Goal events)."""
        teams = list(self.rosters)
        home = home_team_id if home_team_id is not None else teams[0]
        away = teams[1] if home == teams[0] else teams[0]
        goals = {team: 0 for team in teams}
        for _, e in self.events:
            if e.event_name == "Goal":
                goals[e.team_id] += 1
        lineups = {}
        for team, entries in self.rosters.items():
            apps = []
            for entry in entries:
                entered = self._entered_minute(entry.player_id, 90)
                if entered is None:
                    continue
                off = self._off_minute(entry.player_id, 90)
                apps.append(Appearance(entry.player_id, entered, off if off is not None else 90))
            lineups[team] = tuple(apps)
        return MatchRecord(self.session_id, home, away, goals[home], goals[away],
                           "live", lineups, tuple(e for _, e in self.events))


# --------------------------------------------------------------------------
# Log lines
# --------------------------------------------------------------------------

def header_line(session: LiveSession) -> str:
    return json.dumps({
        "kind": "header",
        "format_version": LOG_FORMAT_VERSION,
        "session_id": session.session_id,
        "model_id": session.model_id,
        "tick_minutes": session.tick_minutes,
        "rosters": {team: [vars(e) for e in entries]
                    for team, entries in session.rosters.items()},
        "model": model_to_json_dict(session.model),
    })


def event_line(seq: int, e: EventRecord) -> str:
    doc = event_to_json(e)
    doc["kind"] = "event"
    doc["seq"] = seq
    return json.dumps(doc)


def sub_line(seq: int, sub: Substitution) -> str:
    return json.dumps({"kind": "sub", "seq": seq, "minute": sub.minute,
                       "off_player": sub.off_player, "on_player": sub.on_player,
                       "team_id": sub.team_id})


def rosters_from_json(doc: dict) -> dict[str, tuple[RosterEntry, ...]]:
    rosters = {}
    for team, entries in doc.items():
        parsed = []
        for e in entries:
            if not isinstance(e, dict) or "player_id" not in e:
                raise InvalidEvent("roster entries need a player_id")
            parsed.append(RosterEntry(str(e["player_id"]),
                                      str(e.get("label", e["player_id"])),
                                      bool(e.get("starting", True))))
        rosters[str(team)] = tuple(parsed)
    return rosters


def replay(lines: Iterable[str]) -> LiveSession:
    """Rebuild a session from its log; the result is bit-identical to the
    session that wrote it (the header embeds the model)."""
    from .events import event_from_json

    it = iter(lines)
    try:
        first = next(it)
    except StopIteration:
        raise CorruptLog(0, "empty log") from None
    try:
        head = json.loads(first)
    except json.JSONDecodeError as exc:
        raise CorruptLog(0, "unreadable header") from exc
    if not isinstance(head, dict) or head.get("kind") != "header":
        raise CorruptLog(0, "first line is not a header")
    try:
        session = LiveSession(
            session_id=str(head["session_id"]),
            model_id=str(head.get("model_id", "embedded")),
            model=model_from_json_dict(head["model"]),
            rosters=rosters_from_json(head["rosters"]),
            tick_minutes=int(head.get("tick_minutes", 5)),
        )
    except KeyError as exc:
        raise CorruptLog(0, f"header misses {exc}") from exc

    expected = 1
    for raw in it:
        raw = raw.strip()
        if not raw:
            continue
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise CorruptLog(expected, "unreadable line") from exc
        if doc.get("seq") != expected:
            raise CorruptLog(expected, f"found sequence {doc.get('seq')!r}")
        kind = doc.get("kind")
        if kind == "event":
            session.apply_event(event_from_json(doc, expected))
        elif kind == "sub":
            session.apply_substitution(int(doc["minute"]), str(doc["off_player"]),
                                       str(doc["on_player"]))
        else:
            raise CorruptLog(expected, f"unknown kind {kind!r}")
        expected += 1
    return session


def replay_file(path) -> LiveSession:
    with open(path, encoding="utf-8") as fh:
        return replay(fh)


# --------------------------------------------------------------------------
# Durable store
# --------------------------------------------------------------------------

class SessionStore:
    """Directory of session logs with per-session single-writer locking.

    Every accepted command is appended to the session's log before the call
    returns; with fsync_on_ack the line is also flushed to disk, so an
    acknowledged event survives a crash and replays identically.
    """

    def __init__(self, directory, models: dict[str, WeightModel],
                 fsync_on_ack: bool = True):
        self.directory = os.fspath(directory)
        os.makedirs(self.directory, exist_ok=True)
        self.models = dict(models)
        self.fsync_on_ack = fsync_on_ack
        self._sessions: dict[str, LiveSession] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def _path(self, session_id: str) -> str:
        return os.path.join(self.directory, f"{session_id}.log")

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def _append(self, session_id: str, line: str) -> None:
        with open(self._path(session_id), "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
            fh.flush()
            if self.fsync_on_ack:
                os.fsync(fh.fileno())

    def create_session(self, rosters_doc: dict, model_id: str,
                       tick_minutes: int = 5) -> LiveSession:
        if model_id not in self.models:
            raise UnknownModel(f"no model registered under {model_id!r}")
        session_id = uuid.uuid4().hex[:12]
        session = LiveSession(session_id, model_id, self.models[model_id],
                              rosters_from_json(rosters_doc), tick_minutes)
        with self._lock_for(session_id):
            self._append(session_id, header_line(session))
            self._sessions[session_id] = session
        return session

    def get(self, session_id: str) -> LiveSession:
        with self._registry_lock:
            session = self._sessions.get(session_id)
        if session is not None:
            return session
        path = self._path(session_id)
        if not os.path.exists(path):
            raise UnknownSession(f"no session {session_id!r}")
        with self._lock_for(session_id):
            if session_id not in self._sessions:
                self._sessions[session_id] = replay_file(path)
            return self._sessions[session_id]

    def append_event(self, session_id: str, e: EventRecord) -> int:
        session = self.get(session_id)
        with self._lock_for(session_id):
            seq = session.apply_event(e)
            self._append(session_id, event_line(seq, e))
            return seq

    def record_substitution(self, session_id: str, minute: int,
                            off_player: str, on_player: str) -> int:
        session = self.get(session_id)
        with self._lock_for(session_id):
            seq = session.apply_substitution(minute, off_player, on_player)
            sub = session.subs[-1][1]
            self._append(session_id, sub_line(seq, sub))
            return seq

    def snapshot(self, session_id: str, mark_minute: int) -> SessionSnapshot:
        session = self.get(session_id)
        with self._lock_for(session_id):
            return session.snapshot(mark_minute)

    def series(self, session_id: str) -> list[SessionSnapshot]:
        session = self.get(session_id)
        with self._lock_for(session_id):
            return session.series()

    def export_text(self, session_id: str) -> str:
        self.get(session_id)  # 404 on unknown ids
        with self._lock_for(session_id):
            with open(self._path(session_id), encoding="utf-8") as fh:
                return fh.read()
