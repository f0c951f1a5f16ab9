"""Event taxonomy, canonical feature keys, and the JSON-lines event-log format.

An event log is UTF-8 JSON lines. Each line carries a ``kind`` discriminator:

    {"kind": "match", "match_id": ..., "home_team_id": ..., "away_team_id": ...,
     "goals_home": ..., "goals_away": ..., "season_id": ...}
    {"kind": "appearance", "match_id": ..., "team_id": ..., "player_id": ...,
     "on_minute": ..., "off_minute": ...}
    {"kind": "event", "match_id": ..., "team_id": ..., "player_id": ...,
     "period": "1H"|"2H", "clock_s": ..., "event": ..., "sub_event": ...|null,
     "tags": [...]}

All lines belonging to one match are contiguous and the "match" line comes
first.  Parsing rejects the whole file on the first invariant violation and
reports the offending line number.

Canonical feature keys join the non-empty components of
(event, sub_event, tag) with "-", e.g. "Pass-High pass-assist".  Because "-"
is the separator, component strings themselves must not contain "-"; the
parser enforces this so keys stay unambiguous.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Iterator

from .errors import ClockOutOfRange, InvalidEvent, MalformedLine, UnknownPlayer

PERIODS = ("1H", "2H")

# Lineup intervals are expressed in match minutes, capped at the regulation end.
MATCH_END_MINUTE = 90

# A period clock may run into stoppage time; 65 minutes is a generous ceiling.
MAX_PERIOD_SECONDS = 65 * 60


@dataclass(frozen=True)
class EventRecord:
    """One annotated on-ball event."""

    match_id: str
    team_id: str
    player_id: str
    period: str
    clock_s: int
    event_name: str
    sub_event_name: str | None = None
    tags: tuple[str, ...] = ()

    def minute(self) -> int:
        """Match minute of the event (2H clocks restart, hence the offset)."""
        return self.clock_s // 60 + (45 if self.period == "2H" else 0)


@dataclass(frozen=True)
class Appearance:
    player_id: str
    on_minute: int
    off_minute: int


@dataclass(frozen=True)
class MatchRecord:
    match_id: str
    home_team_id: str
    away_team_id: str
    goals_home: int
    goals_away: int
    season_id: str
    lineups: dict[str, tuple[Appearance, ...]] = field(default_factory=dict)
    events: tuple[EventRecord, ...] = ()

    @property
    def team_ids(self) -> tuple[str, str]:
        return (self.home_team_id, self.away_team_id)

    def appearing_players(self, team_id: str) -> list[str]:
        """Player ids with at least one appearance interval, in lineup order."""
        seen: list[str] = []
        for app in self.lineups.get(team_id, ()):
            if app.player_id not in seen:
                seen.append(app.player_id)
        return seen


def feature_key(event_name: str, sub_event_name: str | None = None,
                tag: str | None = None) -> str:
    """Canonical composite key: non-empty components joined with "-"."""
    if not event_name:
        raise InvalidEvent("event name must be non-empty")
    parts = [event_name]
    if sub_event_name:
        parts.append(sub_event_name)
    if tag:
        parts.append(tag)
    return "-".join(parts)


def explode_features(e: EventRecord) -> list[str]:
    """All feature keys populated by one event.

    The tag-less base key comes first (so plain event counts are always
    representable), then one key per tag in input order.
    """
    keys = [feature_key(e.event_name, e.sub_event_name)]
    for tag in e.tags:
        keys.append(feature_key(e.event_name, e.sub_event_name, tag))
    return keys


def load_starter_vocabulary() -> dict:
    """Event/sub-event/tag names shipped with the package.

    The feature vocabulary is open: any triple seen in data defines a feature.
    This file only seeds demos, the synthetic generator, and UI layouts.
    """
    text = resources.files("pitchrank.data").joinpath("starter_vocabulary.json").read_text("utf-8")
    return json.loads(text)


# --------------------------------------------------------------------------
# Parsing
# --------------------------------------------------------------------------

def _require(obj: dict, key: str, line_no: int):
    if key not in obj:
        raise MalformedLine(line_no, f"missing field {key!r}")
    return obj[key]


def _id_str(value, line_no: int, what: str) -> str:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise MalformedLine(line_no, f"{what} must be a string or integer id")
    s = str(value)
    if not s:
        raise MalformedLine(line_no, f"{what} must be non-empty")
    return s


def _int_field(value, line_no: int, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedLine(line_no, f"{what} must be an integer")
    return value


def _component(value, line_no: int, what: str, optional: bool = False) -> str | None:
    if value is None and optional:
        return None
    if not isinstance(value, str) or not value:
        raise MalformedLine(line_no, f"{what} must be a non-empty string")
    if "-" in value:
        raise MalformedLine(line_no, f"{what} {value!r} must not contain '-'")
    return value


def _parse_event_line(obj: dict, line_no: int) -> EventRecord:
    period = _require(obj, "period", line_no)
    if period not in PERIODS:
        raise MalformedLine(line_no, f"period must be one of {PERIODS}, got {period!r}")
    clock_s = _int_field(_require(obj, "clock_s", line_no), line_no, "clock_s")
    if clock_s < 0 or clock_s > MAX_PERIOD_SECONDS:
        raise ClockOutOfRange(clock_s, line_no)
    event = _component(_require(obj, "event", line_no), line_no, "event")
    sub_event = _component(obj.get("sub_event"), line_no, "sub_event", optional=True)
    raw_tags = _require(obj, "tags", line_no)
    if not isinstance(raw_tags, list):
        raise MalformedLine(line_no, "tags must be a list")
    tags: list[str] = []
    for t in raw_tags:
        t = _component(t, line_no, "tag")
        if t in tags:
            raise MalformedLine(line_no, f"duplicate tag {t!r}")
        tags.append(t)
    return EventRecord(
        match_id=_id_str(_require(obj, "match_id", line_no), line_no, "match_id"),
        team_id=_id_str(_require(obj, "team_id", line_no), line_no, "team_id"),
        player_id=_id_str(_require(obj, "player_id", line_no), line_no, "player_id"),
        period=period,
        clock_s=clock_s,
        event_name=event,
        sub_event_name=sub_event,
        tags=tuple(tags),
    )


class _MatchBuilder:
    def __init__(self, obj: dict, line_no: int):
        self.line_no = line_no
        self.match_id = _id_str(_require(obj, "match_id", line_no), line_no, "match_id")
        self.home = _id_str(_require(obj, "home_team_id", line_no), line_no, "home_team_id")
        self.away = _id_str(_require(obj, "away_team_id", line_no), line_no, "away_team_id")
        if self.home == self.away:
            raise MalformedLine(line_no, "home and away team ids must differ")
        self.goals_home = _int_field(_require(obj, "goals_home", line_no), line_no, "goals_home")
        self.goals_away = _int_field(_require(obj, "goals_away", line_no), line_no, "goals_away")
        if self.goals_home < 0 or self.goals_away < 0:
            raise MalformedLine(line_no, "goal counts must be >= 0")
        self.season_id = _id_str(_require(obj, "season_id", line_no), line_no, "season_id")
        self.lineups: dict[str, list[Appearance]] = {self.home: [], self.away: []}
        self.events: list[tuple[int, EventRecord]] = []

    def add_appearance(self, obj: dict, line_no: int) -> None:
        team_id = _id_str(_require(obj, "team_id", line_no), line_no, "team_id")
        if team_id not in self.lineups:
            raise MalformedLine(line_no, f"team {team_id!r} does not play in match {self.match_id!r}")
        player_id = _id_str(_require(obj, "player_id", line_no), line_no, "player_id")
        on = _int_field(_require(obj, "on_minute", line_no), line_no, "on_minute")
        off = _int_field(_require(obj, "off_minute", line_no), line_no, "off_minute")
        if not (0 <= on < off <= MATCH_END_MINUTE):
            raise MalformedLine(
                line_no, f"appearance interval [{on}, {off}) must satisfy 0 <= on < off <= {MATCH_END_MINUTE}"
            )
        for prev in self.lineups[team_id]:
            if prev.player_id == player_id and on < prev.off_minute and prev.on_minute < off:
                raise MalformedLine(line_no, f"overlapping appearance intervals for player {player_id!r}")
        self.lineups[team_id].append(Appearance(player_id, on, off))

    def add_event(self, obj: dict, line_no: int) -> None:
        rec = _parse_event_line(obj, line_no)
        if rec.team_id not in self.lineups:
            raise MalformedLine(line_no, f"team {rec.team_id!r} does not play in match {self.match_id!r}")
        self.events.append((line_no, rec))

    def build(self) -> MatchRecord:
        players_by_team = {t: {a.player_id for a in apps} for t, apps in self.lineups.items()}
        for line_no, rec in self.events:
            if rec.player_id not in players_by_team[rec.team_id]:
                raise UnknownPlayer(rec.player_id, self.match_id, line_no)
        return MatchRecord(
            match_id=self.match_id,
            home_team_id=self.home,
            away_team_id=self.away,
            goals_home=self.goals_home,
            goals_away=self.goals_away,
            season_id=self.season_id,
            lineups={t: tuple(apps) for t, apps in self.lineups.items()},
            events=tuple(rec for _, rec in self.events),
        )


def parse_event_log(lines: Iterable[str]) -> list[MatchRecord]:
    """Parse and validate a full event log; raises on the first bad line."""
    matches: list[MatchRecord] = []
    seen_ids: set[str] = set()
    current: _MatchBuilder | None = None

    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedLine(line_no, f"invalid JSON ({exc.msg})") from exc
        if not isinstance(obj, dict):
            raise MalformedLine(line_no, "line must be a JSON object")
        kind = obj.get("kind")
        if kind == "match":
            if current is not None:
                matches.append(current.build())
            current = _MatchBuilder(obj, line_no)
            if current.match_id in seen_ids:
                raise MalformedLine(line_no, f"duplicate match id {current.match_id!r}")
            seen_ids.add(current.match_id)
        elif kind == "appearance" or kind == "event":
            if current is None:
                raise MalformedLine(line_no, f"{kind} line before any match line")
            mid = _id_str(_require(obj, "match_id", line_no), line_no, "match_id")
            if mid != current.match_id:
                raise MalformedLine(
                    line_no, f"match_id {mid!r} breaks the contiguous block of {current.match_id!r}"
                )
            if kind == "appearance":
                current.add_appearance(obj, line_no)
            else:
                current.add_event(obj, line_no)
        else:
            raise MalformedLine(line_no, f"unknown line kind {kind!r}")

    if current is not None:
        matches.append(current.build())
    return matches


def serialize_event_log(matches: Iterable[MatchRecord]) -> Iterator[str]:
    """Inverse of parse_event_log: yields one JSON line per record."""
    for m in matches:
        yield json.dumps({
            "kind": "match", "match_id": m.match_id, "home_team_id": m.home_team_id,
            "away_team_id": m.away_team_id, "goals_home": m.goals_home,
            "goals_away": m.goals_away, "season_id": m.season_id,
        })
        for team_id in m.team_ids:
            for a in m.lineups.get(team_id, ()):
                yield json.dumps({
                    "kind": "appearance", "match_id": m.match_id, "team_id": team_id,
                    "player_id": a.player_id, "on_minute": a.on_minute,
                    "off_minute": a.off_minute,
                })
        for e in m.events:
            yield json.dumps(event_to_json(e))


def event_from_json(obj: dict, line_no: int = 0) -> EventRecord:
    """Validate one event object (the "event" line schema, "kind" optional)."""
    if not isinstance(obj, dict):
        raise MalformedLine(line_no, "event must be a JSON object")
    return _parse_event_line(obj, line_no)


def event_to_json(e: EventRecord) -> dict:
    return {
        "kind": "event", "match_id": e.match_id, "team_id": e.team_id,
        "player_id": e.player_id, "period": e.period, "clock_s": e.clock_s,
        "event": e.event_name, "sub_event": e.sub_event_name, "tags": list(e.tags),
    }
