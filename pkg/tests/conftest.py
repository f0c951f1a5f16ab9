from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make `oracles` importable

from pitchrank.events import Appearance, EventRecord, MatchRecord, parse_event_log

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_match() -> MatchRecord:
    with open(FIXTURES / "fixture_match.jsonl", encoding="utf-8") as fh:
        matches = parse_event_log(fh)
    assert len(matches) == 1
    return matches[0]


def make_event(player_id, event, sub=None, tags=(), team_id="HOME",
               match_id="M1", period="1H", clock_s=0) -> EventRecord:
    return EventRecord(match_id, team_id, player_id, period, clock_s,
                       event, sub, tuple(tags))


def make_match(match_id="M1", home="HOME", away="AWAY", goals=(1, 0),
               season_id="S1", lineups=None, events=()) -> MatchRecord:
    if lineups is None:
        lineups = {home: [("H1", 0, 90)], away: [("A1", 0, 90)]}
    built = {
        team: tuple(Appearance(p, on, off) for p, on, off in apps)
        for team, apps in lineups.items()
    }
    return MatchRecord(match_id, home, away, goals[0], goals[1], season_id,
                       built, tuple(events))
