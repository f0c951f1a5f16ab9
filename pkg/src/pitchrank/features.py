"""Per-player and per-team performance vectors and outcome labels.

A performance vector is a sparse feature -> count map; zero counts are never
stored.  A team vector is the exact entry-wise sum of its players' vectors,
so integer decomposition holds by construction.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

from .errors import EmptyTrainingSet, UnknownTeam
from .events import MatchRecord, explode_features


class Outcome(Enum):
    WIN = 1
    DRAW = 0
    LOSS = -1


@dataclass(frozen=True)
class PerformanceVector:
    """Sparse feature counts for one player or team in one match."""

    entries: Mapping[str, int]
    match_id: str
    owner_id: str
    owner_kind: str  # "player" | "team"

    def __post_init__(self):
        object.__setattr__(self, "entries", dict(self.entries))

    def get(self, key: str, default: int = 0) -> int:
        return self.entries.get(key, default)

    def items(self):
        return self.entries.items()

    def __len__(self) -> int:
        return len(self.entries)


def player_vector(m: MatchRecord, player_id: str) -> PerformanceVector:
    """Counts of all exploded feature keys over the player's events in m."""
    from .errors import UnknownPlayer

    if not any(a.player_id == player_id for apps in m.lineups.values() for a in apps):
        raise UnknownPlayer(player_id, m.match_id)
    counts: Counter[str] = Counter()
    for e in m.events:
        if e.player_id == player_id:
            counts.update(explode_features(e))
    return PerformanceVector(dict(counts), m.match_id, player_id, "player")


def team_vector(m: MatchRecord, team_id: str) -> PerformanceVector:
    """Entry-wise sum of player vectors over all players who appeared."""
    if team_id not in m.team_ids:
        raise UnknownTeam(f"team {team_id!r} does not play in match {m.match_id!r}")
    counts: Counter[str] = Counter()
    for pid in m.appearing_players(team_id):
        counts.update(player_vector(m, pid).entries)
    return PerformanceVector(dict(counts), m.match_id, team_id, "team")


def outcome_label(m: MatchRecord, team_id: str) -> Outcome:
    if team_id == m.home_team_id:
        gf, ga = m.goals_home, m.goals_away
    elif team_id == m.away_team_id:
        gf, ga = m.goals_away, m.goals_home
    else:
        raise UnknownTeam(f"team {team_id!r} does not play in match {m.match_id!r}")
    if gf > ga:
        return Outcome.WIN
    if gf < ga:
        return Outcome.LOSS
    return Outcome.DRAW


def matches_ablation(key: str, ablation: Iterable[str]) -> bool:
    """Prefix rule: an ablation entry removes itself and its whole "-" subtree."""
    for a in ablation:
        if key == a or key.startswith(a + "-"):
            return True
    return False


def ablate(entries: Mapping[str, int], ablation: Iterable[str]) -> dict[str, int]:
    ablation = tuple(ablation)
    if not ablation:
        return dict(entries)
    return {k: c for k, c in entries.items() if not matches_ablation(k, ablation)}


def build_training_set(
    corpus: Iterable[MatchRecord],
    ablation: Iterable[str] = (),
) -> list[tuple[PerformanceVector, int]]:
    """One (team vector, +-1) row per non-draw team-in-match, in corpus order.

    Draws are excluded: hinge-loss labels must be +-1, and win/loss is the
    cleanest reading of the outcome classification.  Home row precedes away
    row for determinism.
    """
    ablation = tuple(ablation)
    rows: list[tuple[PerformanceVector, int]] = []
    for m in corpus:
        if m.goals_home == m.goals_away:
            continue
        for team_id in m.team_ids:
            v = team_vector(m, team_id)
            pruned = PerformanceVector(ablate(v.entries, ablation), v.match_id, v.owner_id, v.owner_kind)
            label = 1 if outcome_label(m, team_id) is Outcome.WIN else -1
            rows.append((pruned, label))
    if not rows:
        raise EmptyTrainingSet("no non-draw matches in the corpus")
    return rows


def dump_training_rows(rows: Iterable[tuple[PerformanceVector, int]]):
    """Debug dump: one JSON-able dict per row (sparse vector + label)."""
    for v, label in rows:
        yield {
            "match_id": v.match_id,
            "team_id": v.owner_id,
            "label": label,
            "vector": dict(sorted(v.entries.items())),
        }
