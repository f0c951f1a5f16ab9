"""Superior-team outcome predictor and its evaluation.

Team quality in a match is the unweighted mean prior rating of every player
who appeared (starters and used substitutes).  Two teams are "similar" when
their qualities differ by less than epsilon = 1e-4 in absolute value; a
prediction counts as a success when the superior team won, or when similar
teams drew.  Ratings are expected to come from seasons earlier than the
evaluated matches; matches with unrated players are skipped and counted.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .errors import MissingRating, NothingEvaluable, UnknownTeam
from .events import MatchRecord

EPSILON_DEFAULT = 1e-4
GAP_THRESHOLD_DEFAULT = 0.2


class Relation(Enum):
    A_SUPERIOR = "a_superior"
    B_SUPERIOR = "b_superior"
    SIMILAR = "similar"


@dataclass(frozen=True)
class TeamQuality:
    match_id: str
    team_id: str
    quality: float
    players_counted: int


@dataclass(frozen=True)
class PredictionRecord:
    match_id: str
    quality_home: float
    quality_away: float
    relation: Relation  # A = home side
    goal_diff: int  # home - away
    correct: bool


@dataclass(frozen=True)
class EvaluationResult:
    success_pct: float
    records: tuple[PredictionRecord, ...]
    skipped: int

    @property
    def evaluated(self) -> int:
        return len(self.records)


def _rating_value(entry) -> float:
    return float(getattr(entry, "rating", entry))


def team_quality(m: MatchRecord, team_id: str, ratings: Mapping[str, object]) -> TeamQuality:
    """Mean prior rating over the players who appeared for the team."""
    if team_id not in m.team_ids:
        raise UnknownTeam(f"team {team_id!r} does not play in match {m.match_id!r}")
    players = m.appearing_players(team_id)
    if not players:
        raise ValueError(f"team {team_id!r} fielded nobody in match {m.match_id!r}")
    total = 0.0
    for pid in players:
        if pid not in ratings:
            raise MissingRating(pid)
        total += _rating_value(ratings[pid])
    return TeamQuality(m.match_id, team_id, total / len(players), len(players))


def classify_pair(qa: float, qb: float, epsilon: float = EPSILON_DEFAULT) -> Relation:
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if abs(qa - qb) < epsilon:
        return Relation.SIMILAR
    return Relation.A_SUPERIOR if qa > qb else Relation.B_SUPERIOR


def evaluate_predictor(
    corpus: Sequence[MatchRecord],
    ratings: Mapping[str, object],
    epsilon: float = EPSILON_DEFAULT,
) -> EvaluationResult:
    """Score the predictor over a corpus; skips matches with unrated lineups.

    Success rule: the superior team won, or similar teams drew.
    """
    records: list[PredictionRecord] = []
    skipped = 0
    for m in corpus:
        try:
            qh = team_quality(m, m.home_team_id, ratings).quality
            qa = team_quality(m, m.away_team_id, ratings).quality
        except MissingRating:
            skipped += 1
            continue
        relation = classify_pair(qh, qa, epsilon)
        goal_diff = m.goals_home - m.goals_away
        if relation is Relation.SIMILAR:
            correct = goal_diff == 0
        elif relation is Relation.A_SUPERIOR:
            correct = goal_diff > 0
        else:
            correct = goal_diff < 0
        records.append(PredictionRecord(m.match_id, qh, qa, relation, goal_diff, correct))
    if not records:
        raise NothingEvaluable("no match could be evaluated against the ratings")
    success_pct = 100.0 * sum(r.correct for r in records) / len(records)
    return EvaluationResult(success_pct, tuple(records), skipped)


def upset_rate(records: Sequence[PredictionRecord],
               gap_threshold: float = GAP_THRESHOLD_DEFAULT) -> float | None:
    """Share of matches with a quality gap above the threshold where the
    inferior team won; None when no gap qualifies (a distinguished empty
    result, deliberately not 0)."""
    qualifying = [r for r in records if abs(r.quality_home - r.quality_away) > gap_threshold]
    if not qualifying:
        return None
    upsets = sum(
        1 for r in qualifying
        if (r.quality_home > r.quality_away and r.goal_diff < 0)
        or (r.quality_away > r.quality_home and r.goal_diff > 0)
    )
    return upsets / len(qualifying)


def similar_goal_spread(records: Sequence[PredictionRecord]) -> int:
    """Largest absolute goal difference among similar-quality matches (0 if none)."""
    return max((abs(r.goal_diff) for r in records if r.relation is Relation.SIMILAR), default=0)


def write_scatter_csv(records: Iterable[PredictionRecord], fh) -> None:
    """One row per evaluated match: quality_diff (home - away), goal_diff, success flag."""
    writer = csv.writer(fh)
    writer.writerow(["quality_diff", "goal_diff", "success_flag"])
    for r in records:
        writer.writerow([r.quality_home - r.quality_away, r.goal_diff, 1 if r.correct else 0])


def evaluation_summary(result: EvaluationResult,
                       gap_threshold: float = GAP_THRESHOLD_DEFAULT) -> dict:
    return {
        "success_pct": result.success_pct,
        "evaluated": result.evaluated,
        "skipped": result.skipped,
        "upset_rate": upset_rate(result.records, gap_threshold),
        "similar_goal_spread": similar_goal_spread(result.records),
    }
