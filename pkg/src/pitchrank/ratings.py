"""Player match scores, season ratings, and score distributions."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import NoMatches
from .events import MatchRecord
from .features import PerformanceVector, player_vector
from .learning import WeightModel


@dataclass(frozen=True)
class MatchScore:
    player_id: str
    match_id: str
    score: float


@dataclass(frozen=True)
class PlayerRating:
    player_id: str
    rating: float
    matches_counted: int
    season_ids: tuple[str, ...] = ()


def match_score(v: PerformanceVector | Mapping[str, int], model: WeightModel) -> float:
    """Dot product of scaled counts with the model weights (intercept excluded).

    Keys the model has never seen carry zero weight and are ignored; keys in
    the model's ablation set are absent from the weights and contribute 0.
    Iteration over sorted keys fixes the float reduction order so batch and
    incremental paths agree bit for bit.
    """
    entries = v.entries if isinstance(v, PerformanceVector) else v
    total = 0.0
    for key in sorted(entries):
        weight = model.weights.get(key)
        if weight is not None:
            total += weight * model.scaler.scale(key, entries[key])
    return total


def compute_match_scores(corpus: Iterable[MatchRecord], model: WeightModel) -> list[MatchScore]:
    """One score per appearing player per match, ordered by (player_id, match_id)."""
    scores = []
    for m in corpus:
        for team_id in m.team_ids:
            for pid in m.appearing_players(team_id):
                scores.append(MatchScore(pid, m.match_id, match_score(player_vector(m, pid), model)))
    scores.sort(key=lambda s: (s.player_id, s.match_id))
    return scores


def season_rating(scores: Sequence[MatchScore], season_ids: Iterable[str] = ()) -> PlayerRating:
    """Arithmetic mean of one player's match scores."""
    if not scores:
        raise NoMatches("cannot rate a player with zero match scores")
    players = {s.player_id for s in scores}
    if len(players) != 1:
        raise ValueError(f"scores mix players: {sorted(players)}")
    rating = sum(s.score for s in scores) / len(scores)
    return PlayerRating(scores[0].player_id, rating, len(scores), tuple(sorted(set(season_ids))))


def rate_players(corpus: Sequence[MatchRecord], model: WeightModel,
                 seasons: Iterable[str] | None = None) -> dict[str, PlayerRating]:
    """Season ratings for every player appearing in the (optionally filtered) corpus."""
    if seasons is not None:
        wanted = set(seasons)
        corpus = [m for m in corpus if m.season_id in wanted]
    seasons_by_player: dict[str, set[str]] = {}
    for m in corpus:
        for team_id in m.team_ids:
            for pid in m.appearing_players(team_id):
                seasons_by_player.setdefault(pid, set()).add(m.season_id)
    grouped: dict[str, list[MatchScore]] = {}
    for s in compute_match_scores(corpus, model):
        grouped.setdefault(s.player_id, []).append(s)
    return {
        pid: season_rating(player_scores, seasons_by_player[pid])
        for pid, player_scores in grouped.items()
    }


def score_distribution(scores: Sequence[float], bin_width: float) -> list[tuple[float, int]]:
    """Histogram over half-open bins [lo, lo + width) anchored at 0.

    Returns the contiguous bin range from the lowest to the highest occupied
    bin; counts always sum to len(scores).
    """
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    if not scores:
        return []
    indices = [math.floor(s / bin_width) for s in scores]
    lo, hi = min(indices), max(indices)
    counts = [0] * (hi - lo + 1)
    for i in indices:
        counts[i - lo] += 1
    return [(i * bin_width, counts[i - lo]) for i in range(lo, hi + 1)]


def write_ratings_jsonl(ratings: Mapping[str, PlayerRating], fh) -> None:
    for pid in sorted(ratings):
        r = ratings[pid]
        fh.write(json.dumps({
            "player_id": r.player_id,
            "rating": r.rating,
            "matches_counted": r.matches_counted,
            "season_ids": list(r.season_ids),
        }) + "\n")


def read_ratings_jsonl(fh) -> dict[str, PlayerRating]:
    ratings = {}
    for line in fh:
        line = line.strip()
        if not line:
            continue
        doc = json.loads(line)
        ratings[str(doc["player_id"])] = PlayerRating(
            str(doc["player_id"]), float(doc["rating"]),
            int(doc["matches_counted"]), tuple(doc.get("season_ids", ())),
        )
    return ratings


def write_histogram_csv(histogram: Sequence[tuple[float, int]], fh) -> None:
    writer = csv.writer(fh)
    writer.writerow(["bin_lo", "count"])
    for bin_lo, count in histogram:
        writer.writerow([bin_lo, count])
