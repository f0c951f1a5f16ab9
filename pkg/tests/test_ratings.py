import math

import pytest
from hypothesis import given, strategies as st

from pitchrank.errors import NoMatches
from pitchrank.features import player_vector, team_vector
from pitchrank.learning import FeatureScaler, WeightModel, load_packaged_model
from pitchrank.ratings import (
    MatchScore,
    compute_match_scores,
    match_score,
    rate_players,
    score_distribution,
    season_rating,
)

from oracles import dot_score_oracle, mean_oracle

IDENTITY = FeatureScaler({})


def _model(weights, scaler=IDENTITY):
    return WeightModel(weights, 0.0, scaler)


def test_empty_vector_scores_zero():
    assert match_score({}, _model({"f": 0.5})) == 0.0


def test_single_term_identity_scaler():
    assert match_score({"f": 2}, _model({"f": 0.5})) == 1.0


def test_unknown_keys_ignored():
    assert match_score({"g": 7}, _model({"f": 0.5})) == 0.0


def test_fixture_score_matches_dot_oracle(fixture_match):
    model = load_packaged_model("table1_weights")
    for pid in ("H1", "H2", "A1"):
        v = player_vector(fixture_match, pid)
        expected = dot_score_oracle(dict(v.entries), dict(model.weights),
                                    dict(model.scaler.ranges))
        assert match_score(v, model) == pytest.approx(expected, abs=0.0)


def test_additivity_under_identity_scaling():
    model = _model({"f": 0.25, "g": -0.5})
    a, b = {"f": 2}, {"f": 1, "g": 3}
    combined = {"f": 3, "g": 3}
    assert match_score(combined, model) == pytest.approx(
        match_score(a, model) + match_score(b, model), rel=1e-12)


def test_team_consistency_identity_scaling(fixture_match):
    weights = {"Pass-Simple pass": 0.1, "Pass-Simple pass-accurate": 0.2,
               "Goal": 0.3, "Goal-Scored": 0.5, "Foul": -0.2,
               "Duel-Air duel-not accurate": -0.1}
    model = _model(weights)
    for team in fixture_match.team_ids:
        total = sum(match_score(player_vector(fixture_match, pid), model)
                    for pid in fixture_match.appearing_players(team))
        assert match_score(team_vector(fixture_match, team), model) == \
            pytest.approx(total, abs=1e-12)


def test_ranking_invariant_under_weight_scaling(fixture_match):
    model = load_packaged_model("table1_weights")
    players = [p for t in fixture_match.team_ids
               for p in fixture_match.appearing_players(t)]
    base = sorted(players, key=lambda p: match_score(player_vector(fixture_match, p), model))
    for lam in (0.5, 2.0, 1024.0):  # powers of two keep the scaling exact
        scaled = _model({k: lam * w for k, w in model.weights.items()}, model.scaler)
        order = sorted(players, key=lambda p: match_score(player_vector(fixture_match, p), scaled))
        assert order == base


# --- season ratings ----------------------------------------------------------

def test_season_rating_single_score():
    r = season_rating([MatchScore("P", "M1", 0.2)])
    assert r.rating == 0.2 and r.matches_counted == 1


def test_season_rating_mean():
    scores = [MatchScore("P", "M1", 0.1), MatchScore("P", "M2", 0.3)]
    assert season_rating(scores).rating == pytest.approx(0.2)


def test_season_rating_oracle_100_scores():
    import random
    rng = random.Random(31)
    scores = [MatchScore("P", f"M{i}", rng.uniform(-0.5, 0.5)) for i in range(100)]
    r = season_rating(scores)
    assert r.rating == pytest.approx(mean_oracle(s.score for s in scores), abs=1e-12)
    assert min(s.score for s in scores) <= r.rating <= max(s.score for s in scores)


def test_season_rating_requires_scores():
    with pytest.raises(NoMatches):
        season_rating([])


def test_season_rating_rejects_mixed_players():
    with pytest.raises(ValueError):
        season_rating([MatchScore("P", "M1", 0.1), MatchScore("Q", "M2", 0.2)])


def test_rate_players_orders_and_seasons(fixture_match):
    model = load_packaged_model("table1_weights")
    ratings = rate_players([fixture_match], model)
    assert set(ratings) == {"H1", "H2", "H3", "H4", "H5", "A1", "A2", "A3", "A4"}
    assert ratings["H1"].season_ids == ("S1",)
    assert ratings["H1"].matches_counted == 1


def test_compute_match_scores_is_sorted(fixture_match):
    model = load_packaged_model("table1_weights")
    scores = compute_match_scores([fixture_match], model)
    keys = [(s.player_id, s.match_id) for s in scores]
    assert keys == sorted(keys)


# --- histogram ---------------------------------------------------------------

def test_histogram_empty():
    assert score_distribution([], 0.1) == []


def test_histogram_single_bin():
    assert score_distribution([0.05, 0.05], 0.1) == [(0.0, 2)]


def test_histogram_bins_anchored_at_zero():
    hist = score_distribution([-0.05, 0.05, 0.15], 0.1)
    lows = [lo for lo, _ in hist]
    assert lows == pytest.approx([-0.1, 0.0, 0.1])
    assert [c for _, c in hist] == [1, 1, 1]


def test_histogram_contiguous_with_empty_bins():
    hist = score_distribution([0.05, 0.35], 0.1)
    assert [c for _, c in hist] == [1, 0, 0, 1]


def test_modal_bin_tracks_negative_center():
    # scores drawn around -0.1: the fullest bin must contain -0.1
    import random
    rng = random.Random(2)
    scores = [rng.gauss(-0.1, 0.05) for _ in range(3000)]
    hist = score_distribution(scores, 0.02)
    modal_lo, _ = max(hist, key=lambda bc: bc[1])
    assert modal_lo <= -0.1 < modal_lo + 0.02


@given(st.lists(st.floats(-5, 5, allow_nan=False), max_size=300),
       st.floats(0.01, 2.0, allow_nan=False))
def test_histogram_mass_conservation(scores, width):
    hist = score_distribution(scores, width)
    assert sum(c for _, c in hist) == len(scores)
