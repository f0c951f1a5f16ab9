import pytest
from hypothesis import given, settings, strategies as st

from pitchrank.errors import EmptyTrainingSet, UnknownPlayer, UnknownTeam
from pitchrank.features import (
    Outcome,
    ablate,
    build_training_set,
    outcome_label,
    player_vector,
    team_vector,
)

from conftest import make_event, make_match
from oracles import recount_player_vector, recount_team_vector


def test_player_with_no_events_gives_empty_vector():
    m = make_match()
    assert player_vector(m, "H1").entries == {}


def test_player_vector_counts_repeats():
    events = [
        make_event("H1", "Pass", "Simple pass", ["accurate"]),
        make_event("H1", "Pass", "Simple pass", ["accurate"], clock_s=20),
    ]
    m = make_match(events=events)
    v = player_vector(m, "H1")
    assert v.entries == {"Pass-Simple pass": 2, "Pass-Simple pass-accurate": 2}


def test_player_vector_unknown_player():
    with pytest.raises(UnknownPlayer):
        player_vector(make_match(), "nobody")


def test_fixture_vectors_match_recount_oracle(fixture_match):
    for team in fixture_match.team_ids:
        for pid in fixture_match.appearing_players(team):
            assert player_vector(fixture_match, pid).entries == \
                recount_player_vector(fixture_match, pid)
        assert team_vector(fixture_match, team).entries == \
            recount_team_vector(fixture_match, team)


def test_team_vector_sums_disjoint_players():
    lineups = {"HOME": [("H1", 0, 90), ("H2", 0, 90)], "AWAY": [("A1", 0, 90)]}
    events = [
        make_event("H1", "Foul"),
        make_event("H2", "Goal", None, ["Scored"], clock_s=30),
    ]
    m = make_match(lineups=lineups, events=events)
    assert team_vector(m, "HOME").entries == {"Foul": 1, "Goal": 1, "Goal-Scored": 1}


def test_team_vector_unknown_team():
    with pytest.raises(UnknownTeam):
        team_vector(make_match(), "NEITHER")


def test_team_vector_is_exact_player_sum(fixture_match):
    for team in fixture_match.team_ids:
        total = {}
        for pid in fixture_match.appearing_players(team):
            for key, count in player_vector(fixture_match, pid).items():
                total[key] = total.get(key, 0) + count
        assert team_vector(fixture_match, team).entries == total


def test_outcome_labels():
    m = make_match(goals=(3, 1))
    assert outcome_label(m, "HOME") is Outcome.WIN
    assert outcome_label(m, "AWAY") is Outcome.LOSS
    assert outcome_label(make_match(goals=(1, 1)), "HOME") is Outcome.DRAW
    assert outcome_label(make_match(goals=(0, 2)), "HOME") is Outcome.LOSS
    with pytest.raises(UnknownTeam):
        outcome_label(m, "NEITHER")


@given(st.integers(0, 6), st.integers(0, 6))
def test_outcome_antisymmetry(gh, ga):
    m = make_match(goals=(gh, ga))
    home, away = outcome_label(m, "HOME"), outcome_label(m, "AWAY")
    assert (home is Outcome.WIN) == (away is Outcome.LOSS)
    assert (home is Outcome.DRAW) == (away is Outcome.DRAW)


# --- ablation ---------------------------------------------------------------

def test_ablation_prefix_removes_family():
    entries = {"Goal": 2, "Goal-Scored": 2, "Goalkeeper leave": 1, "Pass": 5}
    out = ablate(entries, {"Goal"})
    # "Goalkeeper leave" shares the string prefix but not the "-" boundary
    assert out == {"Goalkeeper leave": 1, "Pass": 5}


def test_ablation_idempotent():
    entries = {"Goal-Scored": 1, "Pass-Cross-assist": 3, "Foul": 2}
    once = ablate(entries, {"Goal", "Foul"})
    assert ablate(once, {"Goal", "Foul"}) == once


def test_empty_ablation_is_identity():
    entries = {"Pass": 1}
    assert ablate(entries, set()) == entries


# --- training set -----------------------------------------------------------

def test_draws_only_corpus_raises():
    with pytest.raises(EmptyTrainingSet):
        build_training_set([make_match(goals=(1, 1))])


def test_two_rows_per_decided_match():
    m = make_match(goals=(2, 0), events=[make_event("H1", "Pass")])
    rows = build_training_set([m])
    assert [label for _, label in rows] == [1, -1]
    assert rows[0][0].owner_id == "HOME" and rows[1][0].owner_id == "AWAY"


def test_training_set_applies_ablation():
    events = [make_event("H1", "Goal", None, ["Scored"]), make_event("H1", "Pass")]
    m = make_match(goals=(1, 0), events=events)
    rows = build_training_set([m], ablation={"Goal"})
    home_vec = rows[0][0].entries
    assert "Goal" not in home_vec and "Goal-Scored" not in home_vec
    assert home_vec == {"Pass": 1}


def test_training_set_order_follows_corpus():
    corpus = [
        make_match("M1", goals=(1, 1)),   # excluded draw
        make_match("M2", goals=(0, 1)),
        make_match("M3", goals=(2, 0)),
    ]
    rows = build_training_set(corpus)
    assert [(v.match_id, label) for v, label in rows] == [
        ("M2", -1), ("M2", 1), ("M3", 1), ("M3", -1),
    ]


# --- decomposition property over generated matches --------------------------

event_strategy = st.tuples(
    st.sampled_from(["H1", "H2", "H3", "A1", "A2"]),
    st.sampled_from([("Pass", "Simple pass"), ("Pass", "Cross"), ("Foul", None),
                     ("Goal", None), ("Duel", "Air duel")]),
    st.lists(st.sampled_from(["accurate", "not accurate", "assist", "Scored"]),
             unique=True, max_size=3),
)


@settings(max_examples=60)
@given(st.lists(event_strategy, max_size=40))
def test_decomposition_on_generated_matches(raw_events):
    lineups = {"HOME": [("H1", 0, 90), ("H2", 0, 90), ("H3", 0, 45)],
               "AWAY": [("A1", 0, 90), ("A2", 0, 90)]}
    events = [
        make_event(pid, ev, sub, tags, team_id="HOME" if pid.startswith("H") else "AWAY")
        for pid, (ev, sub), tags in raw_events
    ]
    m = make_match(lineups=lineups, events=events)
    for team in m.team_ids:
        summed = {}
        for pid in m.appearing_players(team):
            for key, count in player_vector(m, pid).items():
                summed[key] = summed.get(key, 0) + count
        assert team_vector(m, team).entries == summed
        assert team_vector(m, team).entries == recount_team_vector(m, team)
