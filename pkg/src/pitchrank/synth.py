"""Seeded synthetic league generator for demos, fixtures, and tests.

Teams carry a latent strength; match goals are Poisson with a log-linear
strength effect, so outcomes are mediated by goals.  Players inherit noisy
versions of their team's strength and produce event counts whose rates move
with skill but carry heavy per-match noise; goal and assist events are
attached to sampled scorers.  Everything is driven by one numpy Generator,
so a seed fully determines the corpus.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .events import Appearance, EventRecord, MatchRecord, serialize_event_log


@dataclass(frozen=True)
class LeagueConfig:
    teams: int = 20
    seasons: int = 2
    players_per_team: int = 14
    seed: int = 0
    event_scale: float = 1.0
    goal_base: float = 1.35
    strength_effect: float = 2.2
    home_advantage: float = 0.12

    def __post_init__(self):
        if self.teams < 2 or self.seasons < 1 or self.players_per_team < 11:
            raise ValueError("need >=2 teams, >=1 season, >=11 players per team")


# (event, sub_event, tag), base rate per full match, skill slope,
# persistent per-player bias sd, per-player match noise sd,
# per-team match noise sd, attack-profile weighting flag.
# Persistent biases make non-goal features an imperfect proxy of skill even
# after a season of averaging; goals stay exactly outcome-tied.
_FEATURE_RATES = [
    (("Pass", "Simple pass", "accurate"), 4.5, 1.0, 1.6, 0.6, 1.0, False),
    (("Pass", "Simple pass", "not accurate"), 1.3, -0.4, 0.6, 0.3, 0.4, False),
    (("Pass", "High pass", "accurate"), 1.0, 0.25, 0.5, 0.3, 0.4, False),
    (("Pass", "Cross", "key pass"), 0.25, 0.15, 0.2, 0.1, 0.1, True),
    (("Pass", "Smart pass", "key pass"), 0.2, 0.2, 0.2, 0.1, 0.1, True),
    (("Pass", "High pass", "assist"), 0.12, 0.1, 0.12, 0.05, 0.05, True),
    (("Pass", "Cross", "assist"), 0.1, 0.09, 0.1, 0.05, 0.05, True),
    (("Pass", "Simple pass", "assist"), 0.08, 0.07, 0.09, 0.04, 0.04, True),
    (("Pass", "Smart pass", "assist"), 0.07, 0.08, 0.08, 0.04, 0.04, True),
    (("Duel", "Air duel", "accurate"), 0.7, 0.25, 0.4, 0.3, 0.3, False),
    (("Duel", "Air duel", "not accurate"), 0.7, -0.25, 0.4, 0.3, 0.3, False),
    (("Others on the ball", "Touch", None), 1.5, 0.3, 0.6, 0.4, 0.5, False),
    (("Others on the ball", "Touch", "dangerous ball lost"), 0.3, -0.2, 0.2, 0.1, 0.15, False),
    (("Others on the ball", "Clearance", None), 0.5, -0.2, 0.3, 0.2, 0.25, False),
    (("Foul", None, None), 0.35, -0.1, 0.25, 0.15, 0.15, False),
    (("Free Kick", "Corner", "accurate"), 0.25, 0.1, 0.2, 0.1, 0.15, False),
    (("Free Kick", "Free kick shot", "not accurate"), 0.1, -0.04, 0.1, 0.05, 0.05, False),
    (("Foul", None, "red card"), 0.006, -0.008, 0.0, 0.0, 0.0, False),
]


def _attack_profile(players_per_team: int) -> np.ndarray:
    # goalkeeper, back four, midfield four, two forwards, then a mixed bench
    profile = [0.02, 0.08, 0.08, 0.08, 0.08, 0.35, 0.35, 0.35, 0.35, 1.0, 1.0]
    bench = [0.5, 0.2, 0.9, 0.35, 0.7]
    while len(profile) < players_per_team:
        profile.append(bench[(len(profile) - 11) % len(bench)])
    return np.array(profile[:players_per_team])


def _minute_to_clock(minute: int, second: int) -> tuple[str, int]:
    if minute < 45:
        return "1H", minute * 60 + second
    return "2H", (minute - 45) * 60 + second


class _LeagueBuilder:
    def __init__(self, config: LeagueConfig):
        self.config = config
        self.rng = np.random.default_rng(config.seed)
        n, p = config.teams, config.players_per_team
        self.team_ids = [f"T{t + 1:02d}" for t in range(n)]
        self.strengths = self.rng.uniform(0.1, 0.9, size=n)
        self.skills = np.clip(
            self.strengths[:, None] + self.rng.normal(0.0, 0.1, size=(n, p)),
            0.02, 0.98,
        )
        self.attack = _attack_profile(p)
        self.player_ids = [[f"{tid}-P{j + 1:02d}" for j in range(p)] for tid in self.team_ids]
        # one persistent rate bias per player per feature, fixed for all seasons
        self.biases = np.stack([
            self.rng.normal(0.0, bias_sig, size=(n, p)) if bias_sig else np.zeros((n, p))
            for (_, _, _, bias_sig, _, _, _) in _FEATURE_RATES
        ])

    def build(self) -> list[MatchRecord]:
        matches = []
        for season in range(1, self.config.seasons + 1):
            counter = 0
            for home in range(self.config.teams):
                for away in range(self.config.teams):
                    if home == away:
                        continue
                    counter += 1
                    matches.append(self._match(season, counter, home, away))
        return matches

    def _match(self, season: int, counter: int, home: int, away: int) -> MatchRecord:
        cfg, rng = self.config, self.rng
        match_id = f"S{season}-M{counter:03d}"
        diff = self.strengths[home] - self.strengths[away]
        goals_home = int(rng.poisson(cfg.goal_base * np.exp(cfg.strength_effect * diff + cfg.home_advantage)))
        goals_away = int(rng.poisson(cfg.goal_base * np.exp(-cfg.strength_effect * diff)))

        lineups: dict[str, tuple[Appearance, ...]] = {}
        events: list[EventRecord] = []
        for team_idx, goals in ((home, goals_home), (away, goals_away)):
            team_id = self.team_ids[team_idx]
            apps = self._appearances(team_idx)
            lineups[team_id] = apps
            events.extend(self._team_events(match_id, team_idx, apps))
            events.extend(self._goal_events(match_id, team_idx, apps, goals))

        events.sort(key=lambda e: (e.period, e.clock_s))
        return MatchRecord(
            match_id=match_id,
            home_team_id=self.team_ids[home],
            away_team_id=self.team_ids[away],
            goals_home=goals_home,
            goals_away=goals_away,
            season_id=f"S{season}",
            lineups=lineups,
            events=tuple(events),
        )

    def _appearances(self, team_idx: int) -> tuple[Appearance, ...]:
        cfg, rng = self.config, self.rng
        players = self.player_ids[team_idx]
        bench = list(range(11, cfg.players_per_team))
        n_subs = int(rng.integers(0, min(3, len(bench)) + 1)) if bench else 0
        off_minutes = {}
        used_bench = []
        if n_subs:
            outfield = list(rng.choice(np.arange(1, 11), size=n_subs, replace=False))
            minutes = sorted(int(m) for m in rng.integers(55, 86, size=n_subs))
            used_bench = list(rng.choice(bench, size=n_subs, replace=False))
            for starter, minute in zip(outfield, minutes):
                off_minutes[int(starter)] = minute
        apps = []
        for j in range(11):
            apps.append(Appearance(players[j], 0, off_minutes.get(j, 90)))
        # bench players come on exactly when their starter goes off
        ordered_offs = sorted(off_minutes.items(), key=lambda kv: kv[1])
        for (_starter, minute), j in zip(ordered_offs, used_bench):
            apps.append(Appearance(players[int(j)], minute, 90))
        return tuple(apps)

    def _team_events(self, match_id: str, team_idx: int,
                     apps: tuple[Appearance, ...]) -> list[EventRecord]:
        cfg, rng = self.config, self.rng
        team_id = self.team_ids[team_idx]
        index_of = {pid: j for j, pid in enumerate(self.player_ids[team_idx])}
        mean_attack = float(self.attack.mean())
        events: list[EventRecord] = []
        for row, ((event, sub, tag), base, slope, _bias, psig, tsig, attack_weighted) \
                in enumerate(_FEATURE_RATES):
            team_shock = rng.normal(0.0, tsig) if tsig else 0.0
            for app in apps:
                j = index_of[app.player_id]
                skill = self.skills[team_idx][j]
                minutes = app.off_minute - app.on_minute
                lam = base + slope * (skill - 0.5) + self.biases[row][team_idx][j] + team_shock
                if psig:
                    lam += rng.normal(0.0, psig)
                if attack_weighted:
                    lam *= self.attack[j] / mean_attack
                lam = max(0.0, lam) * cfg.event_scale * (minutes / 90.0)
                count = int(rng.poisson(lam))
                for _ in range(count):
                    minute = int(rng.integers(app.on_minute, app.off_minute))
                    period, clock_s = _minute_to_clock(minute, int(rng.integers(0, 60)))
                    tags = (tag,) if tag else ()
                    events.append(EventRecord(match_id, team_id, app.player_id,
                                              period, clock_s, event, sub, tags))
        return events

    def _goal_events(self, match_id: str, team_idx: int,
                     apps: tuple[Appearance, ...], goals: int) -> list[EventRecord]:
        rng = self.rng
        team_id = self.team_ids[team_idx]
        index_of = {pid: j for j, pid in enumerate(self.player_ids[team_idx])}
        weights = np.array([
            self.attack[index_of[a.player_id]]
            * self.skills[team_idx][index_of[a.player_id]]
            * (a.off_minute - a.on_minute) / 90.0
            for a in apps
        ])
        weights = weights / weights.sum()
        events: list[EventRecord] = []
        for _ in range(goals):
            scorer = apps[int(rng.choice(len(apps), p=weights))]
            minute = int(rng.integers(scorer.on_minute, scorer.off_minute))
            second = int(rng.integers(0, 60))
            period, clock_s = _minute_to_clock(minute, second)
            events.append(EventRecord(match_id, team_id, scorer.player_id,
                                      period, clock_s, "Goal", None, ("Scored",)))
        return events


def generate_league(config: LeagueConfig = LeagueConfig()) -> list[MatchRecord]:
    return _LeagueBuilder(config).build()


def league_lines(matches: Iterable[MatchRecord]) -> Iterable[str]:
    return serialize_event_log(matches)
