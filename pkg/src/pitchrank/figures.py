"""Figure rendering for the report paths (headless, PNG files).

Every figure is drawn from already-computed report data; nothing here
recomputes scores.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

plt.rcParams.update({
    "figure.figsize": (7.0, 4.2),
    "figure.autolayout": True,
    "font.size": 10,
    "axes.spines.top": False,
    "axes.spines.right": False,
})

_LINE_STYLES = ("-", "--", "-.", ":")


def save_score_histogram(histogram, bin_width: float, path, title="Score distribution") -> None:
    fig, ax = plt.subplots()
    if histogram:
        lows = [lo for lo, _ in histogram]
        counts = [c for _, c in histogram]
        ax.bar(lows, counts, width=bin_width, align="edge", color="#4878cf",
               edgecolor="white", linewidth=0.4)
    ax.axvline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel("rating")
    ax.set_ylabel("players")
    ax.set_title(title)
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_prediction_scatter(records, path, title="Quality gap vs goal difference") -> None:
    fig, ax = plt.subplots()
    hits = [(r.quality_home - r.quality_away, r.goal_diff) for r in records if r.correct]
    misses = [(r.quality_home - r.quality_away, r.goal_diff) for r in records if not r.correct]
    if hits:
        ax.scatter(*zip(*hits), s=14, color="#e377c2", label="predicted", alpha=0.75)
    if misses:
        ax.scatter(*zip(*misses), s=14, color="#7f7f7f", label="missed", alpha=0.6)
    ax.axhline(0, color="black", linewidth=0.6)
    ax.axvline(0, color="black", linewidth=0.6)
    ax.set_xlabel("team quality difference (home - away)")
    ax.set_ylabel("goal difference (home - away)")
    ax.set_title(title)
    if hits or misses:
        ax.legend(frameon=False)
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_session_series(series, path, subs=(), title="Live scores") -> None:
    """One subplot per team, one line per fielded player, cumulative per tick.

    `series` is a list of SessionSnapshot; substituted players' lines stop at
    their last fielded mark; vertical markers show substitution minutes.
    """
    if not series:
        raise ValueError("need at least one snapshot")
    teams = [t.team_id for t in series[0].teams]
    marks = [snap.mark_minute for snap in series]
    fig, axes = plt.subplots(1, len(teams), figsize=(11, 4.2), sharey=True)
    if len(teams) == 1:
        axes = [axes]
    for ax, team in zip(axes, teams):
        roster = [p.player_id for p in series[0].players if p.team_id == team]
        for idx, player_id in enumerate(roster):
            xs, ys = [], []
            fielded = False
            for snap, mark in zip(series, marks):
                p = next(sp for sp in snap.players if sp.player_id == player_id)
                if p.on_pitch:
                    fielded = True
                    xs.append(mark)
                    ys.append(p.score)
                elif fielded:
                    break  # substituted off: freeze at the last on-pitch mark
            if xs:
                label = next(sp.label for sp in series[0].players
                             if sp.player_id == player_id)
                ax.plot(xs, ys, _LINE_STYLES[idx % len(_LINE_STYLES)],
                        linewidth=1.4, label=label)
        for sub in subs:
            if sub.team_id == team:
                ax.axvline(sub.minute, color="#bbbbbb", linewidth=0.8, zorder=0)
        ax.set_title(team)
        ax.set_xlabel("minute")
        ax.legend(frameon=False, fontsize=7)
    axes[0].set_ylabel("cumulative score")
    fig.suptitle(title)
    fig.savefig(path, dpi=130)
    plt.close(fig)
