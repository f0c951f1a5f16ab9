"""pitchrank command-line interface.

Subcommands compose the pipeline end to end:

    synth    generate a seeded synthetic league event log
    ingest   validate an event log and print corpus statistics
    train    learn feature weights from match outcomes (optionally ablated)
    rate     export player ratings and a score-distribution report
    predict  evaluate the superior-team outcome predictor
    replay   rebuild a live session log into a per-tick score report
    serve    run the live-session HTTP API

Options may also come from a `key = value` config file (--config); explicit
flags win over the file, which wins over built-in defaults.  The
PITCHRANK_OUT environment variable sets the default output directory for
report commands.  Report commands write figures next to their CSV/JSON
outputs unless --no-figures is given.
"""

from __future__ import annotations

import argparse
import gzip
import hashlib
import io
import json
import os
import sys
import tempfile

from . import __version__
from .errors import PitchrankError
from .events import parse_event_log, serialize_event_log
from .features import build_training_set, dump_training_rows, team_vector
from .learning import TrainConfig, load_model, save_model, top_weights, train_ablated
from .live import replay_file
from .predictor import (
    EPSILON_DEFAULT,
    GAP_THRESHOLD_DEFAULT,
    evaluate_predictor,
    evaluation_summary,
    write_scatter_csv,
)
from .ratings import (
    rate_players,
    read_ratings_jsonl,
    score_distribution,
    write_histogram_csv,
    write_ratings_jsonl,
)
from .synth import LeagueConfig, generate_league

EXIT_CODES = {
    "malformed_line": 3,
    "unknown_player": 4,
    "clock_out_of_range": 5,
    "invalid_event": 6,
    "unknown_team": 7,
    "empty_training_set": 8,
    "degenerate_data": 9,
    "no_matches": 10,
    "missing_rating": 11,
    "nothing_evaluable": 12,
    "unknown_model": 13,
    "unknown_session": 14,
    "duplicate_player": 15,
    "player_off_pitch": 16,
    "clock_regression": 17,
    "not_on_pitch": 18,
    "already_used": 19,
    "corrupt_log": 20,
}

_EPILOG = "exit codes: 0 ok, 1 I/O or unexpected error, 2 bad usage, then " + \
    ", ".join(f"{code} {name}" for name, code in sorted(EXIT_CODES.items(), key=lambda kv: kv[1]))


def _open_events(path):
    if str(path).endswith(".gz"):
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, encoding="utf-8")


def _load_corpus(path):
    with _open_events(path) as fh:
        return parse_event_log(fh)


def _atomic_write_text(path, text: str) -> None:
    directory = os.path.dirname(os.fspath(path)) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_config_file(path) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{line_no}: expected 'key = value'")
            key, value = line.split("=", 1)
            values[key.strip().replace("-", "_")] = value.strip()
    return values


_BOOL_STRINGS = {"1": True, "true": True, "yes": True, "on": True,
                 "0": False, "false": False, "no": False, "off": False}


def _resolve(args, config: dict, key: str, default, cast=None):
    """Flag > config file > default; config values are strings and get cast."""
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if key in config:
        raw = config[key]
        if cast is bool or isinstance(default, bool):
            return _BOOL_STRINGS[raw.lower()]
        if cast is not None:
            return cast(raw)
        if default is not None:
            return type(default)(raw)
        return raw
    return default


def _default_out_dir(args, config) -> str:
    return _resolve(args, config, "out_dir",
                    os.environ.get("PITCHRANK_OUT", "."), cast=str)


def _print_weight_tables(model, k: int) -> None:
    k = min(k, len(model.weights))
    positive, negative = top_weights(model, k)
    left_w = max([len(name) for name, _ in negative] + [24])
    print(f"{'Top Negative Influence':<{left_w + 8}}| Top Positive Influence")
    for (neg_name, neg_val), (pos_name, pos_val) in zip(negative, positive):
        print(f"{neg_val:+.3f}  {neg_name:<{left_w}}| {pos_name:<40} {pos_val:+.3f}")


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------

def cmd_synth(args, config) -> int:
    league_config = LeagueConfig(
        teams=_resolve(args, config, "teams", 20),
        seasons=_resolve(args, config, "seasons", 2),
        players_per_team=_resolve(args, config, "players", 14),
        seed=_resolve(args, config, "seed", 0),
    )
    league = generate_league(league_config)
    text = "\n".join(serialize_event_log(league)) + "\n"
    if str(args.out).endswith(".gz"):
        buf = io.BytesIO()
        with gzip.GzipFile(fileobj=buf, mode="wb", mtime=0) as gz:
            gz.write(text.encode("utf-8"))
        _atomic_write_bytes(args.out, buf.getvalue())
    else:
        _atomic_write_text(args.out, text)
    print(f"wrote {len(league)} matches to {args.out}")
    return 0


def _atomic_write_bytes(path, data: bytes) -> None:
    directory = os.path.dirname(os.fspath(path)) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_ingest(args, config) -> int:
    corpus = _load_corpus(args.events)
    players = {a.player_id for m in corpus for apps in m.lineups.values() for a in apps}
    features = set()
    n_events = 0
    for m in corpus:
        n_events += len(m.events)
        for team in m.team_ids:
            features.update(team_vector(m, team).entries)
    seasons = sorted({m.season_id for m in corpus})
    print(json.dumps({
        "matches": len(corpus), "events": n_events, "players": len(players),
        "features": len(features), "seasons": seasons,
    }))
    if args.dump_training:
        rows = build_training_set(corpus, set(args.ablate or ()))
        lines = "\n".join(json.dumps(doc) for doc in dump_training_rows(rows))
        _atomic_write_text(args.dump_training, lines + "\n")
        print(f"wrote {len(rows)} training rows to {args.dump_training}")
    return 0


def cmd_train(args, config) -> int:
    corpus = _load_corpus(args.events)
    if args.seasons:
        wanted = set(args.seasons.split(","))
        corpus = [m for m in corpus if m.season_id in wanted]
    holdout = _resolve(args, config, "holdout", 0.0)
    if not 0.0 <= holdout < 1.0:
        raise ValueError("--holdout must be in [0, 1)")
    split = len(corpus) - int(round(holdout * len(corpus)))
    train_matches, holdout_matches = corpus[:split], corpus[split:]
    train_config = TrainConfig(
        C=_resolve(args, config, "c", 1.0),
        tolerance=_resolve(args, config, "tolerance", 1e-6),
        max_epochs=_resolve(args, config, "max_epochs", 1000),
        seed=_resolve(args, config, "seed", 0),
    )
    ablation = tuple(args.ablate or ())
    model = train_ablated(train_matches, ablation, train_config)
    save_model(model, args.out)
    print(f"trained on {len(train_matches)} matches "
          f"({len(model.weights)} features, ablation={list(model.ablation)})")
    _print_weight_tables(model, _resolve(args, config, "top", 10))
    if holdout_matches:
        rows = build_training_set(holdout_matches, ablation)
        hits = 0
        for vector, label in rows:
            margin = model.raw_norm * sum(
                model.weights.get(k, 0.0) * model.scaler.scale(k, c)
                for k, c in vector.items()) + model.intercept
            hits += (margin > 0) == (label > 0)
        print(f"holdout: {hits}/{len(rows)} team rows classified correctly")
    print(f"model written to {args.out}")
    return 0


def cmd_rate(args, config) -> int:
    corpus = _load_corpus(args.events)
    model = load_model(args.model)
    seasons = args.seasons.split(",") if args.seasons else None
    ratings = rate_players(corpus, model, seasons)
    out_dir = _default_out_dir(args, config)
    ratings_path = os.path.join(out_dir, "ratings.jsonl")
    buf = io.StringIO()
    write_ratings_jsonl(ratings, buf)
    _atomic_write_text(ratings_path, buf.getvalue())
    print(f"rated {len(ratings)} players -> {ratings_path}")
    width = _resolve(args, config, "histogram", None, cast=float)
    if width:
        hist = score_distribution([r.rating for r in ratings.values()], width)
        buf = io.StringIO()
        write_histogram_csv(hist, buf)
        hist_path = os.path.join(out_dir, "histogram.csv")
        _atomic_write_text(hist_path, buf.getvalue())
        print(f"histogram ({len(hist)} bins) -> {hist_path}")
        if not args.no_figures:
            from .figures import save_score_histogram
            png = os.path.join(out_dir, "histogram.png")
            save_score_histogram(hist, width, png)
            print(f"figure -> {png}")
    return 0


def cmd_predict(args, config) -> int:
    corpus = _load_corpus(args.events)
    if args.seasons:
        wanted = set(args.seasons.split(","))
        corpus = [m for m in corpus if m.season_id in wanted]
    with open(args.ratings, encoding="utf-8") as fh:
        ratings = read_ratings_jsonl(fh)
    epsilon = _resolve(args, config, "epsilon", EPSILON_DEFAULT)
    gap = _resolve(args, config, "gap_threshold", GAP_THRESHOLD_DEFAULT)
    result = evaluate_predictor(corpus, ratings, epsilon)
    summary = evaluation_summary(result, gap)
    out_dir = _default_out_dir(args, config)
    summary_path = os.path.join(out_dir, "summary.json")
    _atomic_write_text(summary_path, json.dumps(summary, sort_keys=True) + "\n")
    buf = io.StringIO()
    write_scatter_csv(result.records, buf)
    scatter_path = os.path.join(out_dir, "scatter.csv")
    _atomic_write_text(scatter_path, buf.getvalue())
    print(json.dumps(summary, sort_keys=True))
    print(f"summary -> {summary_path}\nscatter ({result.evaluated} rows) -> {scatter_path}")
    if not args.no_figures:
        from .figures import save_prediction_scatter
        png = os.path.join(out_dir, "scatter.png")
        save_prediction_scatter(result.records, png)
        print(f"figure -> {png}")
    return 0


def cmd_replay(args, config) -> int:
    session = replay_file(args.log)
    series = session.series()
    out_dir = _default_out_dir(args, config)
    rows = ["mark_minute,team_id,player_id,label,score,on_pitch"]
    for snap in series:
        for p in snap.players:
            rows.append(f"{snap.mark_minute},{p.team_id},{p.player_id},"
                        f"{p.label},{p.score},{1 if p.on_pitch else 0}")
    series_path = os.path.join(out_dir, "series.csv")
    _atomic_write_text(series_path, "\n".join(rows) + "\n")
    print(f"replayed session {session.session_id}: {len(series)} ticks, "
          f"{sum(len(s.players) for s in series)} rows -> {series_path}")
    if not args.no_figures:
        from .figures import save_session_series
        png = os.path.join(out_dir, "series.png")
        save_session_series(series, png, [s for _, s in session.subs],
                            title=f"session {session.session_id}")
        print(f"figure -> {png}")
    return 0


def cmd_serve(args, config) -> int:
    from .live import SessionStore
    from .server import create_app, serve

    models = {}
    for spec in args.models:
        if "=" in spec:
            name, path = spec.split("=", 1)
        else:
            name = os.path.splitext(os.path.basename(spec))[0]
            path = spec
        models[name] = load_model(path)
    store = SessionStore(
        _resolve(args, config, "store", "./sessions", cast=str),
        models,
        fsync_on_ack=_resolve(args, config, "fsync", True),
    )
    app = create_app(store, ui_dir=args.ui)
    serve(app,
          host=_resolve(args, config, "host", "127.0.0.1", cast=str),
          port=_resolve(args, config, "port", 8000))
    return 0


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pitchrank", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter,
                                     epilog=_EPILOG)
    parser.add_argument("--version", action="version", version=f"pitchrank {__version__}")
    parser.add_argument("--config", help="key = value options file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic league event log")
    p.add_argument("--out", required=True, help="output .jsonl (or .jsonl.gz)")
    p.add_argument("--teams", type=int)
    p.add_argument("--seasons", type=int)
    p.add_argument("--players", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("ingest", help="validate an event log, print statistics")
    p.add_argument("events")
    p.add_argument("--dump-training", help="write (sparse vector, label) JSON lines")
    p.add_argument("--ablate", action="append", help="feature prefix to drop (repeatable)")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("train", help="learn feature weights from an event log")
    p.add_argument("events")
    p.add_argument("--out", required=True, help="model JSON path")
    p.add_argument("--seasons", help="comma-separated season ids to train on")
    p.add_argument("--ablate", action="append",
                   help="feature prefix to remove before training (repeatable)")
    p.add_argument("--c", type=float, help="soft-margin C (default 1.0)")
    p.add_argument("--tolerance", type=float, help="relative objective stop (default 1e-6)")
    p.add_argument("--max-epochs", type=int, dest="max_epochs")
    p.add_argument("--seed", type=int)
    p.add_argument("--holdout", type=float, help="fraction of matches held out")
    p.add_argument("--top", type=int, help="rows in the printed weight tables")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("rate", help="export player ratings (and a histogram report)")
    p.add_argument("events")
    p.add_argument("--model", required=True)
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--seasons", help="comma-separated season ids to rate over")
    p.add_argument("--histogram", type=float, help="bin width for the rating histogram")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("predict", help="evaluate the superior-team predictor")
    p.add_argument("events")
    p.add_argument("--ratings", required=True, help="ratings JSONL from `rate`")
    p.add_argument("--seasons", help="comma-separated season ids to evaluate")
    p.add_argument("--epsilon", type=float, help="similarity threshold (default 1e-4)")
    p.add_argument("--gap-threshold", type=float, dest="gap_threshold",
                   help="quality gap for the upset rate (default 0.2)")
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("replay", help="rebuild a session log into a score series")
    p.add_argument("log")
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("serve", help="run the live-session HTTP API")
    p.add_argument("--models", nargs="+", required=True, metavar="NAME=PATH",
                   help="model files to register")
    p.add_argument("--store", help="session log directory (default ./sessions)")
    p.add_argument("--host")
    p.add_argument("--port", type=int, help="0 picks an ephemeral port and prints it")
    p.add_argument("--fsync", action="store_true", dest="fsync", default=None,
                   help="fsync the session log before acknowledging (default)")
    p.add_argument("--no-fsync", action="store_false", dest="fsync", default=None)
    p.add_argument("--ui", help="built annotation-console directory to mount at /")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = {}
    if args.config:
        try:
            config = _read_config_file(args.config)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    try:
        return args.func(args, config)
    except PitchrankError as exc:
        print(f"error ({exc.code}): {exc}", file=sys.stderr)
        return EXIT_CODES.get(exc.code, 1)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def file_sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


if __name__ == "__main__":
    sys.exit(main())
