"""pitchrank: event-based football performance ratings.

Pipeline: parse event logs -> build performance vectors -> learn feature
weights from match outcomes -> score players -> predict outcomes from
lineup-average ratings -> serve rolling live scores during a match.
"""

from .errors import PitchrankError
from .events import (
    Appearance,
    EventRecord,
    MatchRecord,
    event_from_json,
    event_to_json,
    explode_features,
    feature_key,
    load_starter_vocabulary,
    parse_event_log,
    serialize_event_log,
)
from .live import (
    LiveSession,
    RosterEntry,
    SessionSnapshot,
    SessionStore,
    replay,
    replay_file,
)
from .features import (
    Outcome,
    PerformanceVector,
    ablate,
    build_training_set,
    outcome_label,
    player_vector,
    team_vector,
)
from .learning import (
    FeatureScaler,
    TrainConfig,
    WeightModel,
    fit_scaler,
    load_model,
    load_packaged_model,
    save_model,
    top_weights,
    train,
    train_ablated,
)
from .predictor import (
    EvaluationResult,
    PredictionRecord,
    Relation,
    TeamQuality,
    classify_pair,
    evaluate_predictor,
    similar_goal_spread,
    team_quality,
    upset_rate,
)
from .ratings import (
    MatchScore,
    PlayerRating,
    compute_match_scores,
    match_score,
    rate_players,
    score_distribution,
    season_rating,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
