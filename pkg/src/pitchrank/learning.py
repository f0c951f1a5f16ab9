"""Weight learning: scale team vectors, fit the classifier, extract weights.

The stored weight vector is always L2-normalized (the raw norm is kept in
the model config) so that full and ablated models are directly comparable.
The intercept is trained but deliberately excluded from normalization and
from player scoring: it only absorbs class balance.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import asdict, dataclass, field
from importlib import resources
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DegenerateData, EmptyTrainingSet
from .features import PerformanceVector, build_training_set
from .solver import solve_hinge_svm

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class TrainConfig:
    C: float = 1.0
    tolerance: float = 1e-6
    max_epochs: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.C <= 0 or self.tolerance <= 0 or self.max_epochs <= 0:
            raise ValueError("C, tolerance and max_epochs must be positive")


@dataclass(frozen=True)
class FeatureScaler:
    """Per-feature min/max over the training team vectors (absent keys = 0).

    scale() maps a count into [0, 1] linearly; constant features map to 0.
    Counts above the training max clamp to 1 so live scores stay bounded.
    Keys never seen in training scale by identity (they only ever meet a
    zero weight).
    """

    ranges: Mapping[str, tuple[float, float]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "ranges", dict(self.ranges))

    def scale(self, key: str, count: float) -> float:
        rng = self.ranges.get(key)
        if rng is None:
            return float(count)
        lo, hi = rng
        if hi <= lo:
            return 0.0
        value = (count - lo) / (hi - lo)
        return 1.0 if value > 1.0 else value


def fit_scaler(rows: Sequence[PerformanceVector | Mapping[str, int]]) -> FeatureScaler:
    if not rows:
        raise EmptyTrainingSet("cannot fit a scaler on zero rows")
    entries = [r.entries if isinstance(r, PerformanceVector) else r for r in rows]
    keys = sorted(set().union(*entries)) if entries else []
    ranges: dict[str, tuple[float, float]] = {}
    for key in keys:
        values = [float(e.get(key, 0)) for e in entries]
        ranges[key] = (min(values), max(values))
    return FeatureScaler(ranges)


@dataclass(frozen=True)
class WeightModel:
    weights: Mapping[str, float]
    intercept: float
    scaler: FeatureScaler
    ablation: tuple[str, ...] = ()
    config: TrainConfig = TrainConfig()
    raw_norm: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "weights", dict(self.weights))
        object.__setattr__(self, "ablation", tuple(self.ablation))

    def norm(self) -> float:
        return math.sqrt(math.fsum(w * w for w in self.weights.values()))


def train(rows: Sequence[tuple[PerformanceVector | Mapping[str, int], int]],
          config: TrainConfig = TrainConfig()) -> WeightModel:
    """Fit scaler + classifier on (vector, +-1) rows; returns the unit-norm model."""
    if not rows:
        raise EmptyTrainingSet("no training rows")
    labels = [label for _, label in rows]
    if any(l not in (1, -1) for l in labels):
        raise ValueError("labels must be +1 or -1")
    if len(set(labels)) < 2:
        raise DegenerateData("a single class is present")

    vectors = [v.entries if isinstance(v, PerformanceVector) else v for v, _ in rows]
    scaler = fit_scaler(vectors)
    features = sorted(scaler.ranges)
    if not features:
        raise DegenerateData("all vectors are empty")

    X = np.array(
        [[scaler.scale(f, v.get(f, 0)) for f in features] for v in vectors],
        dtype=np.float64,
    )
    y = np.array(labels, dtype=np.float64)
    if bool(np.all(X == X[0])):
        raise DegenerateData("all vectors identical across classes")

    w, b, _info = solve_hinge_svm(X, y, C=config.C, tolerance=config.tolerance,
                                  max_epochs=config.max_epochs)
    raw_norm = float(np.linalg.norm(w))
    if raw_norm < 1e-12:
        raise DegenerateData("classifier weight vector vanished")
    weights = {f: float(w[k] / raw_norm) for k, f in enumerate(features)}
    return WeightModel(weights, float(b), scaler, (), config, raw_norm)


def train_ablated(corpus, ablation: Iterable[str] = ("Goal",),
                  config: TrainConfig = TrainConfig()) -> WeightModel:
    """build_training_set -> fit_scaler -> train, recording the ablation."""
    ablation = tuple(sorted(set(ablation)))
    rows = build_training_set(corpus, ablation)
    model = train(rows, config)
    return WeightModel(model.weights, model.intercept, model.scaler,
                       ablation, model.config, model.raw_norm)


def top_weights(model: WeightModel, k: int) -> tuple[list[tuple[str, float]], list[tuple[str, float]]]:
    """(top-k by weight descending, top-k ascending); ties break on key order."""
    if k <= 0 or k > len(model.weights):
        raise ValueError(f"k must be in 1..{len(model.weights)}")
    items = list(model.weights.items())
    positive = sorted(items, key=lambda kv: (-kv[1], kv[0]))[:k]
    negative = sorted(items, key=lambda kv: (kv[1], kv[0]))[:k]
    return positive, negative


# --------------------------------------------------------------------------
# Model files
# --------------------------------------------------------------------------

def model_to_json_dict(model: WeightModel) -> dict:
    config = asdict(model.config)
    if model.raw_norm is not None:
        config["raw_norm"] = model.raw_norm
    return {
        "format_version": MODEL_FORMAT_VERSION,
        "weights": {k: model.weights[k] for k in sorted(model.weights)},
        "intercept": model.intercept,
        "scaler": {k: {"min": lo, "max": hi}
                   for k, (lo, hi) in sorted(model.scaler.ranges.items())},
        "ablation": list(model.ablation),
        "config": config,
    }


def model_from_json_dict(doc: dict) -> WeightModel:
    config_doc = dict(doc.get("config", {}))
    raw_norm = config_doc.pop("raw_norm", None)
    known = {k: config_doc[k] for k in ("C", "tolerance", "max_epochs", "seed") if k in config_doc}
    ranges = {k: (float(r["min"]), float(r["max"])) for k, r in doc.get("scaler", {}).items()}
    return WeightModel(
        weights={k: float(v) for k, v in doc["weights"].items()},
        intercept=float(doc.get("intercept", 0.0)),
        scaler=FeatureScaler(ranges),
        ablation=tuple(doc.get("ablation", ())),
        config=TrainConfig(**known),
        raw_norm=raw_norm,
    )


def save_model(model: WeightModel, path) -> None:
    """Atomic write: a crashed run never leaves a half-written model."""
    text = json.dumps(model_to_json_dict(model), sort_keys=True)
    directory = os.path.dirname(os.fspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_model(path) -> WeightModel:
    with open(path, encoding="utf-8") as fh:
        return model_from_json_dict(json.load(fh))


def load_packaged_model(name: str) -> WeightModel:
    """Load a weight table shipped with the package (e.g. "table1_weights")."""
    text = resources.files("pitchrank.data").joinpath(f"{name}.json").read_text("utf-8")
    return model_from_json_dict(json.loads(text))
