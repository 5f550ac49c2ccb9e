"""Run configuration: one JSON artifact carries every knob so a pipeline run
is reproducible from the config file alone. Command-line flags override
individual fields."""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from typing import Optional

from .corpus import Category
from .report import normalize_weights

DISTANCE_BOUNDS = (1, 20)


def default_weights() -> dict[str, float]:
    return {cat.value: w for cat, w in normalize_weights().items()}


@dataclass
class PipelineConfig:
    # artifact paths (None = must come from flags)
    corpus_path: Optional[str] = None
    policies_path: Optional[str] = None
    model_path: Optional[str] = None
    labeling_path: Optional[str] = None
    candidates_path: Optional[str] = None
    triage_log_path: Optional[str] = None
    labeled_path: Optional[str] = None
    rules_path: Optional[str] = None
    matches_path: Optional[str] = None
    report_path: Optional[str] = None
    eval_path: Optional[str] = None
    apps_path: Optional[str] = None
    gold_path: Optional[str] = None
    # BTM hyperparameters
    k: int = 5
    alpha: Optional[float] = None  # None -> 50/k
    beta: float = 0.01
    iterations: int = 1000
    seed: int = 0
    # candidate proposal
    threshold: float = 0.6
    # rule extraction
    keep_threshold: float = 0.5
    distance_range: tuple[int, int] = DISTANCE_BOUNDS
    # reporting
    category_weights: dict[str, float] = field(default_factory=default_weights)
    exclude_blank: bool = False
    # language / serving
    lang: str = "en"
    host: str = "127.0.0.1"
    port: int = 8642

    def __post_init__(self):
        self.distance_range = tuple(self.distance_range)  # type: ignore[assignment]
        self.validate()

    def validate(self) -> None:
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.alpha is not None and self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not isinstance(self.seed, int):
            raise ValueError("seed must be an integer")
        if not (0.0 < self.threshold < 1.0):
            raise ValueError("threshold must be in (0, 1)")
        if not (0.0 <= self.keep_threshold <= 1.0):
            raise ValueError("keep_threshold must be in [0, 1]")
        lo, hi = self.distance_range
        if not (DISTANCE_BOUNDS[0] <= lo <= hi <= DISTANCE_BOUNDS[1]):
            raise ValueError(
                f"distance_range must satisfy {DISTANCE_BOUNDS[0]} <= lo <= hi <= {DISTANCE_BOUNDS[1]}"
            )
        for key, value in self.category_weights.items():
            Category(key)  # raises on unknown category
            if value < 0:
                raise ValueError(f"category weight for {key} must be >= 0")
        if not self.lang:
            raise ValueError("lang must be non-empty")
        if not (0 <= self.port <= 65535):
            raise ValueError("port must be in 0..65535")

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["distance_range"] = list(self.distance_range)
        return out

    @classmethod
    def from_dict(cls, payload: dict) -> "PipelineConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(payload) - known
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**payload)

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "PipelineConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def override(self, **kwargs) -> "PipelineConfig":
        """New config with the given non-None fields replaced (flags win)."""
        updates = {k: v for k, v in kwargs.items() if v is not None}
        return dataclasses.replace(self, **updates)
