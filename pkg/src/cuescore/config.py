"""Engine configuration: tunable defaults plus the emotion-music mapping.

A config file (YAML) may override any subset of the defaults; the packaged
emotion mapping ships as data so users can copy and edit it.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from importlib import resources

import yaml

from .vision import EMOTIONS

DYNAMICS_LEVELS = ("p", "mf", "f")
MODES = ("major", "minor")
ARTICULATION_CHOICES = ("staccato", "tenuto", "none")


@dataclass(frozen=True)
class EmotionRow:
    """Musical treatment of one emotion label."""

    tempo: tuple[int, int]
    mode: str
    dynamics: str
    articulation: str
    counter_step: int
    velocity_var: int
    ranges: dict[str, tuple[float, float]]

    def __post_init__(self):
        if self.tempo[0] > self.tempo[1]:
            raise ValueError("tempo range reversed")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.dynamics not in DYNAMICS_LEVELS:
            raise ValueError(f"unknown dynamics {self.dynamics!r}")
        if self.articulation not in ARTICULATION_CHOICES:
            raise ValueError(f"unknown articulation {self.articulation!r}")
        for name, (lo, hi) in self.ranges.items():
            if lo > hi:
                raise ValueError(f"range for {name} reversed")

    def midpoint(self, feature: str, default: float = 0.5) -> float:
        if feature == "tempo_min":
            return float(self.tempo[0])
        if feature == "tempo_max":
            return float(self.tempo[1])
        lo, hi = self.ranges.get(feature, (default, default))
        return (lo + hi) / 2.0


@dataclass(frozen=True)
class EmotionMusicMapping:
    rows: dict[str, EmotionRow]

    def __post_init__(self):
        missing = [e for e in EMOTIONS if e not in self.rows]
        if missing:
            raise ValueError(f"mapping missing emotions: {missing}")

    def row(self, emotion: str) -> EmotionRow:
        return self.rows[emotion]


def _parse_mapping(raw: dict) -> EmotionMusicMapping:
    rows = {}
    for emotion, spec in raw["emotions"].items():
        rows[emotion] = EmotionRow(
            tempo=tuple(spec["tempo"]),
            mode=spec["mode"],
            dynamics=spec["dynamics"],
            articulation=spec["articulation"],
            counter_step=int(spec.get("counter_step", 960)),
            velocity_var=int(spec.get("velocity_var", 6)),
            ranges={k: tuple(v) for k, v in spec.get("ranges", {}).items()},
        )
    return EmotionMusicMapping(rows)


def default_mapping() -> EmotionMusicMapping:
    text = resources.files("cuescore.data").joinpath("emotion_mapping.yaml").read_text()
    return _parse_mapping(yaml.safe_load(text))


@dataclass(frozen=True)
class EngineConfig:
    """Everything tunable about the pipeline, with sensible defaults."""

    melody_pool_size: int = 1000
    chord_pool_size: int = 1000
    candidates_per_character: int = 3
    main_characters: int = 3

    stride: float = 0.5
    smoothing_window: float = 2.0
    min_segment_len: float = 4.0
    emotion_margin: float = 0.15
    pacing_weights: tuple[float, float, float, float] = (0.3, 0.2, 0.2, 0.3)

    fit_weight: float = 1.0
    contrast_weight: float = 0.5
    tempo_field_weight: float = 0.5

    melody_register: tuple[int, int] = (60, 84)
    # Scale used for the minor side of consonance scoring. Only the natural
    # minor is implemented; the flag records the choice.
    minor_scale: str = "natural"

    layer_melody: tuple[int, int] = (72, 95)
    layer_counter: tuple[int, int] = (60, 71)
    layer_chords: tuple[int, int] = (48, 59)
    layer_bass: tuple[int, int] = (36, 47)

    mapping: EmotionMusicMapping = field(default_factory=default_mapping)


_SCALAR_KEYS = {
    "melody_pool_size": int,
    "chord_pool_size": int,
    "candidates_per_character": int,
    "main_characters": int,
    "stride": float,
    "smoothing_window": float,
    "min_segment_len": float,
    "emotion_margin": float,
    "fit_weight": float,
    "contrast_weight": float,
    "tempo_field_weight": float,
    "minor_scale": str,
}

_TUPLE_KEYS = {
    "pacing_weights": float,
    "melody_register": int,
    "layer_melody": int,
    "layer_counter": int,
    "layer_chords": int,
    "layer_bass": int,
}


def load_config(path: str | None = None) -> EngineConfig:
    """Build an EngineConfig, overlaying a YAML file when given."""
    cfg = EngineConfig()
    if path is None:
        return cfg
    with open(path, "r", encoding="utf-8") as fh:
        raw = yaml.safe_load(fh) or {}
    updates = {}
    for key, cast in _SCALAR_KEYS.items():
        if key in raw:
            updates[key] = cast(raw[key])
    for key, cast in _TUPLE_KEYS.items():
        if key in raw:
            updates[key] = tuple(cast(v) for v in raw[key])
    if "emotions" in raw:
        updates["mapping"] = _parse_mapping(raw)
    return replace(cfg, **updates)
