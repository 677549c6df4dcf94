"""Quantitative annotation of candidates for emotion-driven selection.

Every melody and progression in a candidate pool gets an AnnotationVector:
harmony/pitch/interval/rhythm/tempo/contour/chord features, each bounded and
deterministic. Chord consonance is a dissonance score against the C major
and C natural minor scales: 0 for fully in-scale chords, 0.5 for one foreign
tone, 1 for two or more. Annotated pools persist as JSON manifests so
selection can re-run without regenerating.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields

import numpy as np

from .corpus import (
    ChordProgression,
    ChordSymbol,
    Melody,
    NoteEvent,
    format_progression,
    parse_chord_sheet,
)

C_MAJOR = frozenset({0, 2, 4, 5, 7, 9, 11})
C_NATURAL_MINOR = frozenset({0, 2, 3, 5, 7, 8, 10})

# Absolute semitone sizes treated as consonant when classifying intervals.
CONSONANT_INTERVALS = frozenset({0, 3, 4, 5, 7, 8, 9, 12})

TEMPO_FLOOR = 40
TEMPO_CEIL = 200


class TooShort(ValueError):
    """A melody with fewer than two events cannot be annotated."""


@dataclass(frozen=True)
class AnnotationVector:
    """The per-candidate feature set used for emotional matching."""

    harmony_consonance: float
    harmony_complexity: float
    pitch_variation: float
    interval_size: float
    interval_direction: float
    interval_consonance: float
    rhythm_regularity: float
    rhythm_variation: float
    tempo_min: float
    tempo_max: float
    contour_ascending: float
    contour_descending: float
    contour_variation: float
    chord_consonance: float
    chord_variation: float

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not math.isfinite(v):
                raise ValueError(f"{f.name} is not finite")
        unit = [f.name for f in fields(self)
                if f.name not in ("interval_direction", "tempo_min", "tempo_max")]
        for name in unit:
            v = getattr(self, name)
            if not -1e-9 <= v <= 1 + 1e-9:
                raise ValueError(f"{name}={v} outside [0,1]")
        if not -1 - 1e-9 <= self.interval_direction <= 1 + 1e-9:
            raise ValueError("interval_direction outside [-1,1]")
        if self.tempo_min > self.tempo_max:
            raise ValueError("tempo_min > tempo_max")
        if self.contour_ascending + self.contour_descending > 1 + 1e-9:
            raise ValueError("contour fractions exceed 1")

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, d: dict[str, float]) -> "AnnotationVector":
        return cls(**{f.name: float(d[f.name]) for f in fields(cls)})


FIELD_NAMES = tuple(f.name for f in fields(AnnotationVector))


def _scale_step(out_count: int) -> float:
    """0 for in-scale, 0.5 for one foreign tone, 1 for two or more."""
    if out_count == 0:
        return 0.0
    if out_count == 1:
        return 0.5
    return 1.0


def chord_consonance(chord: ChordSymbol) -> float:
    """Dissonance of a chord against C major / C natural minor (best of)."""
    tones = chord.tones()
    out_major = len(tones - C_MAJOR)
    out_minor = len(tones - C_NATURAL_MINOR)
    return _scale_step(min(out_major, out_minor))


def annotate_progression(p: ChordProgression) -> tuple[float, float]:
    """(mean chord consonance, normalized distinct-chord variation)."""
    chords = p.chords()
    consonance = float(np.mean([chord_consonance(c) for c in chords]))
    if len(chords) == 1:
        variation = 0.0
    else:
        variation = (len(set(chords)) - 1) / (len(chords) - 1)
    return consonance, variation


def _entropy(counts) -> float:
    total = sum(counts)
    probs = [c / total for c in counts if c > 0]
    return -sum(p * math.log2(p) for p in probs)


def _clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))


def annotate_melody(m: Melody) -> AnnotationVector:
    """Compute the full feature vector for a melody."""
    if len(m.events) < 2:
        raise TooShort("melody needs at least 2 events")
    pitches = np.array(m.pitches(), dtype=float)
    durations = m.durations()
    intervals = np.diff(pitches)
    nonzero = intervals[intervals != 0]

    pcs = [int(p) % 12 for p in m.pitches()]
    out_major = sum(1 for pc in pcs if pc not in C_MAJOR)
    out_minor = sum(1 for pc in pcs if pc not in C_NATURAL_MINOR)
    best_scale = C_MAJOR if out_major <= out_minor else C_NATURAL_MINOR
    harmony_consonance = float(
        np.mean([_scale_step(0 if pc in best_scale else 1) for pc in pcs]))

    pc_counts = np.bincount(pcs, minlength=12)
    harmony_complexity = _entropy(pc_counts) / math.log2(12)

    pitch_variation = _clamp01(float(np.std(pitches)) / 12.0)
    interval_size = _clamp01(float(np.mean(np.abs(intervals))) / 12.0)
    interval_direction = float(np.mean(np.sign(intervals)))
    interval_consonance = float(
        np.mean([1.0 if abs(int(iv)) in CONSONANT_INTERVALS else 0.0
                 for iv in intervals]))

    distinct_durs = sorted(set(durations))
    if len(distinct_durs) == 1:
        rhythm_regularity = 1.0
    else:
        counts = [durations.count(d) for d in distinct_durs]
        rhythm_regularity = 1.0 - _entropy(counts) / math.log2(len(distinct_durs))
    rhythm_variation = (len(distinct_durs) - 1) / (len(durations) - 1)

    # Tempo window keeping the mean event rate between 1 and 6 notes/second.
    mean_dur = float(np.mean(durations))
    tempo_min = min(TEMPO_CEIL, max(TEMPO_FLOOR, mean_dur / 8.0))
    tempo_max = min(TEMPO_CEIL, max(TEMPO_FLOOR, 0.75 * mean_dur))
    tempo_max = max(tempo_min, tempo_max)

    if len(nonzero):
        contour_ascending = float(np.sum(nonzero > 0) / len(nonzero))
        contour_descending = float(np.sum(nonzero < 0) / len(nonzero))
    else:
        contour_ascending = contour_descending = 0.0
    if len(intervals) > 1:
        signs = np.sign(nonzero)
        changes = int(np.sum(signs[1:] != signs[:-1])) if len(signs) > 1 else 0
        contour_variation = _clamp01(changes / (len(intervals) - 1))
    else:
        contour_variation = 0.0

    # Chord-row stand-ins for an unaccompanied line: implied-harmony
    # dissonance and pitch-class turnover.
    chord_consonance_val = harmony_consonance
    chord_variation = _clamp01((len(set(pcs)) - 1) / (len(pcs) - 1))

    return AnnotationVector(
        harmony_consonance=harmony_consonance,
        harmony_complexity=_clamp01(harmony_complexity),
        pitch_variation=pitch_variation,
        interval_size=interval_size,
        interval_direction=interval_direction,
        interval_consonance=interval_consonance,
        rhythm_regularity=_clamp01(rhythm_regularity),
        rhythm_variation=_clamp01(rhythm_variation),
        tempo_min=tempo_min,
        tempo_max=tempo_max,
        contour_ascending=contour_ascending,
        contour_descending=contour_descending,
        contour_variation=contour_variation,
        chord_consonance=chord_consonance_val,
        chord_variation=chord_variation,
    )


def progression_vector(p: ChordProgression) -> AnnotationVector:
    """AnnotationVector for a progression candidate.

    Melody-only fields are zeroed (constant across a pool, so they cancel in
    ranking); the tempo window stays fully open.
    """
    consonance, variation = annotate_progression(p)
    return AnnotationVector(
        harmony_consonance=consonance,
        harmony_complexity=0.0,
        pitch_variation=0.0,
        interval_size=0.0,
        interval_direction=0.0,
        interval_consonance=0.0,
        rhythm_regularity=0.0,
        rhythm_variation=0.0,
        tempo_min=TEMPO_FLOOR,
        tempo_max=TEMPO_CEIL,
        contour_ascending=0.0,
        contour_descending=0.0,
        contour_variation=0.0,
        chord_consonance=consonance,
        chord_variation=variation,
    )


# --- pool manifests ----------------------------------------------------------

MANIFEST_VERSION = 1


@dataclass(frozen=True)
class PoolCandidate:
    id: str
    index: int
    annotations: AnnotationVector
    notation: dict


def _melody_notation(m: Melody) -> dict:
    return {
        "meter": list(m.meter),
        "length_bars": m.length_bars,
        "events": [[e.onset, e.duration, e.pitch, e.velocity] for e in m.events],
    }


def melody_from_notation(d: dict) -> Melody:
    events = tuple(NoteEvent(o, dur, p, v) for o, dur, p, v in d["events"])
    return Melody(events, d["length_bars"], tuple(d["meter"]), key_tonic=0)


def progression_from_notation(line: str) -> ChordProgression:
    return parse_chord_sheet(line)[0]


def build_melody_manifest(pool: list[Melody], seed: int) -> dict:
    candidates = []
    for i, m in enumerate(pool):
        candidates.append({
            "id": f"mel-{i:04d}",
            "index": i,
            "notation": _melody_notation(m),
            "annotations": annotate_melody(m).as_dict(),
        })
    return {"version": MANIFEST_VERSION, "kind": "melody", "seed": seed,
            "candidates": candidates}


def build_progression_manifest(pool: list[ChordProgression], seed: int) -> dict:
    candidates = []
    for i, p in enumerate(pool):
        candidates.append({
            "id": f"prog-{i:04d}",
            "index": i,
            "notation": format_progression(p),
            "annotations": progression_vector(p).as_dict(),
        })
    return {"version": MANIFEST_VERSION, "kind": "progression", "seed": seed,
            "candidates": candidates}


def load_manifest(doc) -> tuple[str, list[PoolCandidate]]:
    """Read a manifest (dict or JSON text) back into candidates."""
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    if doc.get("version") != MANIFEST_VERSION:
        raise ValueError(f"unsupported manifest version {doc.get('version')!r}")
    kind = doc["kind"]
    candidates = [
        PoolCandidate(
            id=c["id"],
            index=c["index"],
            annotations=AnnotationVector.from_dict(c["annotations"]),
            notation=c["notation"],
        )
        for c in doc["candidates"]
    ]
    return kind, candidates


def dump_manifest(manifest: dict) -> str:
    return json.dumps(manifest, sort_keys=True)
