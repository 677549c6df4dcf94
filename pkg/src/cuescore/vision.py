"""Film-analysis ingestion: characters, emotion arcs, pacing, segmentation.

The input is a per-frame analysis document (JSON) carrying detected faces
with seven-way emotion distributions and per-frame camera aesthetics. This
module turns it into main-character profiles, smoothed emotion arcs, a
scalar pacing curve, and a tiling of the film into annotated cue segments.
"""

from __future__ import annotations

import json
from bisect import bisect_left, bisect_right
from dataclasses import dataclass

import numpy as np

EMOTIONS = ("happy", "angry", "sad", "neutral", "fear", "disgust", "surprise")

DEFAULT_PACING_WEIGHTS = (0.3, 0.2, 0.2, 0.3)  # movement, panning, zoom, 1-cut_sim


class SchemaError(ValueError):
    """The analysis document violates the ingestion schema."""

    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")


class EmptyAnalysis(ValueError):
    """An analysis document with no frames."""


class NoFaces(ValueError):
    """No frame in the analysis contains a detected face."""


class UnknownCharacter(KeyError):
    """A character id that never appears in the analysis."""

    def __init__(self, character_id: str):
        self.character_id = character_id
        super().__init__(character_id)


@dataclass(frozen=True)
class EmotionVector:
    """A distribution over the seven emotion labels (sums to 1)."""

    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != len(EMOTIONS):
            raise ValueError("expected 7 emotion components")
        if any(v < -1e-9 or v > 1 + 1e-9 for v in self.values):
            raise ValueError("emotion components must lie in [0,1]")
        if abs(sum(self.values) - 1.0) > 0.01:
            raise ValueError("emotion components must sum to 1")

    @classmethod
    def from_mapping(cls, raw: dict[str, float]) -> "EmotionVector":
        total = sum(float(raw[k]) for k in EMOTIONS)
        if total <= 0:
            raise ValueError("emotion values sum to zero")
        return cls(tuple(max(0.0, float(raw[k])) / total for k in EMOTIONS))

    @classmethod
    def from_array(cls, arr) -> "EmotionVector":
        a = np.clip(np.asarray(arr, dtype=float), 0.0, None)
        total = a.sum()
        if total <= 0:
            raise ValueError("emotion values sum to zero")
        return cls(tuple(a / total))

    def as_dict(self) -> dict[str, float]:
        return dict(zip(EMOTIONS, self.values))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values)

    def dominant(self) -> tuple[str, float]:
        """The most probable label, ties broken by canonical label order."""
        i = int(np.argmax(self.values))
        return EMOTIONS[i], self.values[i]

    def __getitem__(self, label: str) -> float:
        return self.values[EMOTIONS.index(label)]


@dataclass(frozen=True)
class Face:
    id: str
    bbox: tuple[float, float, float, float]
    emotions: EmotionVector

    @property
    def area(self) -> float:
        return self.bbox[2] * self.bbox[3]


@dataclass(frozen=True)
class Aesthetics:
    panning: float = 0.0
    zoom: float = 0.0
    cut_similarity: float = 1.0
    movement: float = 0.0
    colorfulness: float = 0.0


@dataclass(frozen=True)
class FrameRecord:
    t: float
    faces: tuple[Face, ...] = ()
    aesthetics: Aesthetics = Aesthetics()


@dataclass(frozen=True)
class FilmAnalysis:
    fps: float
    duration: float
    frames: tuple[FrameRecord, ...]

    def face_ids(self) -> list[str]:
        seen: dict[str, None] = {}
        for fr in self.frames:
            for face in fr.faces:
                seen.setdefault(face.id, None)
        return list(seen)


@dataclass(frozen=True)
class ArcPoint:
    """One stride point of an emotion arc; emotions is None when absent."""

    t: float
    emotions: EmotionVector | None


@dataclass(frozen=True)
class CharacterProfile:
    id: str
    screen_frames: int
    arc: tuple[tuple[float, EmotionVector], ...]
    aggregate: EmotionVector


@dataclass(frozen=True)
class SegmentAnnotation:
    """A cue region: who dominates it, how they feel, how fast it moves.

    The secondary_* fields describe the second most present main character,
    so downstream cue construction can react to character interactions
    without re-reading the analysis.
    """

    start: float
    end: float
    dominant_character: str | None
    dominant_emotion: str
    pacing: float
    dominant_emotion_prob: float = 1.0
    secondary_character: str | None = None
    secondary_emotion: str | None = None
    secondary_emotion_prob: float = 0.0

    def __post_init__(self):
        if not self.start < self.end:
            raise ValueError("segment start must precede end")

    @property
    def length(self) -> float:
        return self.end - self.start


def _require(cond: bool, path: str, reason: str):
    if not cond:
        raise SchemaError(path, reason)


def _number(doc: dict, key: str, path: str) -> float:
    _require(key in doc, f"{path}.{key}" if path else key, "required")
    v = doc[key]
    _require(isinstance(v, (int, float)) and not isinstance(v, bool),
             f"{path}.{key}" if path else key, "must be a number")
    return float(v)


def load_analysis(doc) -> FilmAnalysis:
    """Validate and normalize an analysis document (dict or JSON text)."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SchemaError("$", f"invalid JSON: {exc}") from None
    _require(isinstance(doc, dict), "$", "document must be an object")
    fps = _number(doc, "fps", "")
    _require(fps > 0, "fps", "must be > 0")
    duration = _number(doc, "duration", "")
    _require("frames" in doc, "frames", "required")
    raw_frames = doc["frames"]
    _require(isinstance(raw_frames, list), "frames", "must be an array")
    if not raw_frames:
        raise EmptyAnalysis("analysis has zero frames")

    frames = []
    for i, rf in enumerate(raw_frames):
        path = f"frames[{i}]"
        _require(isinstance(rf, dict), path, "must be an object")
        t = _number(rf, "t", path)
        _require(t >= 0, f"{path}.t", "must be >= 0")
        faces = []
        for j, raw_face in enumerate(rf.get("faces", [])):
            fpath = f"{path}.faces[{j}]"
            _require(isinstance(raw_face, dict), fpath, "must be an object")
            _require("id" in raw_face, f"{fpath}.id", "required")
            bbox = raw_face.get("bbox")
            _require(isinstance(bbox, (list, tuple)) and len(bbox) == 4,
                     f"{fpath}.bbox", "must be [x,y,w,h]")
            _require(all(isinstance(v, (int, float)) and 0 <= v <= 1 for v in bbox),
                     f"{fpath}.bbox", "components must lie in [0,1]")
            emotions = raw_face.get("emotions")
            _require(isinstance(emotions, dict), f"{fpath}.emotions", "required")
            missing = [k for k in EMOTIONS if k not in emotions]
            _require(not missing, f"{fpath}.emotions", f"missing keys {missing}")
            try:
                vec = EmotionVector.from_mapping(emotions)
            except (TypeError, ValueError) as exc:
                raise SchemaError(f"{fpath}.emotions", str(exc)) from None
            faces.append(Face(str(raw_face["id"]), tuple(float(v) for v in bbox), vec))
        raw_aes = rf.get("aesthetics", {})
        _require(isinstance(raw_aes, dict), f"{path}.aesthetics", "must be an object")
        aes = Aesthetics(
            panning=float(raw_aes.get("panning", 0.0)),
            zoom=float(raw_aes.get("zoom", 0.0)),
            cut_similarity=float(raw_aes.get("cut_similarity", 1.0)),
            movement=float(raw_aes.get("movement", 0.0)),
            colorfulness=float(raw_aes.get("colorfulness", 0.0)),
        )
        frames.append(FrameRecord(t, tuple(faces), aes))

    frames.sort(key=lambda fr: fr.t)
    for a, b in zip(frames, frames[1:]):
        _require(a.t < b.t, "frames", f"duplicate frame time {b.t}")
    _require(duration >= frames[-1].t, "duration", "must cover the last frame")
    return FilmAnalysis(fps, duration, tuple(frames))


def identify_main_characters(a: FilmAnalysis, n: int = 3) -> list[CharacterProfile]:
    """Rank faces by screen presence; most frames on screen first."""
    if n < 1:
        raise ValueError("n must be >= 1")
    counts: dict[str, int] = {}
    first_seen: dict[str, float] = {}
    for fr in a.frames:
        for face in fr.faces:
            counts[face.id] = counts.get(face.id, 0) + 1
            first_seen.setdefault(face.id, fr.t)
    if not counts:
        raise NoFaces("no frame contains a face")
    ranked = sorted(counts, key=lambda cid: (-counts[cid], first_seen[cid], cid))
    profiles = []
    for cid in ranked[:n]:
        raw = [f.emotions.as_array() for fr in a.frames for f in fr.faces if f.id == cid]
        aggregate = EmotionVector.from_array(np.mean(raw, axis=0))
        arc_points = emotion_arc(a, cid)
        arc = tuple((p.t, p.emotions) for p in arc_points if p.emotions is not None)
        profiles.append(CharacterProfile(cid, counts[cid], arc, aggregate))
    return profiles


def _stride_grid(duration: float, stride: float) -> list[float]:
    n = int(duration / stride + 1e-9)
    return [i * stride for i in range(n + 1)]


class _FrameIndex:
    """Binary-searchable view of frames by time."""

    def __init__(self, a: FilmAnalysis):
        self.frames = a.frames
        self.times = [fr.t for fr in a.frames]

    def window(self, center: float, half_width: float) -> list[FrameRecord]:
        lo = bisect_left(self.times, center - half_width)
        hi = bisect_right(self.times, center + half_width)
        return list(self.frames[lo:hi])

    def nearest(self, t: float) -> FrameRecord:
        i = bisect_left(self.times, t)
        if i == 0:
            return self.frames[0]
        if i == len(self.frames):
            return self.frames[-1]
        before, after = self.frames[i - 1], self.frames[i]
        return before if t - before.t <= after.t - t else after


def emotion_arc(a: FilmAnalysis, character_id: str, window: float = 2.0,
                stride: float = 0.5) -> list[ArcPoint]:
    """Windowed mean of a character's raw emotion vectors at stride points.

    Points where the face is absent from the whole window carry
    emotions=None rather than a fabricated neutral value.
    """
    if window <= 0:
        raise ValueError("window must be > 0")
    if not any(f.id == character_id for fr in a.frames for f in fr.faces):
        raise UnknownCharacter(character_id)
    index = _FrameIndex(a)
    points = []
    for t in _stride_grid(a.duration, stride):
        raw = [f.emotions.as_array()
               for fr in index.window(t, window / 2)
               for f in fr.faces if f.id == character_id]
        if raw:
            points.append(ArcPoint(t, EmotionVector.from_array(np.mean(raw, axis=0))))
        else:
            points.append(ArcPoint(t, None))
    return points


def frame_pacing(aes: Aesthetics,
                 weights: tuple[float, float, float, float] = DEFAULT_PACING_WEIGHTS) -> float:
    """Instantaneous pacing of one frame from its aesthetics."""
    w_mov, w_pan, w_zoom, w_cut = weights
    raw = (w_mov * aes.movement + w_pan * aes.panning + w_zoom * aes.zoom
           + w_cut * (1.0 - aes.cut_similarity))
    return min(1.0, max(0.0, raw))


def pacing_curve(a: FilmAnalysis, stride: float = 0.5,
                 weights: tuple[float, float, float, float] = DEFAULT_PACING_WEIGHTS,
                 ) -> list[tuple[float, float]]:
    """Stride-sampled pacing; each point averages frames in its stride window."""
    index = _FrameIndex(a)
    curve = []
    for t in _stride_grid(a.duration, stride):
        frames = index.window(t, stride / 2)
        if not frames:
            frames = [index.nearest(t)]
        value = float(np.mean([frame_pacing(fr.aesthetics, weights) for fr in frames]))
        curve.append((t, value))
    return curve


@dataclass
class _GridState:
    character: str | None
    emotion: str | None
    distribution: np.ndarray | None

    def prob(self, label: str | None) -> float:
        if self.distribution is None or label is None:
            return 0.0
        return float(self.distribution[EMOTIONS.index(label)])


def _grid_states(a: FilmAnalysis, profiles, grid, window) -> list[_GridState]:
    index = _FrameIndex(a)
    order = {p.id: rank for rank, p in enumerate(profiles)}
    states = []
    for t in grid:
        frames = index.window(t, window / 2)
        presence: dict[str, float] = {}
        for fr in frames:
            for face in fr.faces:
                if face.id in order:
                    presence[face.id] = presence.get(face.id, 0.0) + face.area
        character = None
        if presence:
            character = min(presence, key=lambda cid: (-presence[cid], order[cid]))
        if character is not None:
            raw = [f.emotions.as_array() for fr in frames
                   for f in fr.faces if f.id == character]
        else:
            raw = [f.emotions.as_array() for fr in frames for f in fr.faces]
        if raw:
            mean = np.mean(raw, axis=0)
            mean = mean / mean.sum()
            states.append(_GridState(character, EMOTIONS[int(np.argmax(mean))], mean))
        else:
            states.append(_GridState(character, None, None))
    return states


def segment_film(a: FilmAnalysis, profiles: list[CharacterProfile], *,
                 stride: float = 0.5, window: float = 2.0,
                 min_segment_len: float = 4.0, emotion_margin: float = 0.15,
                 pacing_weights=DEFAULT_PACING_WEIGHTS) -> list[SegmentAnnotation]:
    """Tile the film into segments at character and emotion change points.

    A boundary is placed where the dominant main character changes, or where
    the dominant character's dominant emotion changes by at least
    `emotion_margin`; either change must persist for `min_segment_len`
    seconds, which also bounds the minimum segment length (a film shorter
    than that yields a single segment).
    """
    grid = _stride_grid(a.duration, stride)
    states = _grid_states(a, profiles, grid, window)
    pacing = pacing_curve(a, stride, pacing_weights)
    persist = max(1, round(min_segment_len / stride))

    def persists(i: int, predicate) -> bool:
        if i + persist > len(states) - 1:
            return False
        return all(predicate(states[j]) for j in range(i, i + persist + 1))

    boundaries = []
    seg_start_i = 0
    cur_char = states[0].character
    cur_emotion = states[0].emotion
    for i in range(1, len(states)):
        s = states[i]
        long_enough = grid[i] - grid[seg_start_i] >= min_segment_len
        if s.character != cur_char:
            if long_enough and persists(i, lambda st: st.character == s.character):
                boundaries.append(i)
                seg_start_i, cur_char, cur_emotion = i, s.character, s.emotion
        elif s.emotion is not None and cur_emotion is not None \
                and s.emotion != cur_emotion:
            margin = s.prob(s.emotion) - s.prob(cur_emotion)
            if margin >= emotion_margin and long_enough and persists(
                    i, lambda st: st.emotion == s.emotion):
                boundaries.append(i)
                seg_start_i, cur_emotion = i, s.emotion

    cut_points = [0] + boundaries + [len(grid) - 1]
    segments = []
    for a_i, b_i in zip(cut_points, cut_points[1:]):
        start = grid[a_i]
        end = grid[b_i] if b_i != len(grid) - 1 else a.duration
        if end <= start:
            end = a.duration
        segments.append(_annotate_segment(a, profiles, states, pacing, grid,
                                          a_i, b_i, start, end))
    return segments


def _annotate_segment(a, profiles, states, pacing, grid, a_i, b_i, start, end):
    order = {p.id: rank for rank, p in enumerate(profiles)}
    idx = _FrameIndex(a)
    frames = [fr for fr in idx.window((start + end) / 2, (end - start) / 2 + 1e-9)
              if start - 1e-9 <= fr.t < end + 1e-9]
    presence: dict[str, float] = {}
    for fr in frames:
        for face in fr.faces:
            if face.id in order:
                presence[face.id] = presence.get(face.id, 0.0) + face.area
    ranked = sorted(presence, key=lambda cid: (-presence[cid], order[cid]))
    dominant = ranked[0] if ranked else None
    secondary = ranked[1] if len(ranked) > 1 else None

    def modal_emotion(cid: str | None) -> tuple[str, float]:
        """Modal per-frame dominant label for cid (or the whole scene)."""
        votes: dict[str, list[float]] = {}
        for fr in frames:
            vecs = [f.emotions.as_array() for f in fr.faces
                    if cid is None or f.id == cid]
            if not vecs:
                continue
            mean = np.mean(vecs, axis=0)
            label = EMOTIONS[int(np.argmax(mean))]
            votes.setdefault(label, []).append(float(np.max(mean) / mean.sum()))
        if not votes:
            return "neutral", 0.0
        label = min(votes, key=lambda lb: (-len(votes[lb]), EMOTIONS.index(lb)))
        return label, float(np.mean(votes[label]))

    emotion, prob = modal_emotion(dominant)
    sec_emotion, sec_prob = (None, 0.0)
    if secondary is not None:
        sec_emotion, sec_prob = modal_emotion(secondary)
    span = [v for (t, v) in pacing if start - 1e-9 <= t <= end + 1e-9]
    mean_pacing = float(np.mean(span)) if span else 0.0
    return SegmentAnnotation(
        start=start, end=end, dominant_character=dominant,
        dominant_emotion=emotion, pacing=mean_pacing,
        dominant_emotion_prob=prob, secondary_character=secondary,
        secondary_emotion=sec_emotion, secondary_emotion_prob=sec_prob,
    )
