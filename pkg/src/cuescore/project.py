"""On-disk project lifecycle for the leitmotif-selection workflow.

Each project is a directory under the store's data dir: the analysis
document, the seeded candidate pools (generated once so UI choices stay
stable), the current assignment, and rendered artifacts. All writes are
atomic (write temp, rename); renders are deleted whenever the assignment
changes so artifacts always correspond to the stored assignment and seed.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
import uuid
from dataclasses import asdict, dataclass
from pathlib import Path

from . import pipeline, vision
from .config import EngineConfig

RENDER_FILES = ("score.mid", "score.chords.txt", "timeline.json")


class ProjectNotFound(KeyError):
    pass


class IncompleteAssignment(ValueError):
    """Render requested before every main character has a leitmotif."""


class InvalidAssignment(ValueError):
    pass


def _atomic_write(path: Path, data: bytes):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _atomic_write_json(path: Path, doc) -> None:
    _atomic_write(path, json.dumps(doc, sort_keys=True).encode("utf-8"))


@dataclass
class RenderStatus:
    state: str = "idle"  # idle | running | done | error
    detail: str = ""


class ProjectStore:
    """Filesystem-backed projects with per-project single-writer locking."""

    def __init__(self, data_dir: str | Path, config: EngineConfig | None = None):
        self.root = Path(data_dir)
        self.root.mkdir(parents=True, exist_ok=True)
        self.config = config or EngineConfig()
        self._locks: dict[str, threading.Lock] = {}
        self._status: dict[str, RenderStatus] = {}
        self._guard = threading.Lock()

    def _lock(self, project_id: str) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(project_id, threading.Lock())

    def _dir(self, project_id: str) -> Path:
        d = self.root / project_id
        if not d.is_dir():
            raise ProjectNotFound(project_id)
        return d

    # -- creation ------------------------------------------------------------

    def create(self, analysis_doc, seed: int = 0,
               melody_corpus: str | None = None,
               chord_corpus: str | None = None) -> dict:
        analysis = vision.load_analysis(analysis_doc)
        melody_corpus = melody_corpus or pipeline.default_melody_corpus()
        chord_corpus = chord_corpus or pipeline.default_chord_corpus()
        profiles = vision.identify_main_characters(
            analysis, self.config.main_characters)
        segments = vision.segment_film(
            analysis, profiles,
            stride=self.config.stride, window=self.config.smoothing_window,
            min_segment_len=self.config.min_segment_len,
            emotion_margin=self.config.emotion_margin,
            pacing_weights=self.config.pacing_weights,
        )
        pools = pipeline.build_pools(melody_corpus, chord_corpus, seed,
                                     self.config)
        candidates = pipeline.candidate_sets(profiles, pools, self.config)

        project_id = uuid.uuid4().hex[:12]
        d = self.root / project_id
        d.mkdir(parents=True)
        _atomic_write_json(d / "meta.json", {
            "id": project_id, "seed": seed,
            "duration": analysis.duration,
            "segments": len(segments),
        })
        _atomic_write_json(d / "analysis.json", _analysis_doc(analysis))
        _atomic_write_json(d / "characters.json",
                           [_profile_doc(p) for p in profiles])
        _atomic_write_json(d / "segments.json",
                           [_segment_doc(s) for s in segments])
        _atomic_write_json(d / "candidates.json", candidates)
        _atomic_write_json(d / "pools" / "melodies.json",
                           pools.melody_manifest)
        _atomic_write_json(d / "pools" / "progressions.json",
                           pools.progression_manifest)
        self._status[project_id] = RenderStatus()
        return self.describe(project_id)

    # -- reads ---------------------------------------------------------------

    def _read_json(self, project_id: str, name: str):
        return json.loads((self._dir(project_id) / name).read_text())

    def describe(self, project_id: str) -> dict:
        meta = self._read_json(project_id, "meta.json")
        meta["characters"] = [c["id"] for c in
                              self._read_json(project_id, "characters.json")]
        meta["assignment"] = self.assignment(project_id)
        meta["render"] = asdict(self.render_status(project_id))
        meta["rendered"] = all(
            (self._dir(project_id) / "renders" / f).exists()
            for f in RENDER_FILES)
        return meta

    def characters(self, project_id: str) -> list[dict]:
        return self._read_json(project_id, "characters.json")

    def segments(self, project_id: str) -> list[dict]:
        return self._read_json(project_id, "segments.json")

    def candidates(self, project_id: str, character_id: str) -> dict:
        table = self._read_json(project_id, "candidates.json")
        if character_id not in table:
            raise ProjectNotFound(character_id)
        ids = table[character_id]
        pools = self._pools(project_id)
        mel_index = {c["id"]: c for c in pools.melody_manifest["candidates"]}
        prog_index = {c["id"]: c
                      for c in pools.progression_manifest["candidates"]}
        return {
            "melodies": [mel_index[i] for i in ids["melodies"]],
            "progressions": [prog_index[i] for i in ids["progressions"]],
        }

    def _pools(self, project_id: str) -> pipeline.Pools:
        return pipeline.Pools(
            melody_manifest=self._read_json(project_id, "pools/melodies.json"),
            progression_manifest=self._read_json(
                project_id, "pools/progressions.json"),
        )

    def assignment(self, project_id: str) -> dict:
        d = self._dir(project_id)
        path = d / "assignment.json"
        if not path.exists():
            return {}
        return json.loads(path.read_text())

    def artifact(self, project_id: str, name: str) -> bytes:
        if name not in RENDER_FILES:
            raise ProjectNotFound(name)
        path = self._dir(project_id) / "renders" / name
        if not path.exists():
            raise ProjectNotFound(name)
        return path.read_bytes()

    def render_status(self, project_id: str) -> RenderStatus:
        self._dir(project_id)
        return self._status.setdefault(project_id, RenderStatus(
            "done" if (self._dir(project_id) / "renders" / "score.mid").exists()
            else "idle"))

    # -- mutations -----------------------------------------------------------

    def set_assignment(self, project_id: str, assignment: dict) -> dict:
        with self._lock(project_id):
            d = self._dir(project_id)
            characters = {c["id"] for c in self.characters(project_id)}
            pools = self._pools(project_id)
            melody_ids = {c["id"] for c in pools.melody_manifest["candidates"]}
            prog_ids = {c["id"]
                        for c in pools.progression_manifest["candidates"]}
            seen_melodies: set[str] = set()
            for cid, choice in assignment.items():
                if cid not in characters:
                    raise InvalidAssignment(f"unknown character {cid!r}")
                if not isinstance(choice, dict) or "melody" not in choice \
                        or "progression" not in choice:
                    raise InvalidAssignment(f"bad choice for {cid!r}")
                if choice["melody"] not in melody_ids:
                    raise InvalidAssignment(
                        f"unknown melody {choice['melody']!r}")
                if choice["progression"] not in prog_ids:
                    raise InvalidAssignment(
                        f"unknown progression {choice['progression']!r}")
                if choice["melody"] in seen_melodies:
                    raise InvalidAssignment(
                        "two characters share one melody")
                seen_melodies.add(choice["melody"])
            _atomic_write_json(d / "assignment.json", assignment)
            # The previous render no longer matches the stored assignment.
            renders = d / "renders"
            if renders.is_dir():
                for f in renders.iterdir():
                    f.unlink()
            self._status[project_id] = RenderStatus()
            return assignment

    def check_render_ready(self, project_id: str):
        characters = {c["id"] for c in self.characters(project_id)}
        assignment = self.assignment(project_id)
        missing = sorted(characters - set(assignment))
        if missing:
            raise IncompleteAssignment(
                f"characters without a leitmotif: {', '.join(missing)}")

    def mark_render_pending(self, project_id: str):
        """Flip the status before the job starts so polls never see a stale
        'done' from the previous render."""
        self._dir(project_id)
        self._status[project_id] = RenderStatus("running")

    def render(self, project_id: str) -> RenderStatus:
        """Run the render synchronously (callers may background this)."""
        with self._lock(project_id):
            self._status[project_id] = RenderStatus("running")
            try:
                self.check_render_ready(project_id)
                d = self._dir(project_id)
                meta = self._read_json(project_id, "meta.json")
                profiles = _profiles_from_docs(
                    self._read_json(project_id, "characters.json"))
                segments = [_segment_from_doc(s)
                            for s in self._read_json(project_id,
                                                     "segments.json")]
                result = pipeline.render_score(
                    segments, self.assignment(project_id), profiles,
                    self._pools(project_id), meta["seed"], self.config)
                _atomic_write(d / "renders" / "score.mid", result.midi)
                _atomic_write(d / "renders" / "score.chords.txt",
                              result.chord_sheet.encode("utf-8"))
                from .emit import dump_timeline
                _atomic_write(d / "renders" / "timeline.json",
                              dump_timeline(result.timeline).encode("utf-8"))
                self._status[project_id] = RenderStatus("done")
            except Exception as exc:  # surfaced through the status endpoint
                self._status[project_id] = RenderStatus("error", str(exc))
            return self._status[project_id]


# -- document (de)serialization -----------------------------------------------


def _analysis_doc(a: vision.FilmAnalysis) -> dict:
    return {
        "fps": a.fps,
        "duration": a.duration,
        "frames": [
            {
                "t": fr.t,
                "faces": [
                    {"id": f.id, "bbox": list(f.bbox),
                     "emotions": f.emotions.as_dict()}
                    for f in fr.faces
                ],
                "aesthetics": {
                    "panning": fr.aesthetics.panning,
                    "zoom": fr.aesthetics.zoom,
                    "cut_similarity": fr.aesthetics.cut_similarity,
                    "movement": fr.aesthetics.movement,
                    "colorfulness": fr.aesthetics.colorfulness,
                },
            }
            for fr in a.frames
        ],
    }


def _profile_doc(p: vision.CharacterProfile) -> dict:
    return {
        "id": p.id,
        "screen_frames": p.screen_frames,
        "aggregate": p.aggregate.as_dict(),
        "arc": [{"t": t, "emotions": vec.as_dict()} for t, vec in p.arc],
    }


def _profiles_from_docs(docs: list[dict]) -> list[vision.CharacterProfile]:
    profiles = []
    for doc in docs:
        arc = tuple((pt["t"], vision.EmotionVector.from_mapping(pt["emotions"]))
                    for pt in doc["arc"])
        profiles.append(vision.CharacterProfile(
            id=doc["id"], screen_frames=doc["screen_frames"], arc=arc,
            aggregate=vision.EmotionVector.from_mapping(doc["aggregate"])))
    return profiles


def _segment_doc(s: vision.SegmentAnnotation) -> dict:
    return {
        "start": s.start, "end": s.end,
        "dominant_character": s.dominant_character,
        "dominant_emotion": s.dominant_emotion,
        "pacing": s.pacing,
        "dominant_emotion_prob": s.dominant_emotion_prob,
        "secondary_character": s.secondary_character,
        "secondary_emotion": s.secondary_emotion,
        "secondary_emotion_prob": s.secondary_emotion_prob,
    }


def _segment_from_doc(doc: dict) -> vision.SegmentAnnotation:
    return vision.SegmentAnnotation(**doc)
