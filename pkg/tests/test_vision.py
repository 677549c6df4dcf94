"""Analysis ingestion, character ranking, arcs, pacing, segmentation."""

import math
import random

import pytest

from conftest import film_doc, make_face, make_frame, two_character_film
from cuescore.vision import (
    EMOTIONS,
    EmotionVector,
    EmptyAnalysis,
    NoFaces,
    SchemaError,
    UnknownCharacter,
    emotion_arc,
    identify_main_characters,
    load_analysis,
    pacing_curve,
    segment_film,
)


class TestLoadAnalysis:
    def test_minimal_document(self):
        a = load_analysis(film_doc([make_frame(0.0)], duration=1.0))
        assert len(a.frames) == 1

    def test_emotions_renormalized(self):
        emotions = {k: 0.0 for k in EMOTIONS}
        emotions["happy"] = 2.0
        doc = film_doc([make_frame(0.0, [{
            "id": "A", "bbox": [0, 0, 0.5, 0.5], "emotions": emotions}])], 1.0)
        a = load_analysis(doc)
        assert a.frames[0].faces[0].emotions["happy"] == pytest.approx(1.0)

    def test_missing_fps(self):
        with pytest.raises(SchemaError) as err:
            load_analysis({"duration": 1.0, "frames": [make_frame(0.0)]})
        assert err.value.path == "fps"
        assert err.value.reason == "required"

    def test_missing_emotion_key(self):
        emotions = {k: 0.1 for k in EMOTIONS if k != "fear"}
        doc = film_doc([make_frame(0.0, [{
            "id": "A", "bbox": [0, 0, 0.5, 0.5], "emotions": emotions}])], 1.0)
        with pytest.raises(SchemaError):
            load_analysis(doc)

    def test_zero_frames(self):
        with pytest.raises(EmptyAnalysis):
            load_analysis({"fps": 1.0, "duration": 0.0, "frames": []})

    def test_frames_sorted(self):
        doc = film_doc([make_frame(1.0), make_frame(0.0)], 2.0)
        a = load_analysis(doc)
        assert [fr.t for fr in a.frames] == [0.0, 1.0]

    def test_duplicate_times_rejected(self):
        with pytest.raises(SchemaError):
            load_analysis(film_doc([make_frame(1.0), make_frame(1.0)], 2.0))

    def test_duration_must_cover_frames(self):
        with pytest.raises(SchemaError):
            load_analysis(film_doc([make_frame(5.0)], duration=1.0))

    def test_invalid_json_text(self):
        with pytest.raises(SchemaError):
            load_analysis("{not json")

    def test_aesthetics_defaults(self):
        a = load_analysis(film_doc([make_frame(0.0)], 1.0))
        aes = a.frames[0].aesthetics
        assert aes.movement == 0.0 and aes.cut_similarity == 1.0


class TestMainCharacters:
    def _film(self, counts):
        frames = []
        t = 0.0
        for cid, n in counts.items():
            for _ in range(n):
                frames.append(make_frame(t, [make_face(cid, "neutral")]))
                t += 0.25
        return load_analysis(film_doc(frames, t + 1))

    def test_ranked_by_presence(self):
        a = self._film({"A": 100, "B": 50, "C": 30, "D": 10})
        assert [p.id for p in identify_main_characters(a, 3)] == ["A", "B", "C"]

    def test_tie_broken_by_first_appearance(self):
        frames = []
        for i in range(10):
            frames.append(make_frame(i, [make_face("B", "happy")]))
        for i in range(10):
            frames.append(make_frame(100 + i, [make_face("A", "happy")]))
        a = load_analysis(film_doc(frames, 200))
        assert [p.id for p in identify_main_characters(a, 2)] == ["B", "A"]

    def test_single_face(self):
        a = self._film({"A": 5})
        profiles = identify_main_characters(a, 3)
        assert [p.id for p in profiles] == ["A"]
        assert profiles[0].screen_frames == 5

    def test_no_faces(self):
        a = load_analysis(film_doc([make_frame(0.0)], 1.0))
        with pytest.raises(NoFaces):
            identify_main_characters(a)

    def test_permutation_stable(self):
        rng = random.Random(3)
        frames = []
        for i in range(40):
            faces = [make_face("A", "happy"), make_face("B", "sad", w=0.1),
                     make_face("C", "fear", w=0.05)]
            rng.shuffle(faces)
            frames.append(make_frame(i * 0.5, faces))
        a = load_analysis(film_doc(frames, 30))
        baseline = [p.id for p in identify_main_characters(a, 3)]
        for seed in range(5):
            rng2 = random.Random(seed)
            shuffled = []
            for fr in frames:
                faces = list(fr["faces"])
                rng2.shuffle(faces)
                shuffled.append({**fr, "faces": faces})
            again = load_analysis(film_doc(shuffled, 30))
            assert [p.id for p in identify_main_characters(again, 3)] == baseline


class TestEmotionArc:
    def test_constant_emotions(self):
        doc = two_character_film(boundary=60, duration=60)
        a = load_analysis(doc)
        arc = emotion_arc(a, "A")
        present = [p for p in arc if p.emotions is not None]
        assert present
        for p in present:
            assert p.emotions.dominant()[0] == "happy"
            assert p.emotions["happy"] == pytest.approx(0.88, abs=1e-9)

    def test_windowed_mean_against_oracle(self):
        # One sad impulse frame inside a neutral run.
        frames = []
        for i in range(17):
            t = i * 0.25
            emotion = "sad" if i == 8 else "neutral"
            frames.append(make_frame(t, [make_face("A", emotion, weight=1.0)]))
        a = load_analysis(film_doc(frames, 4.0))
        arc = emotion_arc(a, "A", window=2.0, stride=0.5)
        times = [fr.t for fr in a.frames]
        for point in arc:
            inside = [i for i, t in enumerate(times)
                      if point.t - 1.0 <= t <= point.t + 1.0]
            expected_sad = sum(1 for i in inside if i == 8) / len(inside)
            assert point.emotions["sad"] == pytest.approx(expected_sad)

    def test_absence_marker(self):
        frames = [make_frame(0.0, [make_face("A", "happy")]),
                  make_frame(10.0, [make_face("A", "happy")])]
        a = load_analysis(film_doc(frames, 10.0))
        arc = emotion_arc(a, "A", window=2.0, stride=0.5)
        assert any(p.emotions is None for p in arc)
        marked = {p.t for p in arc if p.emotions is None}
        assert 5.0 in marked

    def test_unknown_character(self):
        a = load_analysis(two_character_film())
        with pytest.raises(UnknownCharacter):
            emotion_arc(a, "nobody")

    def test_outputs_are_valid_vectors(self):
        a = load_analysis(two_character_film())
        for point in emotion_arc(a, "A"):
            if point.emotions is not None:
                assert sum(point.emotions.values) == pytest.approx(1.0)


class TestPacingCurve:
    def _uniform_film(self, **aes):
        frames = [make_frame(i * 0.5, [], **aes) for i in range(21)]
        return load_analysis(film_doc(frames, 10.0))

    def test_zero_case(self):
        a = self._uniform_film(movement=0, panning=0, zoom=0, cut_similarity=1)
        assert all(v == 0.0 for _, v in pacing_curve(a))

    def test_saturation(self):
        a = self._uniform_film(movement=1, panning=1, zoom=1, cut_similarity=0)
        assert all(v == 1.0 for _, v in pacing_curve(a))

    def test_movement_only(self):
        a = self._uniform_film(movement=1, panning=0, zoom=0, cut_similarity=1)
        assert all(v == pytest.approx(0.3) for _, v in pacing_curve(a))

    def test_monotone_in_each_input(self):
        base = dict(movement=0.4, panning=0.3, zoom=0.2, cut_similarity=0.6)
        baseline = pacing_curve(self._uniform_film(**base))[0][1]
        for key, delta in (("movement", 0.3), ("panning", 0.3), ("zoom", 0.3)):
            bumped = dict(base, **{key: base[key] + delta})
            assert pacing_curve(self._uniform_film(**bumped))[0][1] >= baseline
        less_similar = dict(base, cut_similarity=0.2)
        assert pacing_curve(self._uniform_film(**less_similar))[0][1] >= baseline


class TestSegmentation:
    def test_two_character_boundary(self):
        a = load_analysis(two_character_film(boundary=30.0))
        profiles = identify_main_characters(a)
        segments = segment_film(a, profiles)
        assert len(segments) == 2
        assert abs(segments[0].end - 30.0) <= 0.5
        assert segments[0].dominant_character == "A"
        assert segments[0].dominant_emotion == "happy"
        assert segments[1].dominant_character == "B"
        assert segments[1].dominant_emotion == "sad"

    def test_constant_film_single_segment(self):
        a = load_analysis(two_character_film(boundary=60.0, duration=60.0))
        segments = segment_film(a, identify_main_characters(a))
        assert len(segments) == 1
        assert segments[0].start == 0.0
        assert segments[0].end == 60.0

    def test_flicker_suppressed(self):
        frames = []
        t = 0.0
        while t < 60.0:
            emotion = "sad" if 20.0 <= t < 21.0 else "happy"
            frames.append(make_frame(t, [make_face("A", emotion)]))
            t += 0.25
        a = load_analysis(film_doc(frames, 60.0))
        segments = segment_film(a, identify_main_characters(a),
                                min_segment_len=4.0)
        assert len(segments) == 1

    def test_emotion_change_with_margin(self):
        frames = []
        t = 0.0
        while t < 60.0:
            emotion = "happy" if t < 30.0 else "angry"
            frames.append(make_frame(t, [make_face("A", emotion)]))
            t += 0.25
        a = load_analysis(film_doc(frames, 60.0))
        segments = segment_film(a, identify_main_characters(a))
        assert len(segments) == 2
        assert segments[0].dominant_emotion == "happy"
        assert segments[1].dominant_emotion == "angry"

    def test_segments_tile_film(self, fixture_film_doc):
        a = load_analysis(fixture_film_doc)
        segments = segment_film(a, identify_main_characters(a))
        assert segments[0].start == 0.0
        assert segments[-1].end == a.duration
        for left, right in zip(segments, segments[1:]):
            assert left.end == right.start
        assert all(s.length >= 4.0 for s in segments)

    def test_fixture_film_annotations(self, fixture_film_doc):
        a = load_analysis(fixture_film_doc)
        segments = segment_film(a, identify_main_characters(a))
        characterless = [s for s in segments if s.dominant_character is None]
        assert characterless, "expected a faceless span"
        conflicted = [s for s in segments
                      if s.secondary_character is not None
                      and s.secondary_emotion != s.dominant_emotion]
        assert conflicted

    def test_pacing_mean_recorded(self, fixture_film_doc):
        a = load_analysis(fixture_film_doc)
        for seg in segment_film(a, identify_main_characters(a)):
            assert 0.0 <= seg.pacing <= 1.0
            assert math.isfinite(seg.pacing)
