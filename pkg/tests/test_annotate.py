"""Feature annotation: consonance scores, melody vectors, manifests."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from cuescore.annotate import (
    AnnotationVector,
    FIELD_NAMES,
    TooShort,
    annotate_melody,
    annotate_progression,
    build_melody_manifest,
    build_progression_manifest,
    chord_consonance,
    dump_manifest,
    load_manifest,
    melody_from_notation,
    progression_from_notation,
    progression_vector,
)
from cuescore.corpus import Melody, NoteEvent, parse_chord_sheet, parse_chord_symbol


class TestChordConsonance:
    @pytest.mark.parametrize("token,score", [
        ("Dm7", 0.0), ("D7", 0.5), ("Dbm", 1.0),
        ("Em7", 0.0), ("C", 0.0), ("Cm", 0.0),  # C minor fits the minor scale
        ("F#", 1.0),
    ])
    def test_reference_scores(self, token, score):
        assert chord_consonance(parse_chord_symbol(token)) == score

    def test_best_of_both_scales(self):
        # Eb major is foreign to C major but native to C natural minor.
        assert chord_consonance(parse_chord_symbol("Eb")) == 0.0


class TestAnnotateProgression:
    def test_worked_example(self):
        (p,) = parse_chord_sheet("C | F | G | C")
        consonance, variation = annotate_progression(p)
        assert consonance == 0.0
        assert variation == pytest.approx(2 / 3)

    def test_single_chord_repeated(self):
        (p,) = parse_chord_sheet("C | C | C | C")
        assert annotate_progression(p)[1] == 0.0

    def test_all_distinct(self):
        (p,) = parse_chord_sheet("C | Dm | Em | F")
        assert annotate_progression(p)[1] == 1.0

    def test_counts_chords_not_bars(self):
        (p,) = parse_chord_sheet("Dm7 G7 | C")
        consonance, variation = annotate_progression(p)
        assert consonance == 0.0
        assert variation == 1.0


def quarters(pitches, duration=480, start=0):
    events = []
    onset = start
    for p in pitches:
        events.append(NoteEvent(onset, duration, p))
        onset += duration
    bars = max(1, -(-onset // 1920))
    return Melody(tuple(events), bars, (4, 4))


class TestAnnotateMelody:
    def test_ascending_scale(self):
        m = quarters([60, 62, 64, 65, 67, 69, 71, 72])
        v = annotate_melody(m)
        assert v.contour_ascending == 1.0
        assert v.contour_descending == 0.0
        assert v.contour_variation == 0.0
        assert v.rhythm_regularity == 1.0
        assert v.harmony_consonance == 0.0  # fully in-scale

    def test_repeated_pitch(self):
        m = Melody((NoteEvent(0, 480, 60), NoteEvent(480, 240, 60),
                    NoteEvent(720, 960, 60), NoteEvent(1680, 240, 60)), 1)
        v = annotate_melody(m)
        assert v.pitch_variation == 0.0
        assert v.interval_size == 0.0
        assert v.contour_ascending == 0.0 and v.contour_descending == 0.0

    def test_alternating_contour(self):
        m = quarters([60, 62, 60, 62, 60, 62, 60, 62])
        assert annotate_melody(m).contour_variation == 1.0

    def test_out_of_scale_notes_raise_dissonance(self):
        clean = annotate_melody(quarters([60, 62, 64, 65]))
        spiky = annotate_melody(quarters([60, 61, 66, 65]))
        assert spiky.harmony_consonance > clean.harmony_consonance

    def test_tempo_window_for_quarters(self):
        v = annotate_melody(quarters([60, 62, 64, 65, 67, 69, 71, 72]))
        assert v.tempo_min == pytest.approx(60.0)
        assert v.tempo_max == pytest.approx(200.0)

    def test_too_short(self):
        with pytest.raises(TooShort):
            annotate_melody(Melody((NoteEvent(0, 480, 60),), 1))

    def test_octave_invariant_fields(self):
        m = quarters([60, 62, 64, 62, 60, 64, 65, 67])
        up = quarters([p + 12 for p in m.pitches()])
        a, b = annotate_melody(m), annotate_melody(up)
        for name in ("harmony_consonance", "contour_ascending",
                     "contour_descending", "contour_variation",
                     "interval_size", "rhythm_regularity"):
            assert getattr(a, name) == getattr(b, name)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.integers(21, 100), min_size=2, max_size=24),
           st.lists(st.sampled_from([120, 240, 480, 720, 960]),
                    min_size=2, max_size=24))
    def test_bounds_fuzz(self, pitches, durations):
        n = min(len(pitches), len(durations))
        events = []
        onset = 0
        for p, d in zip(pitches[:n], durations[:n]):
            events.append(NoteEvent(onset, d, p))
            onset += d
        m = Melody(tuple(events), max(1, -(-onset // 1920)), (4, 4))
        v = annotate_melody(m)
        for name in FIELD_NAMES:
            assert math.isfinite(getattr(v, name))
        assert 0.0 <= v.contour_ascending + v.contour_descending <= 1.0
        assert v.tempo_min <= v.tempo_max
        assert -1.0 <= v.interval_direction <= 1.0

    def test_pool_matches_transposed_pool(self, small_pools):
        # Annotating a pool progression equals annotating its normalized form:
        # pools are already in C, so normalization is the identity.
        from cuescore.corpus import transpose_to_c
        _, candidates = load_manifest(small_pools.progression_manifest)
        for c in candidates[:20]:
            p = progression_from_notation(c.notation)
            assert annotate_progression(p) == annotate_progression(transpose_to_c(p))


class TestManifests:
    def test_melody_round_trip(self, melody_corpus):
        manifest = build_melody_manifest(melody_corpus[:4], seed=9)
        kind, candidates = load_manifest(dump_manifest(manifest))
        assert kind == "melody"
        assert [c.id for c in candidates] == [f"mel-{i:04d}" for i in range(4)]
        for c, original in zip(candidates, melody_corpus[:4]):
            rebuilt = melody_from_notation(c.notation)
            assert rebuilt.pitches() == original.pitches()
            assert rebuilt.durations() == original.durations()
            assert c.annotations == annotate_melody(original)

    def test_progression_round_trip(self, chord_corpus):
        manifest = build_progression_manifest(chord_corpus[:5], seed=3)
        kind, candidates = load_manifest(dump_manifest(manifest))
        assert kind == "progression"
        for c, original in zip(candidates, chord_corpus[:5]):
            assert progression_from_notation(c.notation) == original
            assert c.annotations == progression_vector(original)

    def test_version_checked(self):
        with pytest.raises(ValueError):
            load_manifest({"version": 99, "kind": "melody", "candidates": []})

    def test_vector_dict_round_trip(self):
        v = annotate_melody(quarters([60, 64, 67, 72]))
        assert AnnotationVector.from_dict(v.as_dict()) == v
