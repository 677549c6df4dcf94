"""Shared fixtures: synthetic films, packaged corpora, small pools."""

import json

import pytest

from cuescore import pipeline, vision
from cuescore.config import EngineConfig
from cuescore.corpus import parse_chord_sheet, parse_melody_corpus
from dataclasses import replace


def make_face(cid, emotion, weight=0.88, w=0.2, h=0.25):
    emotions = {k: (1.0 - weight) / 6 for k in vision.EMOTIONS}
    emotions[emotion] = weight
    return {"id": cid, "bbox": [0.4, 0.3, w, h], "emotions": emotions}


def make_frame(t, faces=(), **aesthetics):
    frame = {"t": round(t, 4), "faces": list(faces)}
    if aesthetics:
        frame["aesthetics"] = aesthetics
    return frame


def film_doc(frames, duration, fps=4.0):
    return {"fps": fps, "duration": duration, "frames": frames}


def two_character_film(boundary=30.0, duration=60.0, step=0.25):
    """Character A happy before `boundary`, B sad after."""
    frames = []
    t = 0.0
    while t < duration:
        if t < boundary:
            frames.append(make_frame(t, [make_face("A", "happy")]))
        else:
            frames.append(make_frame(t, [make_face("B", "sad")]))
        t += step
    return film_doc(frames, duration)


def fixture_film(duration=300.0, step=0.5):
    """Three characters, a characterless span, one conflicted span."""
    frames = []
    t = 0.0
    while t < duration:
        if t < 100:
            faces = [make_face("anna", "happy")]
        elif t < 110:
            faces = []
        elif t < 200:
            faces = [make_face("ben", "sad")]
        elif t < 250:
            faces = [make_face("anna", "happy"),
                     make_face("ben", "fear", w=0.15, h=0.2)]
        else:
            faces = [make_face("cara", "surprise")]
        movement = 0.8 if 200 <= t < 250 else 0.2
        frames.append(make_frame(t, faces, movement=movement, panning=0.1,
                                 zoom=0.0, cut_similarity=0.9))
        t += step
    return film_doc(frames, duration, fps=1.0 / step)


@pytest.fixture(scope="session")
def melody_corpus_text():
    return pipeline.default_melody_corpus()


@pytest.fixture(scope="session")
def chord_corpus_text():
    return pipeline.default_chord_corpus()


@pytest.fixture(scope="session")
def melody_corpus(melody_corpus_text):
    return parse_melody_corpus(melody_corpus_text)


@pytest.fixture(scope="session")
def chord_corpus(chord_corpus_text):
    return parse_chord_sheet(chord_corpus_text)


@pytest.fixture(scope="session")
def small_config():
    return replace(EngineConfig(), melody_pool_size=60, chord_pool_size=60)


@pytest.fixture(scope="session")
def small_pools(melody_corpus_text, chord_corpus_text, small_config):
    return pipeline.build_pools(melody_corpus_text, chord_corpus_text,
                                seed=7, config=small_config)


@pytest.fixture()
def fixture_film_doc():
    return fixture_film()


@pytest.fixture()
def fixture_film_json(tmp_path):
    path = tmp_path / "analysis.json"
    path.write_text(json.dumps(fixture_film()))
    return path
