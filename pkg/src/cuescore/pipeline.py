"""End-to-end score generation: analysis + corpora + seed -> artifacts.

This is the glue the CLI and the project service share. Everything here is
a pure function of its inputs, so a fixed seed reproduces the same bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from . import annotate, assemble, emit, generate, vision
from .config import EngineConfig
from .corpus import (
    ChordProgression,
    Melody,
    parse_chord_sheet,
    parse_melody_corpus,
)
from .seeds import SeededRng


def default_melody_corpus() -> str:
    return resources.files("cuescore.data").joinpath("melodies.abc").read_text()


def default_chord_corpus() -> str:
    return resources.files("cuescore.data").joinpath("progressions.txt").read_text()


@dataclass(frozen=True)
class Pools:
    melody_manifest: dict
    progression_manifest: dict

    def melodies(self) -> dict[str, Melody]:
        _, candidates = annotate.load_manifest(self.melody_manifest)
        return {c.id: annotate.melody_from_notation(c.notation) for c in candidates}

    def progressions(self) -> dict[str, ChordProgression]:
        _, candidates = annotate.load_manifest(self.progression_manifest)
        return {c.id: annotate.progression_from_notation(c.notation)
                for c in candidates}


def build_pools(melody_corpus_text: str, chord_corpus_text: str, seed: int,
                config: EngineConfig) -> Pools:
    """Parse corpora and generate the annotated candidate pools."""
    melodies = parse_melody_corpus(melody_corpus_text)
    progressions = parse_chord_sheet(chord_corpus_text)
    rng = SeededRng(seed)
    melody_pool = generate.generate_melody_pool(
        melodies, config.melody_pool_size, rng)
    chord_pool = generate.generate_chord_pool(
        progressions, config.chord_pool_size, rng)
    return Pools(
        melody_manifest=annotate.build_melody_manifest(melody_pool, seed),
        progression_manifest=annotate.build_progression_manifest(chord_pool, seed),
    )


def candidate_sets(profiles: list[vision.CharacterProfile], pools: Pools,
                   config: EngineConfig) -> dict[str, dict[str, list[str]]]:
    """Per character, the ranked melody and progression candidate ids.

    The most present character is matched to its own emotional profile;
    the others additionally contrast against the lead's target.
    """
    _, mel_candidates = annotate.load_manifest(pools.melody_manifest)
    _, prog_candidates = annotate.load_manifest(pools.progression_manifest)
    k = config.candidates_per_character
    result: dict[str, dict[str, list[str]]] = {}
    lead_target = None
    for rank, profile in enumerate(profiles):
        target = assemble.emotion_target(profile.aggregate, config.mapping)
        contrast = lead_target if rank > 0 else None
        kwargs = dict(fit_weight=config.fit_weight,
                      contrast_weight=config.contrast_weight,
                      tempo_weight=config.tempo_field_weight)
        result[profile.id] = {
            "melodies": assemble.select_candidates(
                mel_candidates, target, k, contrast, **kwargs),
            "progressions": assemble.select_candidates(
                prog_candidates, target, k, contrast, **kwargs),
        }
        if rank == 0:
            lead_target = target
    return result


def auto_assign(profiles: list[vision.CharacterProfile], pools: Pools,
                config: EngineConfig) -> dict[str, dict[str, str]]:
    """Rank-1 candidate per character, keeping melody choices distinct."""
    sets = candidate_sets(profiles, pools, config)
    taken: set[str] = set()
    assignment = {}
    for profile in profiles:
        melody_id = next((mid for mid in sets[profile.id]["melodies"]
                          if mid not in taken),
                         sets[profile.id]["melodies"][0])
        taken.add(melody_id)
        assignment[profile.id] = {
            "melody": melody_id,
            "progression": sets[profile.id]["progressions"][0],
        }
    return assignment


@dataclass(frozen=True)
class RenderResult:
    midi: bytes
    chord_sheet: str
    timeline: dict


def render_score(segments: list[vision.SegmentAnnotation],
                 assignment: dict[str, dict[str, str]],
                 profiles: list[vision.CharacterProfile],
                 pools: Pools, seed: int, config: EngineConfig) -> RenderResult:
    """Build the cue plan and serialize all three artifacts."""
    plan = assemble.build_cue_plan(
        segments, assignment,
        melody_lookup=pools.melodies(),
        progression_lookup=pools.progressions(),
        mapping=config.mapping,
        rng=SeededRng(seed).substream("plan"),
        character_order=[p.id for p in profiles],
    )
    score = emit.Score(plan, layers={
        "melody": config.layer_melody,
        "counter": config.layer_counter,
        "chords": config.layer_chords,
        "bass": config.layer_bass,
    })
    return RenderResult(
        midi=emit.write_midi(score),
        chord_sheet=emit.write_chord_sheet(score),
        timeline=emit.write_timeline(score),
    )


@dataclass(frozen=True)
class PipelineResult:
    analysis: vision.FilmAnalysis
    profiles: list[vision.CharacterProfile]
    segments: list[vision.SegmentAnnotation]
    pools: Pools
    assignment: dict[str, dict[str, str]]
    render: RenderResult | None


def run_pipeline(analysis_doc, melody_corpus_text: str, chord_corpus_text: str,
                 seed: int, config: EngineConfig | None = None,
                 render: bool = True) -> PipelineResult:
    """The whole chain with automatic rank-1 leitmotif selection."""
    config = config or EngineConfig()
    analysis = vision.load_analysis(analysis_doc)
    profiles = vision.identify_main_characters(analysis, config.main_characters)
    segments = vision.segment_film(
        analysis, profiles,
        stride=config.stride, window=config.smoothing_window,
        min_segment_len=config.min_segment_len,
        emotion_margin=config.emotion_margin,
        pacing_weights=config.pacing_weights,
    )
    pools = build_pools(melody_corpus_text, chord_corpus_text, seed, config)
    assignment = auto_assign(profiles, pools, config)
    result = None
    if render:
        result = render_score(segments, assignment, profiles, pools, seed, config)
    return PipelineResult(analysis, profiles, segments, pools, assignment, result)
