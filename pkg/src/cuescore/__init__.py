"""cuescore: leitmotif-based film score generation from visual analysis.

The pipeline reads a per-frame film analysis (faces, emotion distributions,
camera aesthetics), identifies the main characters, generates annotated
pools of candidate melodies and chord progressions, binds a leitmotif to
each character, and renders a layered MIDI score with a chord sheet and a
cue timeline. See the demos/ directory for narrative walkthroughs.
"""

from .annotate import (
    AnnotationVector,
    annotate_melody,
    annotate_progression,
    chord_consonance,
)
from .assemble import (
    Cue,
    CuePlan,
    build_cue_plan,
    counter_melody,
    emotion_target,
    fit_tempo,
    make_variation,
    reconcile,
    reharmonize,
    select_candidates,
)
from .config import EngineConfig, EmotionMusicMapping, default_mapping, load_config
from .corpus import (
    ChordProgression,
    ChordSymbol,
    Melody,
    NoteEvent,
    parse_chord_sheet,
    parse_chord_symbol,
    parse_melody_corpus,
    transpose_to_c,
)
from .emit import Score, write_chord_sheet, write_midi, write_timeline
from .generate import (
    MarkovModel,
    RhythmPattern,
    embodied_chords,
    euclidean_rhythm,
    generate_chord_pool,
    generate_melody_pool,
    movement_to_pulses,
    sample_markov,
    train_markov,
)
from .pipeline import run_pipeline
from .seeds import SeededRng
from .vision import (
    EmotionVector,
    FilmAnalysis,
    SegmentAnnotation,
    emotion_arc,
    identify_main_characters,
    load_analysis,
    pacing_curve,
    segment_film,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotationVector", "annotate_melody", "annotate_progression",
    "chord_consonance", "Cue", "CuePlan", "build_cue_plan", "counter_melody",
    "emotion_target", "fit_tempo", "make_variation", "reconcile",
    "reharmonize", "select_candidates", "EngineConfig", "EmotionMusicMapping",
    "default_mapping", "load_config", "ChordProgression", "ChordSymbol",
    "Melody", "NoteEvent", "parse_chord_sheet", "parse_chord_symbol",
    "parse_melody_corpus", "transpose_to_c", "Score", "write_chord_sheet",
    "write_midi", "write_timeline", "MarkovModel", "RhythmPattern",
    "embodied_chords", "euclidean_rhythm", "generate_chord_pool",
    "generate_melody_pool", "movement_to_pulses", "sample_markov",
    "train_markov", "run_pipeline", "SeededRng", "EmotionVector",
    "FilmAnalysis", "SegmentAnnotation", "emotion_arc",
    "identify_main_characters", "load_analysis", "pacing_curve",
    "segment_film",
]
