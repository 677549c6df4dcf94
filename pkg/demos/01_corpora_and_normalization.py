"""Walkthrough: parsing the training corpora and normalizing keys.

The engine learns from two plain-text corpora: folk tunes in an ABC subset
and jazz progressions in a chord-sheet format. Everything is transposed to
C before training so that harmonic analysis happens in one reference frame.
"""

from cuescore import parse_chord_sheet, parse_melody_corpus, transpose_to_c
from cuescore.corpus import PC_NAMES, detect_tonic, format_progression
from cuescore.pipeline import default_chord_corpus, default_melody_corpus

melodies = parse_melody_corpus(default_melody_corpus())
print(f"parsed {len(melodies)} tunes from the packaged melody corpus")
first = melodies[0]
print(f"  first tune: {len(first.events)} notes over {first.length_bars} bars "
      f"in {first.meter[0]}/{first.meter[1]}, tonic {PC_NAMES[first.key_tonic]}")

normalized = transpose_to_c(first)
print(f"  after normalization the tonic is {PC_NAMES[normalized.key_tonic]} "
      f"and the register sits in "
      f"[{min(normalized.pitches())}, {max(normalized.pitches())}]")

progressions = parse_chord_sheet(default_chord_corpus())
print(f"\nparsed {len(progressions)} chord progressions")
sample = progressions[20]
print(f"  e.g. {format_progression(sample)}  "
      f"(tonic {PC_NAMES[detect_tonic(sample)]})")
print(f"  in C: {format_progression(transpose_to_c(sample))}")

# Idempotence: normalizing twice changes nothing.
assert transpose_to_c(normalized) == normalized
print("\nnormalization is idempotent on every item")
