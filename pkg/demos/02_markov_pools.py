"""Walkthrough: seeded Markov pools of candidate melodies and progressions.

Melodies come from an order-3 pitch chain zipped with an order-5 rhythm
chain; progressions from an order-2 chain over (chord, bar-parity) tokens.
Every n-gram a candidate contains also occurs in the training corpus, and
the same seed always reproduces the same pool.
"""

from collections import Counter

from cuescore import (
    SeededRng,
    generate_chord_pool,
    generate_melody_pool,
    parse_chord_sheet,
    parse_melody_corpus,
    transpose_to_c,
)
from cuescore.corpus import format_progression
from cuescore.pipeline import default_chord_corpus, default_melody_corpus

corpus = parse_melody_corpus(default_melody_corpus())
pool = generate_melody_pool(corpus, count=200, rng=SeededRng(42))
print(f"melody pool: {len(pool)} candidates, all "
      f"{set(m.length_bars for m in pool)} bars")

normalized = [transpose_to_c(m, register=(60, 84)) for m in corpus]
grams = set()
for tune in normalized:
    p = tune.pitches()
    grams.update(tuple(p[i:i + 4]) for i in range(len(p) - 3))
novel = sum(1 for m in pool for i in range(len(m.events) - 3)
            if tuple(m.pitches()[i:i + 4]) not in grams)
print(f"  pitch 4-grams outside the corpus: {novel}")

again = generate_melody_pool(corpus, count=200, rng=SeededRng(42))
print(f"  identical pool on re-run with the same seed: {pool == again}")

chords = parse_chord_sheet(default_chord_corpus())
chord_pool = generate_chord_pool(chords, count=1000, rng=SeededRng(42))
lengths = Counter(len(p.bars) for p in chord_pool)
print(f"\nchord pool: {len(chord_pool)} progressions, bar counts {dict(sorted(lengths.items()))}")
print(f"  example: {format_progression(chord_pool[3])}")
