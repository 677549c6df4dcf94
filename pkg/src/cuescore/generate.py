"""Candidate material generation: Markov melodies, chord pools, rhythms.

Melodies use an order-3 model for pitch and an independent order-5 model for
duration, both trained on the normalized corpus and zipped into 8-bar 4/4
phrases. Chord progressions use an order-2 model over (chord, bar-parity)
tokens with the corpus read as loops. Sampling looks one step ahead and
avoids continuations that would strand the chain, so generated n-grams stay
inside the training corpus; a true dead end falls back to shorter contexts.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations

from .corpus import (
    ChordProgression,
    Melody,
    NoteEvent,
    format_chord_symbol,
    parse_chord_symbol,
    transpose_to_c,
)
from .seeds import SeededRng

EIGHT_BARS_TICKS = 8 * 4 * 480

CHORD_BAR_CHOICES = (4, 8, 12, 16)


class InsufficientData(ValueError):
    """The corpus has no sequence longer than the requested model order."""


class BadArity(ValueError):
    """More pulses requested than steps available."""


class _Start:
    """Padding symbol for left contexts shorter than the model order."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "START"


START = _Start()


@dataclass
class MarkovModel:
    """Empirical n-gram transition counts with suffix tables for backoff."""

    order: int
    counts: dict[tuple, Counter]

    def __post_init__(self):
        self._suffix: list[dict[tuple, Counter]] = [dict() for _ in range(self.order + 1)]
        self._suffix[self.order] = self.counts
        for context, counter in self.counts.items():
            for k in range(self.order):
                suffix = context[self.order - k:]
                bucket = self._suffix[k].setdefault(suffix, Counter())
                bucket.update(counter)

    @property
    def alphabet(self) -> list:
        symbols = set()
        for counter in self.counts.values():
            symbols.update(counter)
        return sorted(symbols)

    @property
    def transitions(self) -> dict[tuple, dict]:
        """Normalized transition probabilities for full-order contexts."""
        out = {}
        for context, counter in self.counts.items():
            total = sum(counter.values())
            out[context] = {sym: c / total for sym, c in counter.items()}
        return out

    def distribution(self, context: tuple) -> Counter:
        """Counts for the longest known suffix of `context` (backoff)."""
        for k in range(self.order, -1, -1):
            suffix = context[len(context) - k:]
            counter = self._suffix[k].get(suffix)
            if counter:
                return counter
        raise InsufficientData("model has no transitions")

    def has_continuation(self, context: tuple) -> bool:
        return context in self.counts


def train_markov(sequences: list[list], order: int) -> MarkovModel:
    """Estimate a Markov model of the given order from symbol sequences.

    Contexts never cross sequence boundaries; contexts shorter than the
    order are padded on the left with START.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if not any(len(seq) > order for seq in sequences):
        raise InsufficientData(f"no sequence longer than order {order}")
    counts: dict[tuple, Counter] = {}
    pad = (START,) * order
    for seq in sequences:
        padded = pad + tuple(seq)
        for i, symbol in enumerate(seq):
            context = padded[i:i + order]
            counts.setdefault(context, Counter())[symbol] += 1
    return MarkovModel(order, counts)


def _walk_chain(model: MarkovModel, rng: SeededRng, is_final, refine=None,
                max_backtracks: int = 5000, max_length: int = 100_000) -> list:
    """Randomized depth-first walk over the model.

    `is_final(pos, symbol, prefix)` says whether choosing `symbol` would
    complete the sequence. At every other step, only symbols whose successor
    context can continue are acceptable; when none can, the walk backtracks
    and resamples earlier choices so the emitted n-grams stay inside the
    corpus. A spent backtrack budget degrades to plain shortened-context
    backoff, which always makes progress. `refine(pos, items)` may reorder
    or filter candidates but must never return an empty list.
    """
    order = model.order
    sequence: list = []
    contexts = [(START,) * order]
    frames: list[list] = []
    backtracks = 0
    degraded = False

    def candidates(pos: int) -> list:
        counter = model.distribution(contexts[pos])
        items = sorted(counter.items(), key=lambda kv: repr(kv[0]))
        if refine is not None:
            items = refine(pos, items)
        if degraded:
            return list(items)
        tail = contexts[pos][1:]
        # May be empty: that signals a dead end and the caller backtracks.
        return [
            (s, w) for s, w in items
            if is_final(pos, s, sequence) or model.has_continuation(tail + (s,))
        ]

    while True:
        pos = len(sequence)
        if pos >= max_length:
            raise RuntimeError("chain walk exceeded maximum length")
        if pos == len(frames):
            frames.append(candidates(pos))
        remaining = frames[pos]
        if not remaining:
            if degraded or pos == 0 or backtracks >= max_backtracks:
                degraded = True
                frames[pos] = candidates(pos)
                remaining = frames[pos]
            else:
                backtracks += 1
                frames.pop()
                sequence.pop()
                contexts.pop()
                continue
        weights = [w for _, w in remaining]
        symbol = remaining.pop(rng.choice_index(weights))[0]
        if is_final(pos, symbol, sequence):
            return sequence + [symbol]
        sequence.append(symbol)
        contexts.append(contexts[-1][1:] + (symbol,))


def sample_markov(model: MarkovModel, length: int, rng: SeededRng) -> list:
    """Draw a sequence of exactly `length` symbols from the model."""
    if length < 1:
        raise ValueError("length must be >= 1")
    return _walk_chain(model, rng,
                       is_final=lambda pos, sym, prefix: pos == length - 1)


def generate_melody_pool(corpus: list[Melody], count: int,
                         rng: SeededRng) -> list[Melody]:
    """Sample `count` 8-bar 4/4 melodies from corpus-trained Markov models.

    The corpus is first normalized to C in the [60, 84] register so sampled
    pitch n-grams land there too. Durations come from an independent order-5
    chain; the final note is cut or stretched to close bar 8 exactly.
    """
    if not corpus:
        raise InsufficientData("empty melody corpus")
    normalized = [transpose_to_c(m, register=(60, 84)) for m in corpus]
    pitch_model = train_markov([m.pitches() for m in normalized], order=3)
    rhythm_model = train_markov([m.durations() for m in normalized], order=5)

    pool_rng = rng.substream("melody-pool")
    melodies = []
    for i in range(count):
        candidate_rng = pool_rng.substream(i)
        durations = _walk_chain(
            rhythm_model, candidate_rng.substream("rhythm"),
            is_final=lambda pos, d, prefix: sum(prefix) + d >= EIGHT_BARS_TICKS)
        durations[-1] -= sum(durations) - EIGHT_BARS_TICKS
        pitches = sample_markov(pitch_model, len(durations),
                                candidate_rng.substream("pitch"))
        events = []
        onset = 0
        for pitch, duration in zip(pitches, durations):
            events.append(NoteEvent(onset, duration, pitch))
            onset += duration
        melodies.append(Melody(tuple(events), 8, (4, 4), key_tonic=0))
    return melodies


def _progression_tokens(p: ChordProgression, order: int) -> list[tuple[str, int]]:
    """Flatten to (chord text, bar parity) tokens, unrolled as a loop."""
    tokens = [(format_chord_symbol(c), bar_i % 2)
              for bar_i, bar in enumerate(p.bars) for c in bar]
    if len(tokens) > order:
        tokens = tokens + tokens[:order]
    return tokens


def generate_chord_pool(corpus: list[ChordProgression], count: int = 1000,
                        rng: SeededRng | None = None) -> list[ChordProgression]:
    """Sample `count` progressions (4-16 bars, one chord per bar, tonic C).

    Training reads each corpus progression as a loop, which is how it is
    played; the final bar prefers a C-root chord so the output already sits
    in C, and every output is passed through key normalization regardless.
    """
    if rng is None:
        raise ValueError("rng is required")
    if not corpus:
        raise InsufficientData("empty chord corpus")
    normalized = [transpose_to_c(p) for p in corpus]
    model = train_markov([_progression_tokens(p, 2) for p in normalized], order=2)

    pool_rng = rng.substream("chord-pool")
    progressions = []
    for i in range(count):
        candidate_rng = pool_rng.substream(i)
        n_bars = candidate_rng.pick(CHORD_BAR_CHOICES)

        def refine(pos, items, last=n_bars - 1):
            on_parity = [it for it in items if it[0][1] == pos % 2] or items
            if pos == last:
                # Cadence preference: close on a C-root chord when possible.
                rooted = [it for it in on_parity
                          if parse_chord_symbol(it[0][0]).root == 0]
                return rooted or on_parity
            return on_parity

        tokens = _walk_chain(
            model, candidate_rng.substream("walk"),
            is_final=lambda pos, sym, prefix: pos == n_bars - 1,
            refine=refine)
        bars = tuple((parse_chord_symbol(tok[0]),) for tok in tokens)
        progressions.append(transpose_to_c(ChordProgression(bars)))
    return progressions


@dataclass(frozen=True)
class RhythmPattern:
    """k onsets spread over n steps with maximal evenness."""

    pulses: int
    steps: int
    pattern: tuple[int, ...]

    def __post_init__(self):
        if sum(self.pattern) != self.pulses or len(self.pattern) != self.steps:
            raise ValueError("pattern inconsistent with pulses/steps")

    def __str__(self):
        return "".join(str(b) for b in self.pattern)


def euclidean_rhythm(k: int, n: int) -> RhythmPattern:
    """Bjorklund's pairing construction of the Euclidean rhythm E(k, n)."""
    if n < 1:
        raise BadArity(f"steps {n} must be >= 1")
    if not 0 <= k <= n:
        raise BadArity(f"pulses {k} outside [0, {n}]")
    if k == 0:
        return RhythmPattern(0, n, (0,) * n)
    groups = [(1,)] * k
    remainder = [(0,)] * (n - k)
    while len(remainder) > 1:
        pairs = min(len(groups), len(remainder))
        paired = [groups[i] + remainder[i] for i in range(pairs)]
        leftover = groups[pairs:]
        remainder = leftover if leftover else remainder[pairs:]
        groups = paired
    pattern = tuple(bit for g in groups + remainder for bit in g)
    return RhythmPattern(k, n, pattern)


def movement_to_pulses(movement: float, n: int) -> int:
    """Map a [0,1] movement level to a pulse count in [1, n] (half-up)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    k = int(1 + movement * (n - 1) + 0.5)
    return max(1, min(n, k))


def embodied_chords(root: int, size: int) -> list[tuple[int, ...]]:
    """All size-3 or size-4 pitch-class sets on `root` containing a semitone.

    A qualifying set has at least one pair of pitch classes at circular
    distance 1. Sets are returned as sorted tuples in lexicographic order.
    """
    if size not in (3, 4):
        raise ValueError("size must be 3 or 4")
    if not 0 <= root <= 11:
        raise ValueError("root must be a pitch class")
    others = [pc for pc in range(12) if pc != root]
    result = []
    for combo in combinations(others, size - 1):
        pcs = tuple(sorted((root,) + combo))
        if any(min((a - b) % 12, (b - a) % 12) == 1
               for i, a in enumerate(pcs) for b in pcs[i + 1:]):
            result.append(pcs)
    result.sort()
    return result
