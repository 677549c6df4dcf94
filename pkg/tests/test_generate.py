"""Markov generation, Euclidean rhythms, pulse mapping, cluster chords."""

import math
from itertools import combinations

import pytest

from cuescore.corpus import (
    detect_tonic,
    format_chord_symbol,
    parse_chord_sheet,
    parse_melody_corpus,
    transpose_to_c,
)
from cuescore.generate import (
    BadArity,
    InsufficientData,
    embodied_chords,
    euclidean_rhythm,
    generate_chord_pool,
    generate_melody_pool,
    movement_to_pulses,
    sample_markov,
    train_markov,
)
from cuescore.seeds import SeededRng


class TestTrainMarkov:
    def test_single_continuation(self):
        m = train_markov([["C", "D", "E", "F"]], order=3)
        assert m.transitions[("C", "D", "E")] == {"F": 1.0}

    def test_equal_counts(self):
        m = train_markov([["A", "B"], ["A", "C"]], order=1)
        assert m.transitions[("A",)] == {"B": 0.5, "C": 0.5}

    def test_insufficient_data(self):
        with pytest.raises(InsufficientData):
            train_markov([["a", "b", "c", "d"]], order=5)

    def test_distributions_normalized(self, melody_corpus):
        m = train_markov([t.pitches() for t in melody_corpus], order=3)
        for dist in m.transitions.values():
            assert sum(dist.values()) == pytest.approx(1.0, abs=1e-9)

    def test_no_cross_sequence_contexts(self):
        m = train_markov([["A", "B"], ["C", "D"]], order=1)
        assert ("B",) not in m.counts  # B only ends a sequence


class TestSampleMarkov:
    def test_deterministic_chain(self):
        m = train_markov([["C", "D", "E", "F"]], order=3)
        for seed in (0, 1, 99):
            assert sample_markov(m, 4, SeededRng(seed)) == ["C", "D", "E", "F"]

    def test_same_seed_same_output(self, melody_corpus):
        m = train_markov([t.pitches() for t in melody_corpus], order=3)
        a = sample_markov(m, 40, SeededRng(11))
        b = sample_markov(m, 40, SeededRng(11))
        assert a == b

    def test_empirical_frequency(self):
        m = train_markov([["A", "B"], ["A", "C"]], order=1)
        rng = SeededRng(123)
        n = 10_000
        count_b = sum(sample_markov(m, 2, rng.substream(i))[1] == "B"
                      for i in range(n))
        assert abs(count_b / n - 0.5) <= 0.02

    def test_pairs_exist_in_corpus(self, melody_corpus):
        sequences = [t.pitches() for t in melody_corpus]
        m = train_markov(sequences, order=3)
        grams = set()
        for seq in sequences:
            for i in range(len(seq) - 3):
                grams.add(tuple(seq[i:i + 4]))
        out = sample_markov(m, 60, SeededRng(5))
        for i in range(len(out) - 3):
            assert tuple(out[i:i + 4]) in grams


class TestMelodyPool:
    def test_empty_count(self, melody_corpus):
        assert generate_melody_pool(melody_corpus, 0, SeededRng(1)) == []

    def test_shape(self, melody_corpus):
        pool = generate_melody_pool(melody_corpus, 25, SeededRng(42))
        assert len(pool) == 25
        for m in pool:
            assert m.length_bars == 8
            assert m.meter == (4, 4)
            assert m.events[-1].end == 8 * 4 * 480
            assert min(m.pitches()) >= 60 and max(m.pitches()) <= 84

    def test_ngram_containment(self, melody_corpus):
        normalized = [transpose_to_c(t, register=(60, 84))
                      for t in melody_corpus]
        pitch_grams = set()
        rhythm_grams = set()
        for t in normalized:
            p, d = t.pitches(), t.durations()
            pitch_grams.update(tuple(p[i:i + 4]) for i in range(len(p) - 3))
            rhythm_grams.update(tuple(d[i:i + 6]) for i in range(len(d) - 5))
        pool = generate_melody_pool(melody_corpus, 40, SeededRng(42))
        for m in pool:
            p = m.pitches()
            for i in range(len(p) - 3):
                assert tuple(p[i:i + 4]) in pitch_grams
            # The final duration is cut to close bar 8, so rhythm windows
            # stop one event earlier.
            d = m.durations()[:-1]
            for i in range(len(d) - 5):
                assert tuple(d[i:i + 6]) in rhythm_grams

    def test_single_tune_corpus(self, melody_corpus):
        tune = [melody_corpus[0]]
        normalized = transpose_to_c(tune[0], register=(60, 84))
        p = normalized.pitches()
        grams = {tuple(p[i:i + 4]) for i in range(len(p) - 3)}
        pool = generate_melody_pool(tune, 5, SeededRng(3))
        for m in pool:
            out = m.pitches()
            for i in range(len(out) - 3):
                assert tuple(out[i:i + 4]) in grams

    def test_reproducible(self, melody_corpus):
        a = generate_melody_pool(melody_corpus, 30, SeededRng(42))
        b = generate_melody_pool(melody_corpus, 30, SeededRng(42))
        assert a == b

    def test_empty_corpus(self):
        with pytest.raises(InsufficientData):
            generate_melody_pool([], 5, SeededRng(1))


class TestChordPool:
    def test_bigram_containment_single_progression(self):
        corpus = parse_chord_sheet("C | F | G | C")
        pool = generate_chord_pool(corpus, 50, SeededRng(5))
        names = [format_chord_symbol(c) for c in corpus[0].chords()]
        loop_bigrams = set(zip(names, names[1:] + names[:1]))
        for p in pool:
            seq = [format_chord_symbol(c) for c in p.chords()]
            for pair in zip(seq, seq[1:]):
                assert pair in loop_bigrams

    def test_count_and_tonic(self, chord_corpus):
        pool = generate_chord_pool(chord_corpus, 200, SeededRng(9))
        assert len(pool) == 200
        assert all(detect_tonic(p) == 0 for p in pool)
        assert all(4 <= len(p.bars) <= 16 for p in pool)

    def test_reproducible(self, chord_corpus):
        a = generate_chord_pool(chord_corpus, 40, SeededRng(1))
        b = generate_chord_pool(chord_corpus, 40, SeededRng(1))
        assert a == b


def brute_force_even_patterns(k: int, n: int) -> set[tuple[int, ...]]:
    """All k-of-n onset patterns maximizing pairwise chordal spread.

    The objective sums sin(pi * d / n) over the circular distances d of all
    onset pairs, which strictly favors maximally even necklaces; the set of
    argmax placements is exactly the rotations/reflections of E(k, n).
    """
    if k == 0:
        return {(0,) * n}
    best_score = -1.0
    best: set[tuple[int, ...]] = set()
    for onsets in combinations(range(n), k):
        score = sum(math.sin(math.pi * ((b - a) % n) / n)
                    for i, a in enumerate(onsets) for b in onsets[i + 1:])
        if score > best_score + 1e-9:
            best_score = score
            best = set()
        if score >= best_score - 1e-9:
            pattern = [0] * n
            for o in onsets:
                pattern[o] = 1
            best.add(tuple(pattern))
    return best


class TestEuclideanRhythm:
    def test_saturation(self):
        assert euclidean_rhythm(4, 4).pattern == (1, 1, 1, 1)

    def test_single_onset(self):
        assert euclidean_rhythm(1, 4).pattern == (1, 0, 0, 0)

    def test_classic_three_eight(self):
        assert "".join(map(str, euclidean_rhythm(3, 8).pattern)) == "10010010"

    def test_bad_arity(self):
        with pytest.raises(BadArity):
            euclidean_rhythm(5, 4)
        with pytest.raises(BadArity):
            euclidean_rhythm(1, 0)

    def test_matches_brute_force_up_to_16(self):
        for n in range(1, 17):
            for k in range(0, n + 1):
                pattern = euclidean_rhythm(k, n).pattern
                assert sum(pattern) == k
                if k > 0:
                    assert pattern[0] == 1
                assert pattern in brute_force_even_patterns(k, n), (k, n)

    def test_min_gap_is_maximal(self):
        # Min circular inter-onset distance must equal floor(n / k).
        for n in range(2, 17):
            for k in range(1, n + 1):
                pattern = euclidean_rhythm(k, n).pattern
                onsets = [i for i, b in enumerate(pattern) if b]
                gaps = [b - a for a, b in
                        zip(onsets, onsets[1:] + [onsets[0] + n])]
                assert min(gaps) == n // k, (k, n)


class TestMovementToPulses:
    @pytest.mark.parametrize("movement,n,expected", [
        (0.0, 16, 1), (1.0, 16, 16), (0.5, 8, 5), (0.25, 5, 2), (0.5, 1, 1),
    ])
    def test_mapping(self, movement, n, expected):
        assert movement_to_pulses(movement, n) == expected

    def test_bounds(self):
        for n in (1, 4, 9, 16):
            for step in range(21):
                k = movement_to_pulses(step / 20, n)
                assert 1 <= k <= n


class TestEmbodiedChords:
    def test_contains_semitone_cluster(self):
        assert (0, 1, 5) in embodied_chords(0, 3)

    def test_excludes_plain_major_triad(self):
        assert (0, 4, 7) not in embodied_chords(0, 3)

    def test_matches_exhaustive_enumeration(self):
        for root in (0, 5, 11):
            for size in (3, 4):
                expected = []
                for combo in combinations([p for p in range(12) if p != root],
                                          size - 1):
                    pcs = tuple(sorted((root,) + combo))
                    if any(min((a - b) % 12, (b - a) % 12) == 1
                           for a, b in combinations(pcs, 2)):
                        expected.append(pcs)
                assert embodied_chords(root, size) == sorted(expected)

    def test_all_contain_root(self):
        for pcs in embodied_chords(7, 4):
            assert 7 in pcs

    def test_size_validated(self):
        with pytest.raises(ValueError):
            embodied_chords(0, 5)
