"""Leitmotif selection and cue construction across the film timeline.

Candidates are scored against emotion-derived targets, melodies are
reconciled with their chord progressions (non-chord tones shifted along the
local contour), each segment gets a 2/4/8-measure variation at a fitted
tempo, and cues pick up counter-melodies or reharmonization from the
segment's emotional character.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .annotate import (
    AnnotationVector,
    FIELD_NAMES,
    PoolCandidate,
    TEMPO_CEIL,
    TEMPO_FLOOR,
    chord_consonance,
)
from .config import EmotionMusicMapping
from .corpus import ChordProgression, ChordSymbol, Melody, NoteEvent
from .seeds import SeededRng
from .vision import EMOTIONS, EmotionVector, SegmentAnnotation

BAR_TICKS = 4 * 480
STRONG_BEAT_OFFSETS = (0, 2 * 480)  # beats 1 and 3 in 4/4
MEASURE_CHOICES = (2, 4, 8)

DYNAMICS_VELOCITY = {"p": 48, "mf": 72, "f": 96}

# Quality substitution ladders, consonant end first.
_LADDER_MAJ = ("maj", "maj7", "dom7", "min7b5", "dim7")
_LADDER_MIN = ("min", "min7", "min7b5", "dim7")
_LADDER_POSITION = {
    "maj": (_LADDER_MAJ, 0), "maj6": (_LADDER_MAJ, 0), "sus2": (_LADDER_MAJ, 0),
    "sus4": (_LADDER_MAJ, 0), "aug": (_LADDER_MAJ, 0), "maj7": (_LADDER_MAJ, 1),
    "dom7": (_LADDER_MAJ, 2), "min7b5": (_LADDER_MIN, 2), "dim7": (_LADDER_MIN, 3),
    "min": (_LADDER_MIN, 0), "min6": (_LADDER_MIN, 0), "min7": (_LADDER_MIN, 1),
    "dim": (_LADDER_MIN, 2),
}


class PoolTooSmall(ValueError):
    """Fewer candidates than requested selections."""


class MissingAssignment(KeyError):
    """A main character has no leitmotif assignment."""

    def __init__(self, character_id: str):
        self.character_id = character_id
        super().__init__(character_id)


@dataclass(frozen=True)
class Cue:
    """One segment's placed music."""

    segment: SegmentAnnotation
    melody: Melody
    progression: ChordProgression
    tempo: int
    measures: int
    counter_melody: Melody | None
    dynamics: str
    articulation: str
    character: str | None
    emotion: str
    melody_id: str
    progression_id: str
    is_variation: bool
    loop_count: int

    def __post_init__(self):
        if self.measures not in MEASURE_CHOICES:
            raise ValueError(f"measures {self.measures} not in {MEASURE_CHOICES}")
        bar_seconds = 4 * 60.0 / self.tempo
        if self.duration_seconds > self.segment.length + bar_seconds + 1e-9:
            raise ValueError("cue overruns its segment by more than a bar")

    @property
    def duration_seconds(self) -> float:
        return self.measures * 4 * 60.0 / self.tempo


@dataclass(frozen=True)
class CuePlan:
    cues: tuple[Cue, ...]

    def __post_init__(self):
        starts = [c.segment.start for c in self.cues]
        if starts != sorted(starts):
            raise ValueError("cues out of segment order")


def emotion_target(profile: EmotionVector,
                   mapping: EmotionMusicMapping) -> AnnotationVector:
    """Blend per-emotion range midpoints, weighted by the emotion profile."""
    values = {}
    for name in FIELD_NAMES:
        total = 0.0
        for emotion, weight in zip(EMOTIONS, profile.values):
            total += weight * mapping.row(emotion).midpoint(name)
        values[name] = total
    return AnnotationVector(**values)


def _normalized(name: str, value: float) -> float:
    if name in ("tempo_min", "tempo_max"):
        return (value - TEMPO_FLOOR) / (TEMPO_CEIL - TEMPO_FLOOR)
    return value


def annotation_distance(a: AnnotationVector, b: AnnotationVector,
                        tempo_weight: float = 0.5) -> float:
    """Weighted Euclidean distance with tempo mapped onto the unit scale."""
    total = 0.0
    for name in FIELD_NAMES:
        w = tempo_weight if name.startswith("tempo_") else 1.0
        d = _normalized(name, getattr(a, name)) - _normalized(name, getattr(b, name))
        total += w * d * d
    return math.sqrt(total)


def select_candidates(candidates: list[PoolCandidate], target: AnnotationVector,
                      k: int = 3, contrast_against: AnnotationVector | None = None,
                      *, fit_weight: float = 1.0, contrast_weight: float = 0.5,
                      tempo_weight: float = 0.5) -> list[str]:
    """Rank candidates toward `target` (and away from `contrast_against`)."""
    if len(candidates) < k:
        raise PoolTooSmall(f"pool of {len(candidates)} cannot yield {k}")
    scored = []
    for c in candidates:
        score = fit_weight * annotation_distance(c.annotations, target, tempo_weight)
        if contrast_against is not None:
            score -= contrast_weight * annotation_distance(
                c.annotations, contrast_against, tempo_weight)
        scored.append((score, c.id))
    scored.sort()
    return [cid for _, cid in scored[:k]]


# --- melody / progression reconciliation -------------------------------------


def tile_progression(p: ChordProgression, bars: int) -> ChordProgression:
    """Repeat or truncate a progression to exactly `bars` bars."""
    slots = [p.bars[i % len(p.bars)] for i in range(bars)]
    return ChordProgression(tuple(slots), p.meter)


def chord_at(p: ChordProgression, tick: int) -> ChordSymbol:
    """The chord sounding at a tick, with the progression tiled as needed."""
    bar_i = (tick // BAR_TICKS) % len(p.bars)
    bar = p.bars[bar_i]
    if len(bar) == 1:
        return bar[0]
    return bar[0] if tick % BAR_TICKS < BAR_TICKS // 2 else bar[1]


def _is_strong(onset: int) -> bool:
    return onset % BAR_TICKS in STRONG_BEAT_OFFSETS


def _local_contour(pitches: list[int], i: int) -> int:
    """Direction of motion at note i on the original line; 0 when flat."""
    if i > 0 and pitches[i] != pitches[i - 1]:
        return 1 if pitches[i] > pitches[i - 1] else -1
    if i + 1 < len(pitches) and pitches[i + 1] != pitches[i]:
        return 1 if pitches[i + 1] > pitches[i] else -1
    return 0


def _nearest_chord_tone(pitch: int, tones: frozenset[int], direction: int,
                        max_shift: int = 3) -> int:
    """Closest in-range chord tone, preferring `direction` within the cap."""
    up = next((d for d in range(1, 12) if (pitch + d) % 12 in tones), None)
    down = next((d for d in range(1, 12) if (pitch - d) % 12 in tones), None)
    options = []
    if up is not None and up <= max_shift:
        options.append((pitch + up, up, 1))
    if down is not None and down <= max_shift:
        options.append((pitch - down, down, -1))
    if not options:
        # No tone within the cap; take the overall nearest (ties downward).
        if up is None:
            return pitch - down
        if down is None or up < down:
            return pitch + up
        return pitch - down
    if direction:
        preferred = [o for o in options if o[2] == direction]
        if preferred:
            return min(preferred, key=lambda o: o[1])[0]
    return min(options, key=lambda o: (o[1], o[2]))[0]


def reconcile(m: Melody, p: ChordProgression) -> Melody:
    """Shift melody notes onto the progression without touching the chords.

    Strong-beat notes must be chord tones; a weak-beat non-chord tone
    survives only as a stepwise passing tone (approached and left by at
    most two semitones on the original line). Shifts follow the local
    contour direction when a chord tone lies within three semitones that
    way, otherwise the nearest tone wins, ties resolving downward.
    """
    original = m.pitches()
    events = []
    for i, ev in enumerate(m.events):
        tones = chord_at(p, ev.onset).tones()
        if ev.pitch % 12 in tones:
            events.append(ev)
            continue
        if not _is_strong(ev.onset):
            approached = i > 0 and abs(original[i] - original[i - 1]) <= 2
            left = i + 1 < len(original) and abs(original[i + 1] - original[i]) <= 2
            if approached and left:
                events.append(ev)
                continue
        direction = _local_contour(original, i)
        events.append(replace(ev, pitch=_nearest_chord_tone(ev.pitch, tones, direction)))
    return Melody(tuple(events), m.length_bars, m.meter, m.key_tonic)


def fit_tempo(segment: SegmentAnnotation, emotion: str,
              mapping: EmotionMusicMapping) -> tuple[int, int]:
    """Pick (measures, BPM) whose cue length best matches the segment.

    Exhaustive over measures in {2,4,8} and integer tempi in the emotion's
    range; ties prefer more measures, then the slower count's lower tempo.
    """
    lo, hi = mapping.row(emotion).tempo
    target = segment.length
    best = None
    for measures in MEASURE_CHOICES:
        for tempo in range(lo, hi + 1):
            err = abs(measures * 4 * 60.0 / tempo - target)
            key = (err, -measures, tempo)
            if best is None or key < best[0]:
                best = (key, measures, tempo)
    return best[1], best[2]


def make_variation(m: Melody, measures: int, emotion: str, pacing: float,
                   rng: SeededRng, progression: ChordProgression | None = None,
                   ) -> Melody:
    """Cut a theme to 2/4/8 measures and scale its density with pacing.

    High pacing (> 0.7) inserts passing eighths between stepwise quarters;
    low pacing (< 0.3) merges repeated contiguous pitches. The final note
    cadences onto a chord tone (when a progression is supplied) and is held
    to the end of the last bar.
    """
    if measures not in MEASURE_CHOICES:
        raise ValueError(f"measures must be one of {MEASURE_CHOICES}")
    limit = measures * BAR_TICKS
    events = [replace(e, duration=min(e.duration, limit - e.onset))
              for e in m.events if e.onset < limit]

    if measures < m.length_bars and events:
        last = events[-1]
        pitch = last.pitch
        if progression is not None:
            tones = chord_at(progression, last.onset).tones()
            if pitch % 12 not in tones:
                pitch = _nearest_chord_tone(pitch, tones, direction=0)
        events[-1] = replace(last, pitch=pitch, duration=limit - last.onset)

    if pacing > 0.7 and len(events) > 1:
        prob = min(1.0, (pacing - 0.7) / 0.3)
        orn_rng = rng.substream("ornament")
        ornamented = []
        for cur, nxt in zip(events, events[1:]):
            gap = nxt.pitch - cur.pitch
            stepwise = 0 < abs(gap) <= 2
            if cur.duration == 480 and stepwise and orn_rng.uniform() < prob:
                half = 240
                fill = cur.pitch + (1 if gap > 0 else -1) if abs(gap) == 2 else nxt.pitch
                ornamented.append(replace(cur, duration=half))
                ornamented.append(replace(cur, onset=cur.onset + half,
                                          duration=half, pitch=fill))
            else:
                ornamented.append(cur)
        ornamented.append(events[-1])
        events = ornamented
    elif pacing < 0.3:
        merged: list[NoteEvent] = []
        for ev in events:
            if merged and merged[-1].pitch == ev.pitch and merged[-1].end == ev.onset:
                merged[-1] = replace(merged[-1],
                                     duration=merged[-1].duration + ev.duration)
            else:
                merged.append(ev)
        events = merged

    return Melody(tuple(events), measures, m.meter, m.key_tonic)


def counter_melody(p: ChordProgression, emotion: str,
                   mapping: EmotionMusicMapping, lead: Melody,
                   rng: SeededRng) -> Melody:
    """A single rule-built voice under the lead.

    Chord tones throughout (so strong beats always are), direction bias,
    step rate, articulation, dynamics and velocity variation all come from
    the emotion's mapping row. At any onset shared with the lead the voice
    avoids the lead's pitch class.
    """
    row = mapping.row(emotion)
    bars = lead.length_bars
    step = row.counter_step
    lead_low = min(e.pitch for e in lead.events) if lead.events else 60
    hi = lead_low - 1
    lo = max(12, hi - 19)
    lead_onsets = {e.onset: e.pitch % 12 for e in lead.events}

    asc = row.midpoint("contour_ascending")
    desc = row.midpoint("contour_descending")
    p_down = desc / (asc + desc) if asc + desc > 0 else 0.5
    base_vel = DYNAMICS_VELOCITY[row.dynamics]

    total = bars * BAR_TICKS
    onsets = list(range(0, total, step))
    events = []
    current = None
    walk = rng.substream("counter")
    for onset in onsets:
        tones = chord_at(p, onset).tones()
        banned = lead_onsets.get(onset)
        candidates = [pitch for pitch in range(lo, hi + 1)
                      if pitch % 12 in tones and pitch % 12 != banned]
        if not candidates:
            candidates = [pitch for pitch in range(lo, hi + 1) if pitch % 12 in tones]
        if not candidates:
            continue
        if current is None:
            current = max(candidates)
        else:
            going_down = walk.uniform() < p_down
            pool = [c for c in candidates if (c < current if going_down else c > current)]
            if not pool:
                pool = candidates
            current = min(pool, key=lambda c: (abs(c - current), c))
        vel = base_vel
        if row.velocity_var:
            vel += walk.int_between(-row.velocity_var, row.velocity_var)
        vel = max(1, min(127, vel))
        duration = min(step, total - onset)
        events.append(NoteEvent(onset, duration, current, vel, row.articulation))
    return Melody(tuple(events), bars, lead.meter, key_tonic=0)


def reharmonize(p: ChordProgression, emotion: str,
                mapping: EmotionMusicMapping) -> ChordProgression:
    """Substitute chord qualities toward the emotion's consonance target.

    Roots never change. Qualities move one rung at a time along the
    substitution ladders until the mean consonance is within 0.25 of the
    target, the ladders saturate, or no single move improves the fit.
    """
    target = mapping.row(emotion).midpoint("chord_consonance")
    slots = [list(bar) for bar in p.bars]
    flat = [(bi, ci) for bi, bar in enumerate(slots) for ci in range(len(bar))]

    def mean_consonance() -> float:
        values = [chord_consonance(slots[bi][ci]) for bi, ci in flat]
        return sum(values) / len(values)

    mean = mean_consonance()
    if abs(mean - target) <= 0.25:
        return p
    direction = 1 if mean < target else -1
    while abs(mean - target) > 0.25:
        moves = []
        for bi, ci in flat:
            chord = slots[bi][ci]
            ladder, pos = _LADDER_POSITION[chord.quality]
            new_pos = pos + direction
            if not 0 <= new_pos < len(ladder):
                continue
            slots[bi][ci] = ChordSymbol(chord.root, ladder[new_pos], chord.bass)
            moves.append((abs(mean_consonance() - target), bi, ci, ladder[new_pos]))
            slots[bi][ci] = chord
        if not moves:
            break
        err, bi, ci, quality = min(moves, key=lambda mv: (mv[0], mv[1], mv[2]))
        if err > abs(mean - target):
            break
        old = slots[bi][ci]
        slots[bi][ci] = ChordSymbol(old.root, quality, old.bass)
        mean = mean_consonance()
    return ChordProgression(tuple(tuple(bar) for bar in slots), p.meter)


# --- cue plan ----------------------------------------------------------------


def _apply_dynamics(melody: Melody, dynamics: str) -> Melody:
    vel = DYNAMICS_VELOCITY[dynamics]
    return replace(melody, events=tuple(replace(e, velocity=vel)
                                        for e in melody.events))


def _ramp_first_bar(melody: Melody) -> Melody:
    """One-bar velocity ramp to soften the entry at a cue boundary."""
    events = []
    for e in melody.events:
        if e.onset < BAR_TICKS:
            scale = 0.7 + 0.3 * e.onset / BAR_TICKS
            events.append(replace(e, velocity=max(1, round(e.velocity * scale))))
        else:
            events.append(e)
    return replace(melody, events=tuple(events))


def _conflicting_emotions(seg: SegmentAnnotation) -> bool:
    return (seg.secondary_character is not None
            and seg.secondary_emotion is not None
            and seg.secondary_emotion != seg.dominant_emotion
            and seg.dominant_emotion_prob >= 0.4
            and seg.secondary_emotion_prob >= 0.4)


def build_cue_plan(segments: list[SegmentAnnotation], assignments: dict,
                   melody_lookup: dict[str, Melody],
                   progression_lookup: dict[str, ChordProgression],
                   mapping: EmotionMusicMapping, rng: SeededRng,
                   character_order: list[str] | None = None) -> CuePlan:
    """Place each character's leitmotif across the film's segments.

    `assignments` maps character id to {"melody": id, "progression": id}.
    Characterless segments borrow the lead character's theme as a flagged
    variation. When two co-present characters feel conflicting emotions the
    counter-melody switches to the secondary character's mapping row.
    """
    if character_order is None:
        character_order = list(assignments)
    for cid in character_order:
        if cid not in assignments:
            raise MissingAssignment(cid)
    lead_character = character_order[0] if character_order else None

    cues = []
    for index, seg in enumerate(segments):
        character = seg.dominant_character
        is_variation = character is None
        source = character if character is not None else lead_character
        if source is None or source not in assignments:
            raise MissingAssignment(source if source is not None else "<none>")
        melody_id = assignments[source]["melody"]
        progression_id = assignments[source]["progression"]
        theme = melody_lookup[melody_id]
        progression = progression_lookup[progression_id]

        emotion = seg.dominant_emotion
        row = mapping.row(emotion)
        measures, tempo = fit_tempo(seg, emotion, mapping)
        cue_rng = rng.substream("cue", index)

        cons, _ = _progression_consonance(progression)
        needs_reharm = abs(cons - row.midpoint("chord_consonance")) > 0.25
        if needs_reharm:
            progression = reharmonize(progression, emotion, mapping)

        full = tile_progression(progression, theme.length_bars)
        lead = reconcile(theme, full)
        lead = make_variation(lead, measures, emotion, seg.pacing,
                              cue_rng, progression=full)
        lead = _apply_dynamics(lead, row.dynamics)
        lead = _ramp_first_bar(lead)

        counter = None
        use_counter = not needs_reharm
        counter_emotion = emotion
        if _conflicting_emotions(seg):
            use_counter = True
            counter_emotion = seg.secondary_emotion
        if use_counter and lead.events:
            cue_prog = tile_progression(progression, measures)
            counter = counter_melody(cue_prog, counter_emotion, mapping,
                                     lead, cue_rng)
            counter = _ramp_first_bar(counter)

        cue_seconds = measures * 4 * 60.0 / tempo
        loops = max(1, int(seg.length // cue_seconds))
        cues.append(Cue(
            segment=seg,
            melody=lead,
            progression=tile_progression(progression, measures),
            tempo=tempo,
            measures=measures,
            counter_melody=counter,
            dynamics=row.dynamics,
            articulation=row.articulation,
            character=character,
            emotion=emotion,
            melody_id=melody_id,
            progression_id=progression_id,
            is_variation=is_variation,
            loop_count=loops,
        ))
    return CuePlan(tuple(cues))


def _progression_consonance(p: ChordProgression) -> tuple[float, int]:
    chords = p.chords()
    mean = sum(chord_consonance(c) for c in chords) / len(chords)
    return mean, len(chords)
