"""Score rendering: a four-layer Standard MIDI File, chord sheet, timeline.

The MIDI file is SMF format 1 at 480 PPQ. Track 0 holds the 4/4 time
signature and one tempo event per cue; tracks 1-4 hold melody,
counter-melody, chordal accompaniment and bass line, each confined to its
own octave band. No program changes are written; instrument choice is left
downstream. Articulation becomes a gate ratio on the nominal duration.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .assemble import BAR_TICKS, DYNAMICS_VELOCITY, Cue, CuePlan
from .corpus import ChordProgression, Melody, format_progression

PPQ = 480

DEFAULT_LAYERS = {
    "melody": (72, 95),
    "counter": (60, 71),
    "chords": (48, 59),
    "bass": (36, 47),
}

GATE_RATIOS = {"none": 0.8, "staccato": 0.5, "tenuto": 0.95}


class EmptyPlan(ValueError):
    """A score with no cues cannot be rendered."""


@dataclass(frozen=True)
class Score:
    plan: CuePlan
    layers: dict[str, tuple[int, int]] = field(
        default_factory=lambda: dict(DEFAULT_LAYERS))
    ppq: int = PPQ


def _wrap_into(pitch: int, lo: int, hi: int) -> int:
    while pitch < lo:
        pitch += 12
    while pitch > hi:
        pitch -= 12
    return pitch


def _layer_shift(melody: Melody, lo: int, hi: int) -> int:
    """Whole-octave shift lifting the melody's lowest note to the layer."""
    if not melody.events:
        return 0
    low = min(e.pitch for e in melody.events)
    return 12 * (-(-(lo - low) // 12))  # ceil((lo - low) / 12)


def _vlq(value: int) -> bytes:
    """Variable-length quantity, minimal encoding."""
    if value < 0:
        raise ValueError("negative delta time")
    out = [value & 0x7F]
    value >>= 7
    while value:
        out.append(0x80 | (value & 0x7F))
        value >>= 7
    return bytes(reversed(out))


@dataclass
class _TrackBuilder:
    channel: int
    events: list = field(default_factory=list)  # (tick, priority, message)

    def note(self, tick: int, pitch: int, velocity: int, duration: int):
        on = bytes([0x90 | self.channel, pitch, velocity])
        off = bytes([0x80 | self.channel, pitch, 0])
        self.events.append((tick, 1, on))
        self.events.append((tick + max(1, duration), 0, off))

    def meta(self, tick: int, meta_type: int, data: bytes):
        self.events.append((tick, 2, bytes([0xFF, meta_type, len(data)]) + data))

    def render(self, end_tick: int) -> bytes:
        self.events.sort(key=lambda e: (e[0], e[1], e[2]))
        chunks = []
        cursor = 0
        for tick, _, message in self.events:
            chunks.append(_vlq(tick - cursor))
            chunks.append(message)
            cursor = tick
        chunks.append(_vlq(max(0, end_tick - cursor)))
        chunks.append(bytes([0xFF, 0x2F, 0x00]))
        data = b"".join(chunks)
        return b"MTrk" + len(data).to_bytes(4, "big") + data


def _cue_positions(plan: CuePlan) -> list[tuple[Cue, int, int]]:
    """(cue, start_tick, body_ticks) with starts aligned to segment times."""
    placed = []
    cursor_tick = 0
    cursor_sec = 0.0
    prev_tempo = None
    for cue in plan.cues:
        gap = max(0.0, cue.segment.start - cursor_sec)
        bpm = prev_tempo if prev_tempo is not None else cue.tempo
        cursor_tick += round(gap * bpm / 60.0 * PPQ)
        body = cue.loop_count * cue.measures * BAR_TICKS
        placed.append((cue, cursor_tick, body))
        cursor_tick += body
        cursor_sec = cue.segment.start + body * 60.0 / (PPQ * cue.tempo)
        prev_tempo = cue.tempo
    return placed


def _emit_melody(track: _TrackBuilder, melody: Melody, base_tick: int,
                 lo: int, hi: int):
    shift = _layer_shift(melody, lo, hi)
    for e in melody.events:
        pitch = _wrap_into(e.pitch + shift, lo, hi)
        gate = GATE_RATIOS[e.articulation]
        track.note(base_tick + e.onset, pitch, e.velocity,
                   max(1, round(e.duration * gate)))


def _chord_slots(p: ChordProgression, bars: int):
    """(tick, duration, chord) covering `bars` bars of the progression."""
    for bar_i in range(bars):
        bar = p.bars[bar_i % len(p.bars)]
        if len(bar) == 1:
            yield bar_i * BAR_TICKS, BAR_TICKS, bar[0]
        else:
            half = BAR_TICKS // 2
            yield bar_i * BAR_TICKS, half, bar[0]
            yield bar_i * BAR_TICKS + half, half, bar[1]


def _check_layers_disjoint(layers: dict[str, tuple[int, int]]):
    names = sorted(layers)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            (a_lo, a_hi), (b_lo, b_hi) = layers[a], layers[b]
            if a_lo <= b_hi and b_lo <= a_hi:
                raise ValueError(f"layers {a} and {b} overlap")


def write_midi(score: Score) -> bytes:
    """Serialize the score to SMF format 1 bytes. Deterministic."""
    if not score.plan.cues:
        raise EmptyPlan("no cues to render")
    layers = score.layers
    _check_layers_disjoint(layers)
    conductor = _TrackBuilder(channel=0)
    melody_tr = _TrackBuilder(channel=0)
    counter_tr = _TrackBuilder(channel=1)
    chords_tr = _TrackBuilder(channel=2)
    bass_tr = _TrackBuilder(channel=3)

    conductor.meta(0, 0x58, bytes([4, 2, 24, 8]))  # 4/4 time signature
    placed = _cue_positions(score.plan)
    for cue, start, body in placed:
        mpq = round(60_000_000 / cue.tempo)
        conductor.meta(start, 0x51, mpq.to_bytes(3, "big"))
        cue_bars = cue.measures * BAR_TICKS
        chord_vel = max(1, round(DYNAMICS_VELOCITY[cue.dynamics] * 0.85))
        for loop in range(cue.loop_count):
            base = start + loop * cue_bars
            _emit_melody(melody_tr, cue.melody, base, *layers["melody"])
            if cue.counter_melody is not None:
                _emit_melody(counter_tr, cue.counter_melody, base,
                             *layers["counter"])
            for tick, duration, chord in _chord_slots(cue.progression,
                                                      cue.measures):
                # Root-position voicing: with every tone wrapped into the
                # single chord octave this is the sorted pitch-class stack.
                for pc in sorted(chord.tones()):
                    pitch = _wrap_into(layers["chords"][0] + pc,
                                       *layers["chords"])
                    chords_tr.note(base + tick, pitch, chord_vel,
                                   max(1, round(duration * 0.8)))
                bass_pitch = _wrap_into(layers["bass"][0] + chord.root,
                                        *layers["bass"])
                bass_tr.note(base + tick, bass_pitch, chord_vel,
                             max(1, round(duration * 0.8)))

    end_tick = max(start + body for _, start, body in placed)
    tracks = [conductor.render(end_tick), melody_tr.render(end_tick),
              counter_tr.render(end_tick), chords_tr.render(end_tick),
              bass_tr.render(end_tick)]
    header = b"MThd" + (6).to_bytes(4, "big") + (1).to_bytes(2, "big") \
        + len(tracks).to_bytes(2, "big") + score.ppq.to_bytes(2, "big")
    return header + b"".join(tracks)


def write_chord_sheet(score: Score) -> str:
    """One line per cue: index, start seconds, tempo, then the bars."""
    lines = []
    for i, cue in enumerate(score.plan.cues, start=1):
        bars = format_progression(cue.progression)
        lines.append(f"{i} {cue.segment.start:.2f} {cue.tempo}: {bars}")
    return "\n".join(lines) + "\n"


TIMELINE_VERSION = "1"


def write_timeline(score: Score) -> dict:
    """JSON-ready cue timeline for downstream tools and the selection UI."""
    cues = []
    for cue in score.plan.cues:
        cues.append({
            "start": cue.segment.start,
            "end": cue.segment.end,
            "character": cue.character,
            "emotion": cue.emotion,
            "melody": cue.melody_id,
            "progression": cue.progression_id,
            "tempo": cue.tempo,
            "measures": cue.measures,
            "variation": cue.is_variation,
            "loops": cue.loop_count,
        })
    return {"version": TIMELINE_VERSION, "cues": cues}


def dump_timeline(timeline: dict) -> str:
    return json.dumps(timeline, sort_keys=True, indent=2) + "\n"
