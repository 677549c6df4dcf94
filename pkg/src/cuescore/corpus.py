"""Training-corpus ingestion: chord sheets, folk tunes, and key normalization.

Two text formats are understood:

* Chord sheets: one progression per line, bars separated by ``|``, one or two
  chords per bar. A line may carry a leading annotation ended by the first
  ``:`` (cue sheets emitted by this package use ``index start tempo:``); the
  annotation is ignored on parse.
* A subset of ABC notation for monophonic tunes: headers X/T/M/L/K, notes
  with accidentals/octave marks/duration multipliers, rests, ties, barlines
  and plain ``|: ... :|`` repeats (expanded). Grace notes, tuplets, chords,
  variant endings and inline field changes are out of subset; tunes using
  them are skipped with a diagnostic.

All time is in MIDI ticks at 480 per quarter note.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, replace
from fractions import Fraction

log = logging.getLogger(__name__)

TICKS_PER_QUARTER = 480
WHOLE_NOTE_TICKS = 4 * TICKS_PER_QUARTER

ARTICULATIONS = ("none", "staccato", "tenuto")

# Pitch classes are plain ints 0..11 with 0 = C.
_LETTER_PC = {"C": 0, "D": 2, "E": 4, "F": 5, "G": 7, "A": 9, "B": 11}

# Canonical spellings used when formatting chord symbols back to text.
PC_NAMES = ("C", "Db", "D", "Eb", "E", "F", "F#", "G", "Ab", "A", "Bb", "B")

# Quality suffix grammar -> internal quality name.
_SUFFIX_QUALITY = {
    "": "maj",
    "m": "min",
    "dim": "dim",
    "aug": "aug",
    "7": "dom7",
    "maj7": "maj7",
    "m7": "min7",
    "m7b5": "min7b5",
    "dim7": "dim7",
    "sus4": "sus4",
    "sus2": "sus2",
    "m6": "min6",
    "6": "maj6",
}

# Extended qualities reduce to their base seventh family.
_EXTENSION_QUALITY = {
    "9": "dom7", "11": "dom7", "13": "dom7", "7alt": "dom7", "alt": "dom7",
    "maj9": "maj7", "maj11": "maj7", "maj13": "maj7",
    "m9": "min7", "m11": "min7", "m13": "min7",
}

CHORD_TONES = {
    "maj": (0, 4, 7),
    "min": (0, 3, 7),
    "dim": (0, 3, 6),
    "aug": (0, 4, 8),
    "dom7": (0, 4, 7, 10),
    "maj7": (0, 4, 7, 11),
    "min7": (0, 3, 7, 10),
    "min7b5": (0, 3, 6, 10),
    "dim7": (0, 3, 6, 9),
    "sus4": (0, 5, 7),
    "sus2": (0, 2, 7),
    "min6": (0, 3, 7, 9),
    "maj6": (0, 4, 7, 9),
}

_QUALITY_SUFFIX = {q: s for s, q in _SUFFIX_QUALITY.items()}


class MalformedChord(ValueError):
    """A chord token that the grammar does not accept."""

    def __init__(self, token: str, position: int):
        self.token = token
        self.position = position
        super().__init__(f"malformed chord {token!r} at position {position}")


class EmptyCorpus(ValueError):
    """A corpus document from which nothing could be parsed."""


@dataclass(frozen=True)
class NoteEvent:
    """One sounding note; onset/duration in ticks, pitch as MIDI number."""

    onset: int
    duration: int
    pitch: int
    velocity: int = 80
    articulation: str = "none"

    def __post_init__(self):
        if self.onset < 0:
            raise ValueError(f"onset {self.onset} < 0")
        if self.duration < 1:
            raise ValueError(f"duration {self.duration} < 1")
        if not 0 <= self.pitch <= 127:
            raise ValueError(f"pitch {self.pitch} outside [0,127]")
        if not 1 <= self.velocity <= 127:
            raise ValueError(f"velocity {self.velocity} outside [1,127]")
        if self.articulation not in ARTICULATIONS:
            raise ValueError(f"unknown articulation {self.articulation!r}")

    @property
    def end(self) -> int:
        return self.onset + self.duration


def bar_ticks(meter: tuple[int, int]) -> int:
    """Length of one bar in ticks for the given meter."""
    beats, unit = meter
    return beats * (WHOLE_NOTE_TICKS // unit)


@dataclass(frozen=True)
class Melody:
    """A monophonic, onset-sorted sequence of notes spanning whole bars."""

    events: tuple[NoteEvent, ...]
    length_bars: int
    meter: tuple[int, int] = (4, 4)
    key_tonic: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        if self.length_bars < 1:
            raise ValueError("length_bars must be >= 1")
        limit = self.length_bars * bar_ticks(self.meter)
        prev_end = 0
        for ev in self.events:
            if ev.onset < prev_end:
                raise ValueError("events overlap or are unsorted")
            if ev.onset >= limit:
                raise ValueError(f"onset {ev.onset} outside {self.length_bars} bars")
            prev_end = ev.end

    def pitches(self) -> list[int]:
        return [e.pitch for e in self.events]

    def durations(self) -> list[int]:
        return [e.duration for e in self.events]


@dataclass(frozen=True)
class ChordSymbol:
    """Root pitch class, quality name, optional slash bass pitch class."""

    root: int
    quality: str
    bass: int | None = None

    def __post_init__(self):
        if not 0 <= self.root <= 11:
            raise ValueError(f"root {self.root} outside [0,11]")
        if self.quality not in CHORD_TONES:
            raise ValueError(f"unknown quality {self.quality!r}")
        if self.bass is not None and not 0 <= self.bass <= 11:
            raise ValueError(f"bass {self.bass} outside [0,11]")

    def tones(self) -> frozenset[int]:
        """Pitch classes of the chord tones (bass excluded)."""
        return frozenset((self.root + iv) % 12 for iv in CHORD_TONES[self.quality])

    def transposed(self, semitones: int) -> "ChordSymbol":
        bass = None if self.bass is None else (self.bass + semitones) % 12
        return ChordSymbol((self.root + semitones) % 12, self.quality, bass)


@dataclass(frozen=True)
class ChordProgression:
    """Bar slots holding one or two chords each; two-chord bars split halfway."""

    bars: tuple[tuple[ChordSymbol, ...], ...]
    meter: tuple[int, int] = (4, 4)

    def __post_init__(self):
        object.__setattr__(self, "bars", tuple(tuple(b) for b in self.bars))
        if not self.bars:
            raise ValueError("progression needs at least one bar")
        for b in self.bars:
            if not 1 <= len(b) <= 2:
                raise ValueError("each bar holds 1 or 2 chords")

    def chords(self) -> list[ChordSymbol]:
        return [c for b in self.bars for c in b]

    def transposed(self, semitones: int) -> "ChordProgression":
        return ChordProgression(
            tuple(tuple(c.transposed(semitones) for c in b) for b in self.bars),
            self.meter,
        )


_CHORD_RE = re.compile(r"^([A-G])([#b]?)([0-9a-zA-Z]*)(?:/([A-G])([#b]?))?$")


def _accidental_offset(acc: str) -> int:
    return {"": 0, "#": 1, "b": -1}[acc]


def parse_chord_symbol(token: str) -> ChordSymbol:
    """Parse one chord token, e.g. ``Dm7``, ``F#m7b5/A``.

    Extensions 9/11/13/alt reduce to their base seventh quality; anything
    else outside the grammar raises MalformedChord.
    """
    m = _CHORD_RE.match(token)
    if not m:
        # Report the first character that cannot start or continue a chord.
        pos = 0 if not token or token[0] not in _LETTER_PC else 1
        raise MalformedChord(token, pos)
    letter, acc, suffix, bass_letter, bass_acc = m.groups()
    root = (_LETTER_PC[letter] + _accidental_offset(acc)) % 12
    if suffix in _SUFFIX_QUALITY:
        quality = _SUFFIX_QUALITY[suffix]
    elif suffix in _EXTENSION_QUALITY:
        quality = _EXTENSION_QUALITY[suffix]
    else:
        raise MalformedChord(token, len(letter) + len(acc))
    bass = None
    if bass_letter:
        bass = (_LETTER_PC[bass_letter] + _accidental_offset(bass_acc or "")) % 12
    return ChordSymbol(root, quality, bass)


def format_chord_symbol(chord: ChordSymbol) -> str:
    """Canonical text for a chord; round-trips through parse_chord_symbol."""
    text = PC_NAMES[chord.root] + _QUALITY_SUFFIX[chord.quality]
    if chord.bass is not None:
        text += "/" + PC_NAMES[chord.bass]
    return text


def _ensure_text(doc: str | bytes) -> str:
    if isinstance(doc, bytes):
        return doc.decode("utf-8", errors="replace")
    return doc


def parse_chord_sheet(doc: str | bytes) -> list[ChordProgression]:
    """Parse a chord-sheet document, one progression per non-blank line."""
    doc = _ensure_text(doc)
    progressions = []
    for lineno, raw in enumerate(doc.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" in line:
            line = line.split(":", 1)[1].strip()
            if not line:
                continue
        cells = [c.strip() for c in line.split("|")]
        # Boundary pipes produce empty edge cells; interior empties are errors.
        while cells and cells[0] == "":
            cells.pop(0)
        while cells and cells[-1] == "":
            cells.pop()
        bars = []
        for cell in cells:
            tokens = cell.split()
            if not 1 <= len(tokens) <= 2:
                raise MalformedChord(cell or "<empty bar>", 0)
            try:
                bars.append(tuple(parse_chord_symbol(t) for t in tokens))
            except MalformedChord as exc:
                raise MalformedChord(exc.token, exc.position) from None
        if bars:
            progressions.append(ChordProgression(tuple(bars)))
    if not progressions:
        raise EmptyCorpus("no progressions found")
    return progressions


def format_progression(p: ChordProgression) -> str:
    """Render a progression back to one chord-sheet line."""
    return " | ".join(" ".join(format_chord_symbol(c) for c in b) for b in p.bars)


# --- ABC subset -------------------------------------------------------------

_SHARP_ORDER = "FCGDAEB"
_FLAT_ORDER = "BEADGCF"

# Circle-of-fifths signature counts, keyed by (tonic spelling, mode).
_MAJOR_SF = {
    "C": 0, "G": 1, "D": 2, "A": 3, "E": 4, "B": 5, "F#": 6, "C#": 7,
    "F": -1, "Bb": -2, "Eb": -3, "Ab": -4, "Db": -5, "Gb": -6, "Cb": -7,
}
_MINOR_SF = {
    "A": 0, "E": 1, "B": 2, "F#": 3, "C#": 4, "G#": 5, "D#": 6, "A#": 7,
    "D": -1, "G": -2, "C": -3, "F": -4, "Bb": -5, "Eb": -6, "Ab": -7,
}

_KEY_RE = re.compile(r"^([A-G])([#b]?)\s*(maj|min|m)?$", re.IGNORECASE)

_NOTE_RE = re.compile(
    r"(\^\^|__|\^|_|=)?"      # accidental
    r"([A-Ga-gzx])"            # letter or rest
    r"([',]*)"                 # octave marks
    r"(\d+/\d+|/\d+|\d+|/+)?"  # duration multiplier
    r"(-?)"                    # tie
)

_UNSUPPORTED_BODY = re.compile(r"[{}!~\[\]<>()*\"$]|:\|\d")


class _TuneError(ValueError):
    pass


def _parse_key(value: str) -> tuple[int, int]:
    """Return (tonic pitch class, sharps count) for a major/minor key string."""
    m = _KEY_RE.match(value.strip())
    if not m:
        raise _TuneError(f"unsupported key {value!r}")
    letter, acc, mode = m.groups()
    letter = letter.upper()
    acc = (acc or "").replace("B", "b")
    spelled = letter + acc
    tonic = (_LETTER_PC[letter] + _accidental_offset(acc)) % 12
    minor = bool(mode) and mode.lower() in ("m", "min")
    table = _MINOR_SF if minor else _MAJOR_SF
    if spelled not in table:
        raise _TuneError(f"key {value!r} has no supported signature")
    return tonic, table[spelled]


def _signature_map(sharps: int) -> dict[str, int]:
    """Per-letter accidental offsets implied by the key signature."""
    sig = {}
    if sharps > 0:
        for letter in _SHARP_ORDER[:sharps]:
            sig[letter] = 1
    elif sharps < 0:
        for letter in _FLAT_ORDER[:-sharps]:
            sig[letter] = -1
    return sig


def _parse_meter(value: str) -> tuple[int, int]:
    value = value.strip()
    if value == "C":
        return (4, 4)
    if value == "C|":
        return (2, 2)
    m = re.match(r"^(\d+)/(\d+)$", value)
    if not m:
        raise _TuneError(f"unsupported meter {value!r}")
    return (int(m.group(1)), int(m.group(2)))


def _duration_fraction(token: str | None) -> Fraction:
    if not token:
        return Fraction(1)
    if set(token) == {"/"}:
        return Fraction(1, 2 ** len(token))
    if token.startswith("/"):
        return Fraction(1, int(token[1:]))
    if "/" in token:
        num, den = token.split("/")
        return Fraction(int(num), int(den))
    return Fraction(int(token))


def _expand_repeats(body: str) -> str:
    """Expand |: ... :| sections by duplication; ``::`` closes and reopens."""
    body = body.replace("::", ":||:")
    out = []
    stack = []  # start indexes in out of open repeats
    i = 0
    while i < len(body):
        if body.startswith("|:", i):
            stack.append(len(out))
            i += 2
        elif body.startswith(":|", i):
            start = stack.pop() if stack else 0
            out.extend(out[start:])
            out.append("|")
            i += 2
        else:
            out.append(body[i])
            i += 1
    return "".join(out)


def _parse_tune(header: dict[str, str], body_lines: list[str]) -> Melody:
    meter = _parse_meter(header["M"]) if "M" in header else (4, 4)
    if "L" in header:
        unit = Fraction(header["L"].strip().replace(" ", ""))
    else:
        # Standard default: 1/16 below 3/4-equivalent meters, else 1/8.
        unit = Fraction(1, 16) if Fraction(*meter) < Fraction(3, 4) else Fraction(1, 8)
    if "K" not in header:
        raise _TuneError("missing K header")
    tonic, sharps = _parse_key(header["K"])
    signature = _signature_map(sharps)

    body = " ".join(body_lines)
    if _UNSUPPORTED_BODY.search(body):
        raise _TuneError("tune uses notation outside the supported subset")
    body = _expand_repeats(body)

    events: list[NoteEvent] = []
    cursor = 0
    bar_accidentals: dict[tuple[str, int], int] = {}
    pending_tie = False
    i = 0
    while i < len(body):
        ch = body[i]
        if ch in " \t\\":
            i += 1
            continue
        if ch == "|" or ch == ":":
            bar_accidentals.clear()
            i += 1
            continue
        m = _NOTE_RE.match(body, i)
        if not m or m.end() == i:
            raise _TuneError(f"unparseable token at {body[i:i+8]!r}")
        acc, letter, octmarks, durtok, tie = m.groups()
        ticks_frac = unit * _duration_fraction(durtok) * WHOLE_NOTE_TICKS
        if ticks_frac.denominator != 1:
            raise _TuneError(f"duration {durtok!r} does not quantize to ticks")
        ticks = int(ticks_frac)
        if letter in "zx":
            cursor += ticks
            pending_tie = False
            i = m.end()
            continue
        base = 60 if letter.isupper() else 72
        octave_shift = 12 * (octmarks.count("'") - octmarks.count(","))
        upper = letter.upper()
        key = (upper, base // 12 + octave_shift // 12)
        if acc:
            offset = {"^^": 2, "^": 1, "=": 0, "_": -1, "__": -2}[acc]
            bar_accidentals[key] = offset
        else:
            offset = bar_accidentals.get(key, signature.get(upper, 0))
        pitch = base + _LETTER_PC[upper] + offset + octave_shift
        if not 0 <= pitch <= 127:
            raise _TuneError(f"pitch {pitch} out of MIDI range")
        if pending_tie and events and events[-1].pitch == pitch \
                and events[-1].end == cursor:
            events[-1] = replace(events[-1], duration=events[-1].duration + ticks)
        else:
            events.append(NoteEvent(cursor, ticks, pitch))
        cursor += ticks
        pending_tie = bool(tie)
        i = m.end()

    if not events:
        raise _TuneError("tune has no notes")
    total = max(e.end for e in events)
    bt = bar_ticks(meter)
    length_bars = max(1, -(-total // bt))
    return Melody(tuple(events), length_bars, meter, key_tonic=tonic)


def parse_melody_corpus(doc: str | bytes) -> list[Melody]:
    """Parse all tunes in an ABC document; unparseable tunes are skipped."""
    doc = _ensure_text(doc)
    tunes: list[tuple[dict[str, str], list[str]]] = []
    header: dict[str, str] = {}
    body: list[str] = []
    in_body = False

    def flush():
        nonlocal header, body, in_body
        if "X" in header:
            tunes.append((header, body))
        header, body, in_body = {}, [], False

    for raw in doc.splitlines():
        line = raw.split("%", 1)[0].rstrip()
        if not line.strip():
            flush()
            continue
        if re.match(r"^X\s*:", line):
            flush()
            header["X"] = line.split(":", 1)[1].strip()
            continue
        field_match = re.match(r"^([A-Za-z])\s*:(.*)$", line)
        if field_match and not in_body:
            name, value = field_match.group(1).upper(), field_match.group(2).strip()
            header[name] = value
            if name == "K":
                in_body = True
            continue
        if field_match and in_body and field_match.group(1).upper() in "WPQRSTVN":
            continue  # lyrics and decorative fields inside the body
        if in_body:
            body.append(line.strip())
    flush()

    melodies = []
    for header, body in tunes:
        ref = header.get("X", "?")
        try:
            melodies.append(_parse_tune(header, body))
        except (_TuneError, ValueError, ZeroDivisionError) as exc:
            log.warning("skipping tune X:%s: %s", ref, exc)
    if not melodies:
        raise EmptyCorpus("no tunes parsed")
    return melodies


# --- key normalization ------------------------------------------------------


def _shift_to_c(tonic: int) -> int:
    """Semitone shift in [-6, +5] that moves `tonic` to pitch class 0."""
    d = (-tonic) % 12
    return d - 12 if d > 5 else d


def _octave_shift(pitches: list[int], lo: int, hi: int) -> int:
    """Whole-octave shift placing pitches inside [lo, hi] where possible."""
    p_min, p_max = min(pitches), max(pitches)
    k_lo = -(-(lo - p_min) // 12)   # ceil
    k_hi = (hi - p_max) // 12       # floor
    if k_lo <= k_hi:
        candidates = range(k_lo, k_hi + 1)
        return min(candidates, key=lambda k: (abs(k), k))
    # Range wider than the window: center on its midpoint instead.
    mid = (p_min + p_max) / 2
    center = (lo + hi) / 2
    best = min(range(-11, 12), key=lambda k: (abs(mid + 12 * k - center), abs(k), k))
    return best


def detect_tonic(item: Melody | ChordProgression) -> int:
    """Tonic pitch class: final chord root, or the melody's key/modal pitch."""
    if isinstance(item, ChordProgression):
        return item.bars[-1][-1].root
    if item.key_tonic is not None:
        return item.key_tonic
    counts: dict[int, int] = {}
    for e in item.events:
        counts[e.pitch % 12] = counts.get(e.pitch % 12, 0) + 1
    return min(counts, key=lambda pc: (-counts[pc], pc))


def transpose_to_c(item, register: tuple[int, int] = (48, 84)):
    """Shift a melody or progression so its tonic is C.

    The shift is a uniform semitone offset in [-6, +5]; melodies are then
    moved by whole octaves into `register` where possible. Idempotent.
    """
    shift = _shift_to_c(detect_tonic(item))
    if isinstance(item, ChordProgression):
        return item.transposed(shift) if shift else item
    pitches = [e.pitch + shift for e in item.events]
    octave = 12 * _octave_shift(pitches, *register)
    if shift == 0 and octave == 0 and item.key_tonic == 0:
        return item
    events = tuple(
        replace(e, pitch=e.pitch + shift + octave) for e in item.events
    )
    return Melody(events, item.length_bars, item.meter, key_tonic=0)
