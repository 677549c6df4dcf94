"""Walkthrough: the whole pipeline, from analysis to a playable MIDI score.

Builds a synthetic two-minute film, runs the full chain (characters,
segments, candidate pools, automatic leitmotif selection, cue assembly),
and writes score.mid / score.chords.txt / timeline.json into demos/out.
"""

import json
from pathlib import Path

from cuescore import run_pipeline
from cuescore.config import EngineConfig
from cuescore.emit import dump_timeline
from cuescore.pipeline import default_chord_corpus, default_melody_corpus
from cuescore.vision import EMOTIONS
from dataclasses import replace


def face(cid, emotion):
    emotions = {k: 0.02 for k in EMOTIONS}
    emotions[emotion] = 1.0 - 0.02 * 6
    return {"id": cid, "bbox": [0.4, 0.3, 0.2, 0.25], "emotions": emotions}


frames = []
t = 0.0
while t < 120.0:
    if t < 45:
        faces = [face("vera", "happy")]
    elif t < 55:
        faces = []
    else:
        faces = [face("leo", "sad")]
    frames.append({"t": t, "faces": faces,
                   "aesthetics": {"movement": 0.3, "panning": 0.1,
                                  "zoom": 0.05, "cut_similarity": 0.9}})
    t += 0.5

analysis = {"fps": 2.0, "duration": 120.0, "frames": frames}

config = replace(EngineConfig(), melody_pool_size=200, chord_pool_size=200)
result = run_pipeline(analysis, default_melody_corpus(),
                      default_chord_corpus(), seed=42, config=config)

print("leitmotif assignment (rank-1 automatic selection):")
for cid, choice in result.assignment.items():
    print(f"  {cid:6s} -> {choice['melody']} over {choice['progression']}")

print("\ncue plan:")
for entry in result.render.timeline["cues"]:
    who = entry["character"] or "(variation of the lead theme)"
    print(f"  {entry['start']:6.1f}-{entry['end']:6.1f}s  {who:30s} "
          f"{entry['emotion']:8s} {entry['measures']} bars at "
          f"{entry['tempo']} BPM x{entry['loops']}")

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)
(out / "score.mid").write_bytes(result.render.midi)
(out / "score.chords.txt").write_text(result.render.chord_sheet)
(out / "timeline.json").write_text(dump_timeline(result.render.timeline))
print(f"\nwrote {len(result.render.midi)} MIDI bytes and the chord sheet to "
      f"{out}/")
print("chord sheet:")
print(result.render.chord_sheet)
