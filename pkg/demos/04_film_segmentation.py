"""Walkthrough: from a per-frame analysis document to annotated cue segments.

A synthetic three-character film is segmented wherever the dominant
character changes or the dominant character's emotion shifts decisively;
each segment carries the character, modal emotion, and mean pacing that
later drive leitmotif placement.
"""

from cuescore import identify_main_characters, load_analysis, segment_film
from cuescore.vision import EMOTIONS, emotion_arc, pacing_curve


def face(cid, emotion, w=0.2, h=0.25):
    emotions = {k: 0.02 for k in EMOTIONS}
    emotions[emotion] = 1.0 - 0.02 * 6
    return {"id": cid, "bbox": [0.4, 0.3, w, h], "emotions": emotions}


frames = []
t = 0.0
while t < 180.0:
    if t < 60:
        faces = [face("amira", "happy")]
    elif t < 70:
        faces = []
    elif t < 120:
        faces = [face("bruno", "sad")]
    else:
        faces = [face("amira", "angry"), face("bruno", "fear", w=0.12)]
    frames.append({
        "t": t, "faces": faces,
        "aesthetics": {"movement": 0.9 if t >= 120 else 0.2,
                       "panning": 0.1, "zoom": 0.0, "cut_similarity": 0.85},
    })
    t += 0.5

analysis = load_analysis({"fps": 2.0, "duration": 180.0, "frames": frames})
profiles = identify_main_characters(analysis, 3)
print("main characters by screen presence:")
for p in profiles:
    label, prob = p.aggregate.dominant()
    print(f"  {p.id:8s} {p.screen_frames:4d} frames, mostly {label} ({prob:.2f})")

arc = emotion_arc(analysis, "amira")
present = sum(1 for pt in arc if pt.emotions is not None)
print(f"\namira's arc has {present}/{len(arc)} stride points on screen")

pacing = pacing_curve(analysis)
print(f"pacing ranges over [{min(v for _, v in pacing):.2f}, "
      f"{max(v for _, v in pacing):.2f}]")

print("\nsegments:")
for seg in segment_film(analysis, profiles):
    who = seg.dominant_character or "(nobody)"
    extra = ""
    if seg.secondary_character:
        extra = f" with {seg.secondary_character}/{seg.secondary_emotion}"
    print(f"  {seg.start:6.1f}-{seg.end:6.1f}s  {who:8s} "
          f"{seg.dominant_emotion:8s} pacing={seg.pacing:.2f}{extra}")
