"""Walkthrough: Euclidean rhythms, movement-driven pulse counts, and the
semitone-cluster chord generator.

These are the low-level generative devices: onset patterns that spread k
pulses over n steps as evenly as possible, a mapping from on-screen
movement to pulse density, and chord shapes built around semitone pairs.
"""

from cuescore import embodied_chords, euclidean_rhythm, movement_to_pulses

print("Euclidean patterns (pulses over 16 steps):")
for k in (1, 3, 5, 7, 9, 13, 16):
    print(f"  E({k:2d},16) = {euclidean_rhythm(k, 16)}")

print("\nclassic figures:")
for k, n in ((3, 8), (5, 8), (2, 5), (5, 12)):
    print(f"  E({k},{n}) = {euclidean_rhythm(k, n)}")

print("\nmovement level -> pulses per 16-step cycle:")
for movement in (0.0, 0.2, 0.5, 0.8, 1.0):
    k = movement_to_pulses(movement, 16)
    print(f"  movement {movement:.1f} -> {k:2d} pulses: "
          f"{euclidean_rhythm(k, 16)}")

clusters = embodied_chords(root=0, size=3)
print(f"\n{len(clusters)} three-note cluster chords on C "
      f"(each contains a semitone pair):")
print("  first few:", clusters[:6])
print("  plain major triad excluded:", (0, 4, 7) not in clusters)
