// In-browser audition of a melody candidate: client-side synthesis of the
// note events with plain oscillators (the service serves MIDI only).

import type { MelodyNotation } from "./types.js";

const TICKS_PER_QUARTER = 480;

export class Audition {
    private context: AudioContext | null = null;
    private playing: OscillatorNode[] = [];

    get available(): boolean {
        return typeof AudioContext !== "undefined";
    }

    play(notation: MelodyNotation, bpm = 100): void {
        if (!this.available) return;
        this.stop();
        this.context = this.context ?? new AudioContext();
        const ctx = this.context;
        const secondsPerTick = 60 / bpm / TICKS_PER_QUARTER;
        const now = ctx.currentTime + 0.05;
        for (const [onset, duration, pitch, velocity] of notation.events) {
            const osc = ctx.createOscillator();
            const gain = ctx.createGain();
            osc.type = "triangle";
            osc.frequency.value = 440 * Math.pow(2, (pitch - 69) / 12);
            const start = now + onset * secondsPerTick;
            const end = start + duration * secondsPerTick * 0.9;
            const level = 0.25 * (velocity / 127);
            gain.gain.setValueAtTime(0, start);
            gain.gain.linearRampToValueAtTime(level, start + 0.01);
            gain.gain.setTargetAtTime(0, end - 0.03, 0.02);
            osc.connect(gain).connect(ctx.destination);
            osc.start(start);
            osc.stop(end + 0.1);
            this.playing.push(osc);
        }
    }

    stop(): void {
        for (const osc of this.playing) {
            try {
                osc.stop();
            } catch {
                // already stopped
            }
        }
        this.playing = [];
    }
}
