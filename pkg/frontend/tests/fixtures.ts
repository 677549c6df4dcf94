// Shared test data: a small synthetic film and canned API payloads.

import type {
    Candidate,
    CandidateSet,
    Character,
    EmotionDict,
    ProjectInfo,
    TimelineDoc,
} from "../src/types.js";

export function emotions(overrides: Partial<EmotionDict> = {}): EmotionDict {
    return {
        happy: 0, angry: 0, sad: 0, neutral: 1, fear: 0, disgust: 0,
        surprise: 0, ...overrides,
    };
}

export function syntheticFilm(duration = 120): object {
    const frames = [];
    for (let t = 0; t < duration; t += 0.5) {
        let faces: object[];
        if (t < 45) {
            faces = [face("vera", { happy: 0.9, neutral: 0.1 })];
        } else if (t < 55) {
            faces = [];
        } else {
            faces = [face("leo", { sad: 0.9, neutral: 0.1 })];
        }
        frames.push({
            t,
            faces,
            aesthetics: { movement: 0.3, panning: 0.1, zoom: 0,
                          cut_similarity: 0.9 },
        });
    }
    return { fps: 2, duration, frames };
}

function face(id: string, emo: Partial<EmotionDict>): object {
    return { id, bbox: [0.4, 0.3, 0.2, 0.25], emotions: emotions(emo) };
}

export function melodyCandidate(id: string): Candidate {
    return {
        id,
        index: Number(id.slice(-2)),
        notation: {
            meter: [4, 4],
            length_bars: 8,
            events: [[0, 480, 72, 80], [480, 480, 74, 80], [960, 960, 76, 80]],
        },
        annotations: {
            contour_ascending: 0.5, contour_descending: 0.3,
            tempo_min: 60, tempo_max: 140,
        },
    };
}

export function candidateSet(prefix: string): CandidateSet {
    return {
        melodies: [0, 1, 2].map((i) => melodyCandidate(`mel-${prefix}0${i}`)),
        progressions: [0, 1, 2].map((i) => ({
            id: `prog-${prefix}0${i}`, index: i, notation: "C | F | G | C",
            annotations: { chord_consonance: 0, chord_variation: 0.5 },
        })),
    };
}

export function character(id: string, frames: number): Character {
    return {
        id,
        screen_frames: frames,
        aggregate: emotions({ happy: 0.6, neutral: 0.4 }),
        arc: [
            { t: 0, emotions: emotions({ happy: 0.8, neutral: 0.2 }) },
            { t: 10, emotions: emotions({ happy: 0.4, sad: 0.6 }) },
            { t: 20, emotions: emotions({ sad: 1 }) },
        ],
    };
}

export function projectInfo(id: string, characters: string[]): ProjectInfo {
    return {
        id,
        seed: 7,
        duration: 120,
        segments: 3,
        characters,
        assignment: {},
        rendered: false,
    };
}

export function timeline(): TimelineDoc {
    return {
        version: "1",
        cues: [
            { start: 0, end: 46, character: "vera", emotion: "happy",
              melody: "mel-a00", progression: "prog-a00", tempo: 100,
              measures: 8, variation: false, loops: 2 },
            { start: 46, end: 54, character: null, emotion: "neutral",
              melody: "mel-b00", progression: "prog-b00", tempo: 105,
              measures: 4, variation: true, loops: 1 },
            { start: 54, end: 120, character: "leo", emotion: "sad",
              melody: "mel-b00", progression: "prog-b00", tempo: 60,
              measures: 8, variation: false, loops: 2 },
        ],
    };
}
