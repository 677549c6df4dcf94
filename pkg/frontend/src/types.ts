// Wire types for the cuescore project service (all bodies are JSON except
// the MIDI stream).

export const EMOTIONS = [
    "happy", "angry", "sad", "neutral", "fear", "disgust", "surprise",
] as const;

export type Emotion = typeof EMOTIONS[number];

export type EmotionDict = Record<Emotion, number>;

export interface ArcPoint {
    t: number;
    emotions: EmotionDict;
}

export interface Character {
    id: string;
    screen_frames: number;
    aggregate: EmotionDict;
    arc: ArcPoint[];
}

// Notation is an event list for melodies ([onset, duration, pitch, velocity]
// in ticks at 480/quarter) and a chord-sheet line for progressions.
export interface MelodyNotation {
    meter: [number, number];
    length_bars: number;
    events: [number, number, number, number][];
}

export interface Candidate {
    id: string;
    index: number;
    notation: MelodyNotation | string;
    annotations: Record<string, number>;
}

export interface CandidateSet {
    melodies: Candidate[];
    progressions: Candidate[];
}

export interface Choice {
    melody: string;
    progression: string;
}

export type Assignment = Record<string, Choice>;

export interface ProjectInfo {
    id: string;
    seed: number;
    duration: number;
    segments: number;
    characters: string[];
    assignment: Assignment;
    rendered: boolean;
}

export interface RenderStatus {
    status: "idle" | "running" | "done" | "error";
    detail?: string;
}

export interface TimelineCue {
    start: number;
    end: number;
    character: string | null;
    emotion: string;
    melody: string;
    progression: string;
    tempo: number;
    measures: number;
    variation: boolean;
    loops: number;
}

export interface TimelineDoc {
    version: string;
    cues: TimelineCue[];
}
