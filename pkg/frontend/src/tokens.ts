// Design tokens: fixed colors for the seven emotion labels and a rotating
// palette for characters.

import type { Emotion } from "./types.js";

export const EMOTION_COLORS: Record<Emotion, string> = {
    happy: "#e8b931",
    angry: "#d4452c",
    sad: "#3a6ea8",
    neutral: "#8a8f98",
    fear: "#7d4fa8",
    disgust: "#5d8a3a",
    surprise: "#2db5a5",
};

const CHARACTER_PALETTE = [
    "#4c78a8", "#f58518", "#54a24b", "#b279a2", "#e45756", "#72b7b2",
];

export function characterColor(index: number): string {
    return CHARACTER_PALETTE[index % CHARACTER_PALETTE.length];
}

export const VARIATION_COLOR = "#c9ccd1";
