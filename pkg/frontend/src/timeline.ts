// Scored-timeline view: one block per cue, colored by character, laid out
// proportionally to film time.

import type { TimelineDoc } from "./types.js";
import { VARIATION_COLOR, characterColor } from "./tokens.js";

export function timelineView(doc: TimelineDoc, characterOrder: string[],
                             duration: number): HTMLElement {
    const container = document.createElement("div");
    container.className = "timeline";
    const total = duration
        || (doc.cues.length ? doc.cues[doc.cues.length - 1].end : 1);
    for (const cue of doc.cues) {
        const block = document.createElement("div");
        block.className = "cue";
        block.dataset.character = cue.character ?? "";
        block.dataset.melody = cue.melody;
        const left = (cue.start / total) * 100;
        const width = ((cue.end - cue.start) / total) * 100;
        block.style.left = `${left.toFixed(2)}%`;
        block.style.width = `${width.toFixed(2)}%`;
        block.style.background = cue.character === null
            ? VARIATION_COLOR
            : characterColor(characterOrder.indexOf(cue.character));
        const who = cue.character ?? "variation";
        block.title = `${who}: ${cue.emotion}, ${cue.measures} bars at `
            + `${cue.tempo} BPM`;
        const label = document.createElement("span");
        label.textContent = `${who} · ${cue.emotion}`;
        block.appendChild(label);
        container.appendChild(block);
    }
    return container;
}
