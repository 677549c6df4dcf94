// Piano-roll previews of melody candidates (tick grid, pitch on the y axis).

import type { MelodyNotation } from "./types.js";

export function pianoRoll(notation: MelodyNotation, width = 260,
                          height = 72): SVGSVGElement {
    const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
    svg.setAttribute("width", String(width));
    svg.setAttribute("height", String(height));
    svg.setAttribute("class", "pianoroll");

    const events = notation.events;
    if (events.length === 0) {
        return svg;
    }
    const totalTicks = notation.length_bars
        * notation.meter[0] * (4 / notation.meter[1]) * 480;
    const pitches = events.map((e) => e[2]);
    const lo = Math.min(...pitches) - 1;
    const hi = Math.max(...pitches) + 1;
    const rowHeight = height / (hi - lo + 1);

    // Bar lines first so notes draw on top of them.
    for (let bar = 1; bar < notation.length_bars; bar++) {
        const lineX = (bar / notation.length_bars) * width;
        const line = document.createElementNS(
            "http://www.w3.org/2000/svg", "line");
        line.setAttribute("x1", lineX.toFixed(1));
        line.setAttribute("x2", lineX.toFixed(1));
        line.setAttribute("y1", "0");
        line.setAttribute("y2", String(height));
        line.setAttribute("stroke", "#e3e5e8");
        svg.appendChild(line);
    }
    for (const [onset, duration, pitch, velocity] of events) {
        const rect = document.createElementNS(
            "http://www.w3.org/2000/svg", "rect");
        rect.setAttribute("x", ((onset / totalTicks) * width).toFixed(1));
        rect.setAttribute("y", ((hi - pitch) * rowHeight).toFixed(1));
        rect.setAttribute("width",
                          Math.max(1, (duration / totalTicks) * width).toFixed(1));
        rect.setAttribute("height", Math.max(1, rowHeight - 1).toFixed(1));
        rect.setAttribute("fill", "#4c78a8");
        rect.setAttribute("fill-opacity",
                          (0.45 + 0.55 * (velocity / 127)).toFixed(2));
        rect.setAttribute("class", "note");
        svg.appendChild(rect);
    }
    return svg;
}
