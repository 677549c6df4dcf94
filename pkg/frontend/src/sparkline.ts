// Emotion-arc sparklines: one polyline per emotion label over the film time.

import { EMOTIONS } from "./types.js";
import type { ArcPoint } from "./types.js";
import { EMOTION_COLORS } from "./tokens.js";

export function emotionSparkline(arc: ArcPoint[], width = 280,
                                 height = 60): SVGSVGElement {
    const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
    svg.setAttribute("width", String(width));
    svg.setAttribute("height", String(height));
    svg.setAttribute("class", "sparkline");
    if (arc.length === 0) {
        return svg;
    }
    const t0 = arc[0].t;
    const t1 = arc[arc.length - 1].t || 1;
    const x = (t: number) => ((t - t0) / (t1 - t0 || 1)) * (width - 2) + 1;
    const y = (v: number) => height - 2 - v * (height - 4);
    for (const emotion of EMOTIONS) {
        const points = arc
            .map((p) => `${x(p.t).toFixed(1)},${y(p.emotions[emotion]).toFixed(1)}`)
            .join(" ");
        const line = document.createElementNS(
            "http://www.w3.org/2000/svg", "polyline");
        line.setAttribute("points", points);
        line.setAttribute("fill", "none");
        line.setAttribute("stroke", EMOTION_COLORS[emotion]);
        line.setAttribute("stroke-width", "1.2");
        line.setAttribute("data-emotion", emotion);
        svg.appendChild(line);
    }
    return svg;
}
