// DOM composition: character cards with candidate pickers, the render
// button, the timeline, and error banners. All data flows through
// SelectionSession; this module only projects it into elements.

import { ApiClient } from "./api.js";
import { Audition } from "./audition.js";
import { pianoRoll } from "./pianoroll.js";
import { emotionSparkline } from "./sparkline.js";
import { SelectionSession } from "./state.js";
import { timelineView } from "./timeline.js";
import type { Candidate, Character, MelodyNotation } from "./types.js";

export class App {
    readonly session: SelectionSession;
    private audition = new Audition();

    constructor(
        private root: HTMLElement,
        private api: ApiClient,
        private projectId: string,
        pollIntervalMs = 1000,
    ) {
        this.session = new SelectionSession(api, projectId, pollIntervalMs);
    }

    async init(): Promise<void> {
        this.root.innerHTML = "<p class='status'>loading project…</p>";
        await this.session.load();
        this.renderAll();
    }

    renderAll(): void {
        const s = this.session;
        this.root.innerHTML = "";
        if (s.phase === "error") {
            this.root.appendChild(this.banner(s.error ?? "unknown error"));
            const retry = document.createElement("button");
            retry.textContent = "Retry";
            retry.className = "retry";
            retry.addEventListener("click", () => void this.init());
            this.root.appendChild(retry);
            return;
        }

        const cards = document.createElement("div");
        cards.className = "cards";
        for (const character of s.characters) {
            cards.appendChild(this.characterCard(character));
        }
        this.root.appendChild(cards);

        const controls = document.createElement("div");
        controls.className = "controls";
        const renderButton = document.createElement("button");
        renderButton.id = "render";
        renderButton.textContent =
            s.phase === "rendering" ? "Rendering…" : "Render score";
        renderButton.disabled = !s.renderEnabled;
        renderButton.addEventListener("click", () => {
            void this.session.submitAndRender()
                .catch(() => undefined)
                .then(() => this.renderAll());
            this.renderAll();
        });
        controls.appendChild(renderButton);
        if (s.timeline) {
            const link = document.createElement("a");
            link.href = this.api.midiUrl(this.projectId);
            link.textContent = "Download score.mid";
            link.className = "midi-link";
            controls.appendChild(link);
        }
        this.root.appendChild(controls);

        if (s.phase === "rendering") {
            const note = document.createElement("p");
            note.className = "status";
            note.textContent = "rendering…";
            this.root.appendChild(note);
        }
        if (s.timeline && s.project) {
            const heading = document.createElement("h2");
            heading.textContent = "Scored timeline";
            this.root.appendChild(heading);
            this.root.appendChild(timelineView(
                s.timeline, s.characters.map((c) => c.id),
                s.project.duration));
        }
    }

    private characterCard(character: Character): HTMLElement {
        const s = this.session;
        const card = document.createElement("section");
        card.className = "card";
        card.dataset.character = character.id;

        const title = document.createElement("h2");
        title.textContent = character.id;
        card.appendChild(title);

        const presence = document.createElement("p");
        presence.className = "presence";
        presence.textContent = `${character.screen_frames} frames on screen`;
        card.appendChild(presence);
        card.appendChild(emotionSparkline(character.arc));

        const list = document.createElement("div");
        list.className = "candidates";
        for (const candidate of s.candidates[character.id].melodies) {
            list.appendChild(this.candidateRow(character.id, candidate));
        }
        card.appendChild(list);
        return card;
    }

    private candidateRow(characterId: string, candidate: Candidate): HTMLElement {
        const s = this.session;
        const row = document.createElement("label");
        row.className = "candidate";
        row.dataset.candidate = candidate.id;

        const radio = document.createElement("input");
        radio.type = "radio";
        radio.name = `melody-${characterId}`;
        radio.value = candidate.id;
        radio.checked = s.selections[characterId] === candidate.id;
        // Only the button state depends on selections; leave the cards
        // alone so focus and scroll position survive.
        radio.addEventListener("change", () => {
            s.select(characterId, candidate.id);
            this.updateRenderButton();
        });
        row.appendChild(radio);

        const notation = candidate.notation as MelodyNotation;
        row.appendChild(pianoRoll(notation));

        const play = document.createElement("button");
        play.type = "button";
        play.className = "play";
        play.textContent = "▶";
        play.title = "audition this melody";
        play.addEventListener("click", (event) => {
            event.preventDefault();
            this.audition.play(notation);
        });
        row.appendChild(play);

        const summary = document.createElement("span");
        summary.className = "summary";
        const a = candidate.annotations;
        summary.textContent =
            `${candidate.id} · contour ↑${(a.contour_ascending ?? 0).toFixed(2)}`
            + ` ↓${(a.contour_descending ?? 0).toFixed(2)}`
            + ` · tempo ${Math.round(a.tempo_min ?? 0)}-${Math.round(a.tempo_max ?? 0)}`;
        row.appendChild(summary);
        return row;
    }

    private updateRenderButton(): void {
        const button = this.root.querySelector<HTMLButtonElement>("#render");
        if (button) {
            button.disabled = !this.session.renderEnabled;
        }
    }

    private banner(message: string): HTMLElement {
        const div = document.createElement("div");
        div.className = "banner";
        div.textContent = message;
        return div;
    }
}
