// Selection-session state: which melody each character gets, whether the
// render button may be enabled, and the render/poll cycle. The view layer
// is a pure projection of this object plus unsaved selections.

import { ApiClient } from "./api.js";
import type {
    Assignment,
    CandidateSet,
    Character,
    ProjectInfo,
    TimelineDoc,
} from "./types.js";

export type Phase = "loading" | "selecting" | "rendering" | "done" | "error";

export interface StateSnapshot {
    phase: Phase;
    error: string | null;
    renderEnabled: boolean;
    selections: Record<string, string>;
    timeline: TimelineDoc | null;
}

export class SelectionSession {
    phase: Phase = "loading";
    error: string | null = null;
    project: ProjectInfo | null = null;
    characters: Character[] = [];
    candidates: Record<string, CandidateSet> = {};
    selections: Record<string, string> = {};
    timeline: TimelineDoc | null = null;
    private rendering = false;

    constructor(
        private api: ApiClient,
        private projectId: string,
        public pollIntervalMs: number = 1000,
    ) {}

    async load(): Promise<void> {
        this.phase = "loading";
        this.error = null;
        try {
            this.project = await this.api.getProject(this.projectId);
            this.characters = await this.api.getCharacters(this.projectId);
            for (const character of this.characters) {
                this.candidates[character.id] =
                    await this.api.getCandidates(this.projectId, character.id);
            }
            // A stored assignment from a previous session pre-selects cards.
            for (const [cid, choice] of Object.entries(this.project.assignment)) {
                this.selections[cid] = choice.melody;
            }
            if (this.project.rendered) {
                this.timeline = await this.api.getTimeline(this.projectId);
                this.phase = "done";
            } else {
                this.phase = "selecting";
            }
        } catch (err) {
            this.phase = "error";
            this.error = String(err);
        }
    }

    select(characterId: string, melodyId: string): void {
        this.selections[characterId] = melodyId;
    }

    get renderEnabled(): boolean {
        return this.characters.length > 0
            && this.characters.every((c) => this.selections[c.id])
            && !this.rendering;
    }

    buildAssignment(): Assignment {
        const assignment: Assignment = {};
        for (const character of this.characters) {
            const set = this.candidates[character.id];
            assignment[character.id] = {
                melody: this.selections[character.id],
                progression: set.progressions[0].id,
            };
        }
        return assignment;
    }

    // PUT the assignment, kick a render, poll until it settles, then pull
    // the fresh timeline. The previous timeline is dropped immediately so
    // the view never shows a stale render as current.
    async submitAndRender(): Promise<void> {
        if (!this.renderEnabled) {
            throw new Error("every character needs a selection first");
        }
        this.rendering = true;
        this.phase = "rendering";
        this.error = null;
        this.timeline = null;
        try {
            await this.api.putAssignment(this.projectId, this.buildAssignment());
            await this.api.startRender(this.projectId);
            for (;;) {
                const status = await this.api.renderStatus(this.projectId);
                if (status.status === "done") break;
                if (status.status === "error") {
                    throw new Error(status.detail || "render failed");
                }
                await sleep(this.pollIntervalMs);
            }
            this.timeline = await this.api.getTimeline(this.projectId);
            this.phase = "done";
        } catch (err) {
            this.phase = "error";
            this.error = String(err);
            throw err;
        } finally {
            this.rendering = false;
        }
    }

    snapshot(): StateSnapshot {
        return {
            phase: this.phase,
            error: this.error,
            renderEnabled: this.renderEnabled,
            selections: { ...this.selections },
            timeline: this.timeline,
        };
    }
}

function sleep(ms: number): Promise<void> {
    return new Promise((resolve) => setTimeout(resolve, ms));
}
