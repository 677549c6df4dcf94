// Thin typed client for the project service. The UI talks to the backend
// exclusively through this module.

import type {
    Assignment,
    CandidateSet,
    Character,
    ProjectInfo,
    RenderStatus,
    TimelineDoc,
} from "./types.js";

export class ApiError extends Error {
    constructor(public status: number, message: string) {
        super(message);
    }
}

async function asJson(response: Response): Promise<unknown> {
    if (!response.ok) {
        let detail = response.statusText;
        try {
            const body = await response.json() as { detail?: string; error?: string };
            detail = body.detail ?? body.error ?? detail;
        } catch {
            // non-JSON error body; keep the status text
        }
        throw new ApiError(response.status, detail);
    }
    return response.json();
}

export class ApiClient {
    constructor(private baseUrl: string = "") {}

    private url(path: string): string {
        return `${this.baseUrl}${path}`;
    }

    async createProject(body: object): Promise<ProjectInfo> {
        const r = await fetch(this.url("/projects"), {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify(body),
        });
        return asJson(r) as Promise<ProjectInfo>;
    }

    async getProject(id: string): Promise<ProjectInfo> {
        return asJson(await fetch(this.url(`/projects/${id}`))) as Promise<ProjectInfo>;
    }

    async getCharacters(id: string): Promise<Character[]> {
        return asJson(await fetch(this.url(`/projects/${id}/characters`))) as
            Promise<Character[]>;
    }

    async getCandidates(id: string, characterId: string): Promise<CandidateSet> {
        return asJson(await fetch(
            this.url(`/projects/${id}/characters/${characterId}/candidates`),
        )) as Promise<CandidateSet>;
    }

    async putAssignment(id: string, assignment: Assignment): Promise<Assignment> {
        const r = await fetch(this.url(`/projects/${id}/assignment`), {
            method: "PUT",
            headers: { "content-type": "application/json" },
            body: JSON.stringify(assignment),
        });
        return asJson(r) as Promise<Assignment>;
    }

    async startRender(id: string): Promise<void> {
        await asJson(await fetch(this.url(`/projects/${id}/render`),
                                 { method: "POST" }));
    }

    async renderStatus(id: string): Promise<RenderStatus> {
        return asJson(await fetch(this.url(`/projects/${id}/render/status`))) as
            Promise<RenderStatus>;
    }

    async getTimeline(id: string): Promise<TimelineDoc> {
        return asJson(await fetch(this.url(`/projects/${id}/timeline.json`))) as
            Promise<TimelineDoc>;
    }

    midiUrl(id: string): string {
        return this.url(`/projects/${id}/score.mid`);
    }
}
