"""Project service contract: lifecycle, candidates, render, artifacts."""

import json
import time

import pytest
from fastapi.testclient import TestClient

from conftest import fixture_film
from smf import parse_smf
from cuescore.config import EngineConfig
from cuescore.service import create_app
from dataclasses import replace


@pytest.fixture(scope="module")
def client(tmp_path_factory):
    config = replace(EngineConfig(), melody_pool_size=60, chord_pool_size=60)
    app = create_app(tmp_path_factory.mktemp("projects"), config)
    with TestClient(app) as c:
        yield c


@pytest.fixture(scope="module")
def project(client):
    response = client.post("/projects", json={"analysis": fixture_film(),
                                              "seed": 42})
    assert response.status_code == 201
    return response.json()


def wait_for_render(client, project_id, timeout=30.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        status = client.get(f"/projects/{project_id}/render/status").json()
        if status["status"] in ("done", "error"):
            return status
        time.sleep(0.05)
    raise TimeoutError("render did not finish")


def full_assignment(client, project_id):
    assignment = {}
    taken = set()
    for character in client.get(f"/projects/{project_id}/characters").json():
        cands = client.get(
            f"/projects/{project_id}/characters/{character['id']}/candidates"
        ).json()
        melody = next(c["id"] for c in cands["melodies"]
                      if c["id"] not in taken)
        taken.add(melody)
        assignment[character["id"]] = {
            "melody": melody,
            "progression": cands["progressions"][0]["id"],
        }
    return assignment


class TestProjectLifecycle:
    def test_create_returns_id(self, project):
        assert project["id"]
        assert project["seed"] == 42
        assert project["characters"] == ["anna", "ben", "cara"]

    def test_get_project(self, client, project):
        info = client.get(f"/projects/{project['id']}").json()
        assert info["id"] == project["id"]
        assert info["segments"] >= 3

    def test_unknown_project_404(self, client):
        assert client.get("/projects/nope").status_code == 404

    def test_characters_ordered_by_presence(self, client, project):
        chars = client.get(f"/projects/{project['id']}/characters").json()
        frames = [c["screen_frames"] for c in chars]
        assert frames == sorted(frames, reverse=True)
        assert all(c["arc"] for c in chars)

    def test_bad_analysis_400(self, client):
        response = client.post("/projects", json={"analysis": {"fps": 1}})
        assert response.status_code == 400

    def test_candidates_exactly_three_each(self, client, project):
        for cid in project["characters"]:
            cands = client.get(
                f"/projects/{project['id']}/characters/{cid}/candidates"
            ).json()
            assert len(cands["melodies"]) == 3
            assert len(cands["progressions"]) == 3
            for c in cands["melodies"] + cands["progressions"]:
                assert "annotations" in c and "notation" in c

    def test_unknown_character_404(self, client, project):
        response = client.get(
            f"/projects/{project['id']}/characters/ghost/candidates")
        assert response.status_code == 404


class TestAssignmentAndRender:
    def test_render_before_assignment_409(self, client, project):
        response = client.post(f"/projects/{project['id']}/render")
        assert response.status_code == 409

    def test_partial_assignment_409(self, client, project):
        assignment = full_assignment(client, project["id"])
        first = dict(list(assignment.items())[:1])
        assert client.put(f"/projects/{project['id']}/assignment",
                          json=first).status_code == 200
        assert client.post(f"/projects/{project['id']}/render").status_code == 409

    def test_invalid_ids_400(self, client, project):
        bad = {cid: {"melody": "mel-9999", "progression": "prog-0000"}
               for cid in project["characters"]}
        response = client.put(f"/projects/{project['id']}/assignment", json=bad)
        assert response.status_code == 400

    def test_shared_melody_400(self, client, project):
        assignment = full_assignment(client, project["id"])
        ids = list(assignment)
        assignment[ids[1]]["melody"] = assignment[ids[0]]["melody"]
        response = client.put(f"/projects/{project['id']}/assignment",
                              json=assignment)
        assert response.status_code == 400

    def test_full_render_flow(self, client, project):
        pid = project["id"]
        assignment = full_assignment(client, pid)
        assert client.put(f"/projects/{pid}/assignment",
                          json=assignment).status_code == 200
        assert client.post(f"/projects/{pid}/render").status_code == 200
        assert wait_for_render(client, pid)["status"] == "done"

        midi = client.get(f"/projects/{pid}/score.mid")
        assert midi.status_code == 200
        assert midi.headers["content-type"].startswith("audio/midi")
        smf = parse_smf(midi.content)
        assert smf.fmt == 1 and len(smf.tracks) == 5

        sheet = client.get(f"/projects/{pid}/score.chords.txt")
        assert sheet.status_code == 200

        timeline = client.get(f"/projects/{pid}/timeline.json")
        assert timeline.status_code == 200
        doc = json.loads(timeline.content)
        segments = client.get(f"/projects/{pid}/segments").json()
        assert len(doc["cues"]) == len(segments)

    def test_rerender_identical(self, client, project):
        pid = project["id"]
        before = client.get(f"/projects/{pid}/score.mid").content
        timeline_before = client.get(f"/projects/{pid}/timeline.json").content
        assert client.post(f"/projects/{pid}/render").status_code == 200
        wait_for_render(client, pid)
        assert client.get(f"/projects/{pid}/score.mid").content == before
        assert client.get(f"/projects/{pid}/timeline.json").content \
            == timeline_before

    def test_assignment_change_invalidates_render(self, client, project):
        pid = project["id"]
        assignment = full_assignment(client, pid)
        cands = client.get(
            f"/projects/{pid}/characters/{project['characters'][0]}/candidates"
        ).json()
        used = {a["melody"] for a in assignment.values()}
        other = next(c["id"] for c in cands["melodies"] if c["id"] not in used)
        assignment[project["characters"][0]]["melody"] = other
        assert client.put(f"/projects/{pid}/assignment",
                          json=assignment).status_code == 200
        assert client.get(f"/projects/{pid}/score.mid").status_code == 404
        assert client.get(f"/projects/{pid}/render/status").json()["status"] \
            == "idle"
