import base64
import json
from pathlib import Path

import numpy as np
import pytest
from fastapi.testclient import TestClient

from housegan.core import BubbleDiagram
from housegan.dataio import Palette
from housegan.models import AblationMode, Checkpoint, TINY_PRESET, create_models, save_checkpoint
from housegan.service import create_app


@pytest.fixture(scope="module")
def client(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("ckpts")
    gen, disc = create_models("housegan", TINY_PRESET, AblationMode(), seed=3)
    save_checkpoint(Checkpoint.from_models(gen, disc, seed=3, train_group="4-6"), tmp / "demo.npz")
    cnn_gen, cnn_disc = create_models("cnn-only", TINY_PRESET, AblationMode(), seed=4)
    save_checkpoint(Checkpoint.from_models(cnn_gen, cnn_disc, seed=4, train_group="1-3"), tmp / "cnn.npz")
    return TestClient(create_app(checkpoint_dir=tmp))


DIAGRAM = BubbleDiagram([2, 1, 3], [(0, 1), (1, 2)]).to_json_dict()


class TestRoomTypes:
    def test_ten_types_in_code_order(self, client):
        body = client.get("/roomtypes").json()
        assert len(body) == 10
        assert [entry["code"] for entry in body] == list(range(10))
        assert body[2]["name"] == "bedroom"

    def test_colors_echo_palette(self, client):
        palette = Palette.default()
        body = client.get("/roomtypes").json()
        for entry in body:
            assert tuple(entry["color"]) == palette.colors[entry["code"]]


class TestCheckpoints:
    def test_listing(self, client):
        body = client.get("/checkpoints").json()
        ids = {entry["id"] for entry in body}
        assert ids == {"demo", "cnn"}
        demo = next(e for e in body if e["id"] == "demo")
        assert demo["train_group"] == "4-6"
        assert demo["per_room_noise"] is True
        assert demo["preset"] == "tiny"

    def test_unknown_checkpoint_404(self, client):
        r = client.post("/generate", json={"diagram": DIAGRAM, "checkpoint_id": "missing"})
        assert r.status_code == 404


class TestGenerate:
    def test_sample_count_and_schema(self, client):
        r = client.post(
            "/generate", json={"diagram": DIAGRAM, "checkpoint_id": "demo", "num_samples": 10, "seed": 5}
        )
        assert r.status_code == 200
        body = r.json()
        assert len(body["samples"]) == 10
        sample = body["samples"][0]
        assert set(sample["layout"]) == {"canvas", "rooms"}
        assert len(sample["layout"]["rooms"]) == 3
        assert {"distance", "exact", "degenerate_rooms"} <= set(sample["compatibility"])
        assert set(sample["noise"]) == {"0", "1", "2"}

    def test_seeded_requests_are_identical(self, client):
        payload = {"diagram": DIAGRAM, "checkpoint_id": "demo", "num_samples": 3, "seed": 11}
        assert client.post("/generate", json=payload).json() == client.post("/generate", json=payload).json()

    def test_noise_record_regenerates_layout(self, client):
        first = client.post(
            "/generate", json={"diagram": DIAGRAM, "checkpoint_id": "demo", "num_samples": 1, "seed": 7}
        ).json()["samples"][0]
        again = client.post(
            "/generate",
            json={
                "diagram": DIAGRAM,
                "checkpoint_id": "demo",
                "num_samples": 2,
                "seed": 999,  # different seed; pinned noise must win
                "pinned_noise": first["noise"],
            },
        ).json()
        assert all(s["layout"] == first["layout"] for s in again["samples"])

    def test_partial_pinning_changes_only_free_rooms(self, client):
        first = client.post(
            "/generate", json={"diagram": DIAGRAM, "checkpoint_id": "demo", "num_samples": 1, "seed": 7}
        ).json()["samples"][0]
        pinned = {"0": first["noise"]["0"]}
        again = client.post(
            "/generate",
            json={
                "diagram": DIAGRAM,
                "checkpoint_id": "demo",
                "num_samples": 1,
                "seed": 7,
                "pinned_noise": pinned,
            },
        ).json()["samples"][0]
        assert again["noise"]["0"] == first["noise"]["0"]
        assert again["noise"]["1"] == first["noise"]["1"]  # same seed stream

    def test_masks_payload_decodes(self, client):
        body = client.post(
            "/generate",
            json={"diagram": DIAGRAM, "checkpoint_id": "demo", "num_samples": 1, "seed": 1, "include_masks": True},
        ).json()
        payload = body["samples"][0]["masks"]
        data = np.frombuffer(base64.b64decode(payload["data"]), dtype="<f4").reshape(payload["shape"])
        assert data.shape == (3, TINY_PRESET.mask_size, TINY_PRESET.mask_size)
        assert np.abs(data).max() <= 1.0

    def test_masks_omitted_by_default(self, client):
        body = client.post(
            "/generate", json={"diagram": DIAGRAM, "checkpoint_id": "demo", "num_samples": 1, "seed": 1}
        ).json()
        assert body["samples"][0]["masks"] is None


class TestValidation:
    def test_self_loop_400(self, client):
        bad = {"nodes": [{"id": 0, "type": 1}], "edges": [[0, 0]]}
        r = client.post("/generate", json={"diagram": bad, "checkpoint_id": "demo"})
        assert r.status_code == 400

    def test_noncontiguous_ids_400(self, client):
        bad = {"nodes": [{"id": 0, "type": 1}, {"id": 5, "type": 2}], "edges": []}
        r = client.post("/generate", json={"diagram": bad, "checkpoint_id": "demo"})
        assert r.status_code == 400

    def test_too_many_rooms_400(self, client):
        bad = {"nodes": [{"id": i, "type": 0} for i in range(41)], "edges": []}
        r = client.post("/generate", json={"diagram": bad, "checkpoint_id": "demo"})
        assert r.status_code == 400

    def test_pinned_unknown_node_422(self, client):
        r = client.post(
            "/generate",
            json={"diagram": DIAGRAM, "checkpoint_id": "demo", "pinned_noise": {"9": [0.0] * 8}},
        )
        assert r.status_code == 422

    def test_pinned_wrong_length_422(self, client):
        r = client.post(
            "/generate",
            json={"diagram": DIAGRAM, "checkpoint_id": "demo", "pinned_noise": {"0": [0.0] * 3}},
        )
        assert r.status_code == 422


class TestCnnOnlyCheckpoint:
    def test_sample_noise_key(self, client):
        body = client.post(
            "/generate", json={"diagram": DIAGRAM, "checkpoint_id": "cnn", "num_samples": 1, "seed": 2}
        ).json()
        sample = body["samples"][0]
        assert set(sample["noise"]) == {"*"}
        assert len(sample["layout"]["rooms"]) == 3

    def test_per_node_pinning_rejected(self, client):
        r = client.post(
            "/generate",
            json={"diagram": DIAGRAM, "checkpoint_id": "cnn", "pinned_noise": {"0": [0.0] * 8}},
        )
        assert r.status_code == 422


class TestOpenApi:
    def test_shipped_document_matches_app(self, client):
        shipped = json.loads((Path(__file__).resolve().parent.parent / "openapi.json").read_text())
        assert shipped == client.app.openapi()
