from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from galaxyatlas.plugins import default_registry
from galaxyatlas.schema import GeneratedDocument, validate_document
from galaxyatlas.service import ServiceConfig, SessionStore, create_app
from galaxyatlas.universe import GenerationParams, adjacency_map, cached_universe, spawn_node_id
from galaxyatlas.world import ActionEvent, apply_action, new_session

PARAMS = GenerationParams()
SPAWN = spawn_node_id(PARAMS)


@pytest.fixture
def client(tmp_path):
    config = ServiceConfig(params=PARAMS, cache_dir=str(tmp_path / "cache"))
    return TestClient(create_app(config))


def sse_events(raw: str) -> list[tuple[str, dict]]:
    events = []
    for block in raw.split("\n\n"):
        block = block.strip()
        if not block:
            continue
        lines = block.split("\n")
        name = lines[0].removeprefix("event: ")
        data = json.loads(lines[1].removeprefix("data: "))
        events.append((name, data))
    return events


class TestUniverse:
    def test_body_matches_generator_bytes(self, client):
        resp = client.get("/api/universe")
        assert resp.status_code == 200
        assert resp.content == cached_universe(PARAMS).to_bytes()

    def test_identical_queries_identical_bodies_and_etags(self, client):
        a = client.get("/api/universe", params={"world_seed": "7"})
        b = client.get("/api/universe", params={"world_seed": "7"})
        assert a.content == b.content
        assert a.headers["etag"] == b.headers["etag"]

    def test_seed_changes_body(self, client):
        a = client.get("/api/universe", params={"world_seed": "7"})
        b = client.get("/api/universe", params={"world_seed": "8"})
        assert a.content != b.content
        assert a.headers["etag"] != b.headers["etag"]

    def test_if_none_match_returns_304(self, client):
        etag = client.get("/api/universe").headers["etag"]
        resp = client.get("/api/universe", headers={"If-None-Match": etag})
        assert resp.status_code == 304

    def test_density_out_of_range_is_400(self, client):
        resp = client.get("/api/universe", params={"density": "3.5"})
        assert resp.status_code == 400
        body = resp.json()
        assert body["code"] == "IllegalDensity"
        assert set(body) == {"code", "message", "details"}

    def test_non_numeric_seed_is_400(self, client):
        resp = client.get("/api/universe", params={"world_seed": "abc"})
        assert resp.status_code == 400
        assert resp.json()["code"] == "IllegalWorldSeed"


class TestNode:
    def test_node_with_adjacency(self, client):
        resp = client.get(f"/api/node/{SPAWN}")
        assert resp.status_code == 200
        body = resp.json()
        assert body["node"]["node_id"] == SPAWN
        costs = {entry["node_id"]: entry["cost"] for entry in body["adjacent"]}
        assert costs == adjacency_map(PARAMS)[SPAWN]

    def test_unknown_node_404(self, client):
        resp = client.get("/api/node/ffffffffffffff00")
        assert resp.status_code == 404
        assert resp.json()["code"] == "UnknownNode"

    def test_node_respects_query_params(self, client):
        other_spawn = spawn_node_id(GenerationParams(world_seed=7))
        resp = client.get(f"/api/node/{other_spawn}", params={"world_seed": "7"})
        assert resp.status_code == 200


class TestBrief:
    def test_provider_disabled_serves_base_tier(self, client):
        resp = client.get(f"/api/node/{SPAWN}/brief")
        assert resp.status_code == 200
        assert resp.headers["x-tier-used"] == "base"
        body = resp.json()
        assert body["tier_used"] == "base"
        doc = GeneratedDocument.from_wire(body["document"])
        schema = default_registry().get("mission-brief").schema
        assert validate_document(doc, schema) == []

    def test_plugin_selection(self, client):
        resp = client.get(f"/api/node/{SPAWN}/brief", params={"plugin": "field-log"})
        assert resp.json()["document"]["$schema"] == "field-log"

    def test_unknown_plugin_404(self, client):
        resp = client.get(f"/api/node/{SPAWN}/brief", params={"plugin": "ghost"})
        assert resp.status_code == 404
        assert resp.json()["code"] == "UnknownPlugin"

    def test_unknown_node_404(self, client):
        resp = client.get("/api/node/ffffffffffffff00/brief")
        assert resp.status_code == 404

    def test_bad_fidelity_400(self, client):
        resp = client.get(f"/api/node/{SPAWN}/brief", params={"fidelity": "ultra"})
        assert resp.status_code == 400
        assert resp.json()["code"] == "IllegalFidelity"

    def test_stream_emits_status_chunks_done(self, client):
        with client.stream("GET", f"/api/node/{SPAWN}/brief", params={"stream": "1"}) as resp:
            assert resp.status_code == 200
            assert resp.headers["content-type"].startswith("text/event-stream")
            raw = "".join(resp.iter_text())
        events = sse_events(raw)
        names = [name for name, _ in events]
        assert names[0] == "status"
        assert events[0][1]["state"] == "syncing"
        assert names[-1] == "done"
        assert names.count("chunk") >= 1

    def test_stream_chunks_reassemble_into_final_document(self, client):
        with client.stream("GET", f"/api/node/{SPAWN}/brief", params={"stream": "true"}) as resp:
            raw = "".join(resp.iter_text())
        events = sse_events(raw)
        final = events[-1][1]["document"]
        rebuilt: dict = {}
        for name, data in events:
            if name == "chunk":
                rebuilt[data["field"]] = rebuilt.get(data["field"], "") + data["delta"]
        for field_name, text in rebuilt.items():
            assert final[field_name] == text

    def test_stream_final_document_validates(self, client):
        with client.stream("GET", f"/api/node/{SPAWN}/brief", params={"stream": "1"}) as resp:
            raw = "".join(resp.iter_text())
        events = sse_events(raw)
        doc = GeneratedDocument.from_wire(events[-1][1]["document"])
        schema = default_registry().get("mission-brief").schema
        assert validate_document(doc, schema) == []


class TestActions:
    def test_travel_reduces_fuel_by_lane_cost(self, client):
        target, cost = sorted(adjacency_map(PARAMS)[SPAWN].items())[0]
        resp = client.post("/api/voyager/t1/action", json={"kind": "travel", "target": target})
        assert resp.status_code == 200
        body = resp.json()
        assert body["voyager"]["fuel"] == 100 - cost
        assert body["voyager"]["location"] == target
        assert body["tick"] == 1

    def test_insufficient_fuel_422_state_unchanged(self, client):
        adj = adjacency_map(PARAMS)
        location = SPAWN
        fuel = 100
        # walk greedily until no affordable lane remains
        while True:
            affordable = [(t, c) for t, c in sorted(adj[location].items()) if c <= fuel]
            if not affordable:
                break
            target, cost = affordable[0]
            resp = client.post("/api/voyager/t2/action", json={"kind": "travel", "target": target})
            assert resp.status_code == 200
            fuel -= cost
            location = target
        target, cost = sorted(adj[location].items())[0]
        resp = client.post("/api/voyager/t2/action", json={"kind": "travel", "target": target})
        assert resp.status_code == 422
        body = resp.json()
        assert body["code"] == "InsufficientFuel"
        again = client.post("/api/voyager/t2/action", json={"kind": "scan"})
        assert again.json()["voyager"]["fuel"] == fuel

    def test_no_lane_422(self, client):
        adj = adjacency_map(PARAMS)
        far = next(n for n in adj if n != SPAWN and n not in adj[SPAWN])
        resp = client.post("/api/voyager/t3/action", json={"kind": "travel", "target": far})
        assert resp.status_code == 422
        assert resp.json()["code"] == "NoLane"

    def test_scan_returns_brief_ref_that_resolves(self, client):
        resp = client.post("/api/voyager/t4/action", json={"kind": "scan"})
        assert resp.status_code == 200
        ref = resp.json()["brief_ref"]
        assert ref["node_id"] == SPAWN
        brief = client.get(ref["url"])
        assert brief.status_code == 200

    def test_malformed_action_422(self, client):
        resp = client.post("/api/voyager/t5/action", json={"kind": "teleport"})
        assert resp.status_code == 422
        assert resp.json()["code"] == "InvalidAction"
        resp = client.post(
            "/api/voyager/t5/action", content=b"{", headers={"Content-Type": "application/json"}
        )
        assert resp.status_code == 422
        assert resp.json()["code"] == "InvalidAction"

    def test_reseed_moves_session_to_new_universe(self, client):
        resp = client.post("/api/voyager/t6/action", json={"kind": "reseed"})
        assert resp.status_code == 200
        body = resp.json()
        assert body["params"]["world_seed"] == str(PARAMS.world_seed + 1)
        assert body["voyager"]["location"] == spawn_node_id(PARAMS.with_world_seed(PARAMS.world_seed + 1))

    def test_sessions_are_independent(self, client):
        target, cost = sorted(adjacency_map(PARAMS)[SPAWN].items())[0]
        client.post("/api/voyager/a/action", json={"kind": "travel", "target": target})
        resp = client.post("/api/voyager/b/action", json={"kind": "scan"})
        assert resp.json()["voyager"]["fuel"] == 100
        assert resp.json()["voyager"]["location"] == SPAWN


class TestPluginsAndMeta:
    def test_plugins_enumerated_with_schemas(self, client):
        body = client.get("/api/plugins").json()
        names = [p["name"] for p in body["plugins"]]
        assert names == ["field-log", "mission-brief"]
        brief = next(p for p in body["plugins"] if p["name"] == "mission-brief")
        field_names = [f["name"] for f in brief["schema"]["fields"]]
        assert "terrain" in field_names and "threat_level" in field_names

    def test_meta_counts(self, client):
        meta = client.get("/api/meta").json()
        assert meta["provider_configured"] is False
        assert meta["cache_entries"] == 0
        client.get(f"/api/node/{SPAWN}/brief")
        client.post("/api/voyager/m/action", json={"kind": "scan"})
        meta = client.get("/api/meta").json()
        assert meta["tiers"]["base"] >= 1
        assert meta["sessions"] == 1
        assert meta["uptime_seconds"] >= 0

    def test_provider_key_never_leaks(self, tmp_path, stub):
        secret = "extremely-secret-key-1234"
        config = ServiceConfig(
            params=PARAMS,
            cache_dir=str(tmp_path / "cache"),
            provider_endpoint=stub.endpoint,
            provider_key=secret,
        )
        client = TestClient(create_app(config))
        responses = [
            client.get("/api/meta"),
            client.get("/api/plugins"),
            client.get(f"/api/node/{SPAWN}/brief"),
            client.get("/api/universe"),
        ]
        for resp in responses:
            assert secret not in resp.text
        assert client.get("/api/meta").json()["provider_configured"] is True
        cache_files = list((tmp_path / "cache").rglob("*.json"))
        assert cache_files, "expected a cached entry from the high-tier brief"
        for path in cache_files:
            assert secret not in path.read_text()


class TestStatelessReads:
    def test_restart_with_same_cache_dir_reproduces_responses(self, tmp_path, stub):
        cache_dir = str(tmp_path / "cache")
        config = ServiceConfig(
            params=PARAMS, cache_dir=cache_dir, provider_endpoint=stub.endpoint, provider_key="k"
        )
        first = TestClient(create_app(config))
        brief1 = first.get(f"/api/node/{SPAWN}/brief")
        assert brief1.json()["tier_used"] == "high"
        universe1 = first.get("/api/universe")

        second = TestClient(create_app(config))
        brief2 = second.get(f"/api/node/{SPAWN}/brief")
        universe2 = second.get("/api/universe")
        assert brief2.json()["tier_used"] == "medium"
        assert brief2.json()["document"] == brief1.json()["document"]
        assert universe2.content == universe1.content


class TestSnapshot:
    def test_actions_replay_on_restart(self, tmp_path):
        snapshot = str(tmp_path / "actions.jsonl")
        config = ServiceConfig(params=PARAMS, cache_dir=str(tmp_path / "c"), snapshot_path=snapshot)
        client = TestClient(create_app(config))
        target, cost = sorted(adjacency_map(PARAMS)[SPAWN].items())[0]
        client.post("/api/voyager/s1/action", json={"kind": "travel", "target": target})
        client.post("/api/voyager/s1/action", json={"kind": "scan"})
        client.post("/api/voyager/s2/action", json={"kind": "scan"})

        reborn = TestClient(create_app(config))
        meta = reborn.get("/api/meta").json()
        assert meta["sessions"] == 2
        resp = reborn.post("/api/voyager/s1/action", json={"kind": "scan"})
        body = resp.json()
        assert body["voyager"]["location"] == target
        assert body["voyager"]["fuel"] == 100 - cost
        assert body["tick"] == 3

    def test_snapshot_lines_are_actions(self, tmp_path):
        snapshot = tmp_path / "log.jsonl"
        config = ServiceConfig(params=PARAMS, cache_dir=str(tmp_path / "c"), snapshot_path=str(snapshot))
        client = TestClient(create_app(config))
        client.post("/api/voyager/x/action", json={"kind": "scan"})
        lines = snapshot.read_text().strip().splitlines()
        assert len(lines) == 1
        entry = json.loads(lines[0])
        assert entry == {"action": {"kind": "scan"}, "session": "x"}

    def test_rejected_actions_not_logged(self, tmp_path):
        snapshot = tmp_path / "log.jsonl"
        config = ServiceConfig(params=PARAMS, cache_dir=str(tmp_path / "c"), snapshot_path=str(snapshot))
        client = TestClient(create_app(config))
        client.post("/api/voyager/x/action", json={"kind": "travel", "target": "nope"})
        assert not snapshot.exists() or snapshot.read_text().strip() == ""


class TestSessionStoreUnit:
    def test_lock_for_is_stable(self):
        store = SessionStore(PARAMS)
        assert store.lock_for("a") is store.lock_for("a")
        assert store.lock_for("a") is not store.lock_for("b")

    def test_replay_skips_corrupt_lines(self, tmp_path):
        path = tmp_path / "snap.jsonl"
        good = json.dumps({"session": "s", "action": {"kind": "scan"}})
        path.write_text("not json\n" + good + "\n{\"session\": \"s\"}\n")
        store = SessionStore(PARAMS, str(path))
        assert store.count() == 1
        state = store.get_or_create("s")
        assert state.tick == 1

    def test_manual_replay_equivalence(self, tmp_path):
        path = tmp_path / "snap.jsonl"
        events = [ActionEvent("scan"), ActionEvent("scan")]
        with path.open("w") as fh:
            for event in events:
                fh.write(json.dumps({"session": "s", "action": event.to_dict()}) + "\n")
        store = SessionStore(PARAMS, str(path))
        expected = new_session("s", PARAMS)
        for event in events:
            expected = apply_action(expected, event)
        assert store.get_or_create("s").to_bytes() == expected.to_bytes()
