"""Drive the HTTP service end to end: universe, briefs, streaming, actions.

Runs the app in-process with the test client so the demo needs no open
ports. The same routes behave identically under `galaxyatlas serve`.
"""

import tempfile
import warnings

# the bundled test client pulls in a noisy deprecation notice on import
warnings.filterwarnings("ignore", message="Using `httpx` with `starlette.testclient`")
from fastapi.testclient import TestClient

from galaxyatlas import GenerationParams, spawn_node_id
from galaxyatlas.service import ServiceConfig, create_app

params = GenerationParams()
config = ServiceConfig(params=params, cache_dir=tempfile.mkdtemp())
client = TestClient(create_app(config))
spawn = spawn_node_id(params)

# the universe endpoint is cacheable; note the strong ETag
resp = client.get("/api/universe")
print(f"GET /api/universe -> {resp.status_code}, {len(resp.content)} bytes, etag {resp.headers['etag'][:18]}...")
resp2 = client.get("/api/universe", headers={"If-None-Match": resp.headers["etag"]})
print(f"conditional refetch -> {resp2.status_code}")

# node detail includes the outgoing lanes
node = client.get(f"/api/node/{spawn}").json()
print(f"\nspawn node: {node['node']['display_name']} ({len(node['adjacent'])} lanes)")

# briefs degrade to the template tier when no provider is configured
brief = client.get(f"/api/node/{spawn}/brief")
print(f"brief tier: {brief.headers['x-tier-used']}")
print("  hook:", brief.json()["document"]["mission_hook"])

# the same brief as a server-sent event stream
with client.stream("GET", f"/api/node/{spawn}/brief", params={"stream": "1"}) as stream:
    raw = "".join(stream.iter_text())
events = [block.split("\n")[0].removeprefix("event: ") for block in raw.strip().split("\n\n")]
print(f"\nstreamed events: {events[0]} -> {events.count('chunk')} chunks -> {events[-1]}")

# actions go through the physics gate; errors come back as typed bodies
travel = client.post(f"/api/voyager/tour/action", json={"kind": "travel", "target": node["adjacent"][0]["node_id"]})
print(f"\ntravel -> {travel.status_code}, fuel {travel.json()['voyager']['fuel']}")

bad = client.post("/api/voyager/tour/action", json={"kind": "travel", "target": spawn * 2})
print(f"bogus travel -> {bad.status_code} {bad.json()['code']}")

scan = client.post("/api/voyager/tour/action", json={"kind": "scan"})
print(f"scan -> brief_ref {scan.json()['brief_ref']['url']}")

meta = client.get("/api/meta").json()
print(f"\nmeta: tiers {meta['tiers']}, sessions {meta['sessions']}, provider {meta['provider_configured']}")
