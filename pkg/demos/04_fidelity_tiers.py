"""Walk one node through all three fidelity tiers against the stub provider.

high  = a live provider call that passed validation
medium = served from the on-disk cache
base  = the deterministic template, always available

The engine degrades in that order and the world never blocks on the
provider being up.
"""

import tempfile
import threading

from galaxyatlas import GenerationParams, node_index, spawn_node_id
from galaxyatlas.imagination import FileCache, ImaginationEngine, ProviderConfig
from galaxyatlas.plugins import default_registry
from galaxyatlas.stub_provider import StubProviderServer

params = GenerationParams()
node = node_index(params)[spawn_node_id(params)]
registry = default_registry()

# no provider configured: template tier only
offline = ImaginationEngine(registry, FileCache(tempfile.mkdtemp()))
result = offline.synthesize("mission-brief", node)
print("offline tier:", result.tier_used)
print("  terrain:", result.document.values["terrain"])

# start a local stand-in provider that answers with schema-valid documents
stub = StubProviderServer()
thread = threading.Thread(target=stub.serve_forever, daemon=True)
thread.start()

provider = ProviderConfig(endpoint_url=f"http://127.0.0.1:{stub.port}/generate", api_key="demo")
cache = FileCache(tempfile.mkdtemp())
engine = ImaginationEngine(registry, cache, provider)

first = engine.synthesize("mission-brief", node)
second = engine.synthesize("mission-brief", node)
print("\nwith a provider:")
print("  first request tier:", first.tier_used)
print("  second request tier:", second.tier_used, "(cache hit, no new call)")
print("  cached entries on disk:", cache.count())

# a field-log for the same node uses a different schema and its own cache slot
log = engine.synthesize("field-log", node)
print("  field-log tier:", log.tier_used)
print("  log title:", log.document.values["log_title"])
print("  tier counters:", engine.counters())

stub.shutdown()
stub.server_close()
