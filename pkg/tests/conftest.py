from __future__ import annotations

import threading
import time

import httpx
import pytest
from hypothesis import settings

from galaxyatlas.stub_provider import StubProviderServer
from galaxyatlas.universe import GenerationParams, node_index, spawn_node_id

settings.register_profile("ci", derandomize=True, max_examples=60)
settings.load_profile("ci")


class StubHandle:
    """Client-side view of the stub provider with test instrumentation."""

    def __init__(self, server: StubProviderServer):
        self.server = server
        self.base = f"http://127.0.0.1:{server.port}"
        self.endpoint = f"{self.base}/generate"

    def calls(self) -> int:
        return httpx.get(f"{self.base}/calls").json()["calls"]

    def reset(self):
        httpx.post(f"{self.base}/reset")

    def script(self, directives: list):
        httpx.post(f"{self.base}/script", json={"script": directives})


@pytest.fixture(scope="session")
def stub_session():
    server = StubProviderServer()
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield StubHandle(server)
    server.shutdown()
    server.server_close()


@pytest.fixture
def stub(stub_session: StubHandle):
    stub_session.script([])
    stub_session.reset()
    return stub_session


class LiveServer:
    """A real uvicorn server on a random loopback port, run on a thread."""

    def __init__(self, app):
        import uvicorn

        config = uvicorn.Config(app, host="127.0.0.1", port=0, log_level="warning")
        self.server = uvicorn.Server(config)
        self.thread = threading.Thread(target=self.server.run, daemon=True)
        self.thread.start()
        deadline = time.monotonic() + 10
        while not self.server.started:
            if time.monotonic() > deadline:
                raise RuntimeError("uvicorn did not start in time")
            time.sleep(0.01)
        sock = self.server.servers[0].sockets[0]
        self.base = f"http://127.0.0.1:{sock.getsockname()[1]}"

    def stop(self):
        self.server.should_exit = True
        self.thread.join(timeout=10)


@pytest.fixture
def live_server():
    started: list[LiveServer] = []

    def make(app) -> LiveServer:
        server = LiveServer(app)
        started.append(server)
        return server

    yield make
    for server in started:
        server.stop()


@pytest.fixture(scope="session")
def default_params() -> GenerationParams:
    return GenerationParams()


@pytest.fixture(scope="session")
def spawn_record(default_params):
    return node_index(default_params)[spawn_node_id(default_params)]
