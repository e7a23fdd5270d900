"""In-process test double for the provider wire contract.

POST to any unreserved path with {prompt, schema, seed?} returns {text}.
A script (JSON array of directives) is replayed in order: ``valid``,
``invalid``, ``delay`` (ms), ``status`` (code), ``empty``. Once the script
runs out, requests get a deterministic schema-valid reply derived from the
request seed. Reserved paths expose test instrumentation: GET /calls,
POST /reset, POST /script.
"""

from __future__ import annotations

import json
import logging
import re
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import urlsplit

from .hashing import GOLDEN_GAMMA, MASK64, mix64

log = logging.getLogger("galaxyatlas.stub")

_FIELD_LINE = re.compile(r"^- (\w+): (.+?)( \(optional\))?$")
_INT_RANGE = re.compile(r"^integer between (-?\d+) and (-?\d+)$")
_REAL_RANGE = re.compile(r"^number between (-?[\d.]+) and (-?[\d.]+)$")
_LIST_DESC = re.compile(r"^list of (.+), at most (\d+) items$")


def _value_for(desc: str, name: str, draw: int):
    if desc == "text":
        return (
            f"Stub {name} dispatch {draw % 10000:04d}: conditions nominal across the "
            "survey grid, no deviations recorded by the automated watch."
        )
    if desc.startswith("one of "):
        values = re.findall(r'"([^"]*)"', desc)
        return values[draw % len(values)] if values else "unknown"
    m = _INT_RANGE.match(desc)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
        return lo + draw % (hi - lo + 1)
    m = _REAL_RANGE.match(desc)
    if m:
        lo, hi = float(m.group(1)), float(m.group(2))
        return lo + ((draw >> 11) / 2**53) * (hi - lo)
    m = _LIST_DESC.match(desc)
    if m:
        element_desc, max_items = m.group(1), int(m.group(2))
        count = 1 + draw % max_items
        return [
            _value_for(element_desc, name, mix64((draw + j + 1) & MASK64))
            for j in range(count)
        ]
    return f"stub {name} value"


def build_valid(schema_fragment: str, seed: int) -> dict:
    """Deterministic document satisfying the field lines of a schema fragment."""
    values: dict = {}
    index = 0
    for line in schema_fragment.splitlines():
        m = _FIELD_LINE.match(line.strip())
        if not m:
            continue
        name, desc = m.group(1), m.group(2)
        index += 1
        draw = mix64((seed + index * GOLDEN_GAMMA) & MASK64)
        values[name] = _value_for(desc, name, draw)
    return values


def build_invalid(schema_fragment: str, seed: int) -> dict:
    values = build_valid(schema_fragment, seed)
    for name in values:
        values[name] = 12345 if isinstance(values[name], str) else "not a number"
        break
    values["unexpected_field"] = True
    return values


class _StubState:
    def __init__(self, script: list | None = None):
        self.lock = threading.Lock()
        self.script = list(script or [])
        self.pos = 0
        self.calls = 0

    def take(self) -> dict | None:
        with self.lock:
            self.calls += 1
            if self.pos < len(self.script):
                directive = self.script[self.pos]
                self.pos += 1
                return directive
            return None


class StubHandler(BaseHTTPRequestHandler):
    server_version = "AtlasStub/0.1"

    def log_message(self, fmt, *args):
        log.debug("stub: " + fmt, *args)

    def _reply(self, code: int, payload: dict):
        body = json.dumps(payload).encode("utf-8")
        try:
            self.send_response(code)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)
        except (BrokenPipeError, ConnectionResetError):
            pass

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b"{}"
        try:
            payload = json.loads(raw)
        except ValueError:
            payload = {}
        return payload if isinstance(payload, dict) else {}

    def do_GET(self):
        state: _StubState = self.server.state
        if urlsplit(self.path).path == "/calls":
            with state.lock:
                self._reply(200, {"calls": state.calls})
        else:
            self._reply(404, {"error": "not found"})

    def do_POST(self):
        state: _StubState = self.server.state
        path = urlsplit(self.path).path
        payload = self._read_body()
        if path == "/reset":
            with state.lock:
                state.pos = 0
                state.calls = 0
            self._reply(200, {"ok": True})
            return
        if path == "/script":
            script = payload.get("script")
            with state.lock:
                state.script = list(script) if isinstance(script, list) else []
                state.pos = 0
            self._reply(200, {"ok": True})
            return

        fragment = payload.get("schema") or ""
        seed = payload.get("seed")
        if not isinstance(seed, int):
            seed = 0
        directive = state.take()
        kind = directive.get("kind") if directive else "valid"
        if kind == "delay":
            time.sleep(float(directive.get("ms", 0)) / 1000.0)
            kind = "valid"
        if kind == "status":
            self._reply(int(directive.get("code", 500)), {"error": "scripted status"})
            return
        if kind == "empty":
            self._reply(200, {"text": ""})
            return
        if kind == "invalid":
            self._reply(200, {"text": json.dumps(build_invalid(fragment, seed))})
            return
        self._reply(200, {"text": json.dumps(build_valid(fragment, seed))})


class StubProviderServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, host: str = "127.0.0.1", port: int = 0, script: list | None = None):
        super().__init__((host, port), StubHandler)
        self.state = _StubState(script)

    @property
    def port(self) -> int:
        return self.server_address[1]


def start_stub(host: str = "127.0.0.1", port: int = 0, script: list | None = None) -> StubProviderServer:
    """Run a stub provider on a background thread; caller shuts it down."""
    server = StubProviderServer(host, port, script)
    thread = threading.Thread(target=server.serve_forever, name="stub-provider", daemon=True)
    thread.start()
    return server
