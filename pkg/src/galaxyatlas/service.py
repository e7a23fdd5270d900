"""HTTP surface: universe retrieval, node briefs (with SSE streaming),
voyager sessions, plugin listing, and health introspection.

All reads are pure functions of query parameters and cache contents.
Session mutations are serialized per session id; a second writer arriving
while one is in flight gets 409 rather than queueing. Error bodies share
one shape: {code, message, details}.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from dataclasses import dataclass, field
from urllib.parse import urlencode

from fastapi import Body, FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, StreamingResponse

from . import __version__
from .imagination import FileCache, ImaginationEngine, ProviderConfig
from .plugins import PluginRegistry, UnknownPlugin, default_registry
from .serialize import canonical_json
from .universe import GenerationParams, ParamError, adjacency_map, cached_universe, node_index
from .world import ActionEvent, DomainError, InvalidAction, PhysicsState, apply_action, new_session

log = logging.getLogger("galaxyatlas.service")

DEFAULT_KEY_ENV = "WWM_PROVIDER_KEY"
FIDELITY_LEVELS = ("high", "medium", "base")

_TRUE_WORDS = ("1", "true", "yes", "on")


@dataclass
class ServiceConfig:
    params: GenerationParams = field(default_factory=GenerationParams)
    cache_dir: str = "cache"
    provider_endpoint: str | None = None
    key_env: str = DEFAULT_KEY_ENV
    provider_key: str | None = None
    default_fidelity: str = "high"
    in_flight_limit: int = 4
    force_fresh: bool = False
    snapshot_path: str | None = None
    timeout_ms: int = 10000
    max_retries: int = 2
    sampling_seed_supported: bool = True


class SessionStore:
    """In-memory voyager sessions with an optional append-only action log."""

    def __init__(self, base_params: GenerationParams, snapshot_path: str | None = None):
        self.base_params = base_params
        self.snapshot_path = snapshot_path
        self._master = threading.Lock()
        self._locks: dict[str, threading.Lock] = {}
        self._states: dict[str, PhysicsState] = {}
        if snapshot_path and os.path.exists(snapshot_path):
            self._replay(snapshot_path)

    def _replay(self, path: str):
        replayed = 0
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    entry = json.loads(line)
                    sid = entry["session"]
                    event = ActionEvent.from_dict(entry["action"])
                    state = self._states.get(sid)
                    if state is None:
                        state = new_session(sid, self.base_params)
                    self._states[sid] = apply_action(state, event)
                    replayed += 1
                except (ValueError, KeyError, DomainError) as exc:
                    log.warning("snapshot line skipped: %s", exc)
        log.info("replayed %d actions from %s", replayed, path)

    def lock_for(self, session_id: str) -> threading.Lock:
        with self._master:
            lock = self._locks.get(session_id)
            if lock is None:
                lock = self._locks[session_id] = threading.Lock()
            return lock

    def get_or_create(self, session_id: str) -> PhysicsState:
        state = self._states.get(session_id)
        if state is None:
            state = new_session(session_id, self.base_params)
            self._states[session_id] = state
        return state

    def commit(self, session_id: str, state: PhysicsState, event: ActionEvent):
        self._states[session_id] = state
        if self.snapshot_path:
            try:
                with open(self.snapshot_path, "a", encoding="utf-8") as fh:
                    fh.write(canonical_json({"action": event.to_dict(), "session": session_id}) + "\n")
            except OSError as exc:
                log.warning("snapshot append failed: %s", exc)

    def count(self) -> int:
        return len(self._states)


def error_response(status: int, code: str, message: str, details: dict | None = None) -> JSONResponse:
    return JSONResponse(
        status_code=status, content={"code": code, "message": message, "details": details or {}}
    )


def parse_bool(raw: str | None, default: bool = False) -> bool:
    if raw is None:
        return default
    return raw.lower() in _TRUE_WORDS


def parse_params(query, defaults: GenerationParams) -> GenerationParams:
    kwargs = {
        "world_seed": defaults.world_seed,
        "density": defaults.density,
        "galaxy_count": defaults.galaxy_count,
        "systems_per_galaxy": defaults.systems_per_galaxy,
    }
    raw = query.get("world_seed")
    if raw is not None:
        try:
            kwargs["world_seed"] = int(raw)
        except ValueError:
            raise ParamError("IllegalWorldSeed", f"world_seed is not an integer: {raw!r}") from None
    raw = query.get("density")
    if raw is not None:
        try:
            kwargs["density"] = float(raw)
        except ValueError:
            raise ParamError("IllegalDensity", f"density is not a number: {raw!r}") from None
    for name, code in (("galaxy_count", "IllegalGalaxyCount"), ("systems_per_galaxy", "IllegalSystemsPerGalaxy")):
        raw = query.get(name)
        if raw is not None:
            try:
                kwargs[name] = int(raw)
            except ValueError:
                raise ParamError(code, f"{name} is not an integer: {raw!r}") from None
    return GenerationParams(**kwargs)


def _sse(event: str, data: dict) -> str:
    return f"event: {event}\ndata: {json.dumps(data)}\n\n"


def _pieces(text: str, width: int = 48):
    for start in range(0, len(text), width):
        yield text[start : start + width]


def brief_url(node_id: str, params: GenerationParams, plugin: str | None = None) -> str:
    query = dict(params.to_dict())
    if plugin:
        query["plugin"] = plugin
    return f"/api/node/{node_id}/brief?" + urlencode(query)


def create_app(config: ServiceConfig | None = None, registry: PluginRegistry | None = None) -> FastAPI:
    config = config or ServiceConfig()
    registry = registry or default_registry()

    api_key = config.provider_key
    if api_key is None and config.key_env:
        api_key = os.environ.get(config.key_env, "")
    provider = None
    if config.provider_endpoint:
        provider = ProviderConfig(
            endpoint_url=config.provider_endpoint,
            api_key=api_key or "",
            timeout_ms=config.timeout_ms,
            max_retries=config.max_retries,
            sampling_seed_supported=config.sampling_seed_supported,
        )
    engine = ImaginationEngine(
        registry,
        FileCache(config.cache_dir),
        provider,
        in_flight_limit=config.in_flight_limit,
        force_fresh=config.force_fresh,
    )
    sessions = SessionStore(config.params, config.snapshot_path)

    app = FastAPI(title="galaxyatlas", version=__version__, docs_url=None, redoc_url=None, openapi_url=None)
    app.state.config = config
    app.state.engine = engine
    app.state.sessions = sessions
    app.state.registry = registry
    app.state.started = time.monotonic()

    @app.exception_handler(RequestValidationError)
    async def _on_bad_request(request: Request, exc: RequestValidationError):
        return error_response(422, "InvalidAction", "malformed request body", {})

    @app.get("/api/universe")
    def get_universe(request: Request):
        try:
            params = parse_params(request.query_params, config.params)
        except ParamError as exc:
            return error_response(400, exc.code, exc.message)
        layout = cached_universe(params)
        etag = f'"{layout.etag()}"'
        sent = request.headers.get("if-none-match")
        if sent and etag in sent:
            return Response(status_code=304, headers={"ETag": etag})
        return Response(
            content=layout.to_bytes(),
            media_type="application/json",
            headers={"ETag": etag, "Cache-Control": "public, max-age=60"},
        )

    @app.get("/api/node/{node_id}")
    def get_node(node_id: str, request: Request):
        try:
            params = parse_params(request.query_params, config.params)
        except ParamError as exc:
            return error_response(400, exc.code, exc.message)
        index = node_index(params)
        record = index.get(node_id)
        if record is None:
            return error_response(404, "UnknownNode", f"no node {node_id} in this universe", {"node_id": node_id})
        lanes = adjacency_map(params).get(node_id, {})
        adjacent = [
            {"node_id": nid, "cost": cost, "display_name": index[nid].display_name}
            for nid, cost in sorted(lanes.items())
        ]
        return JSONResponse({"node": record.to_dict(), "adjacent": adjacent, "params": params.to_dict()})

    @app.get("/api/node/{node_id}/brief")
    def get_brief(node_id: str, request: Request):
        query = request.query_params
        try:
            params = parse_params(query, config.params)
        except ParamError as exc:
            return error_response(400, exc.code, exc.message)
        record = node_index(params).get(node_id)
        if record is None:
            return error_response(404, "UnknownNode", f"no node {node_id} in this universe", {"node_id": node_id})
        plugin_name = query.get("plugin") or "mission-brief"
        fidelity = query.get("fidelity") or config.default_fidelity
        if fidelity not in FIDELITY_LEVELS:
            return error_response(400, "IllegalFidelity", f"fidelity must be one of {FIDELITY_LEVELS}")
        force = parse_bool(query.get("force_fresh")) if "force_fresh" in query else None
        try:
            registry.get(plugin_name)
        except UnknownPlugin:
            return error_response(404, "UnknownPlugin", f"no plugin named {plugin_name!r}", {"plugin": plugin_name})

        if not parse_bool(query.get("stream")):
            result = engine.synthesize(plugin_name, record, None, requested_tier=fidelity, force_fresh=force)
            body = {
                "node_id": node_id,
                "plugin": plugin_name,
                "tier_used": result.tier_used,
                "retries": result.retries,
                "document": result.document.to_wire(),
            }
            return JSONResponse(body, headers={"X-Tier-Used": result.tier_used})

        def event_stream():
            yield _sse("status", {"state": "syncing", "node_id": node_id, "plugin": plugin_name})
            result = engine.synthesize(plugin_name, record, None, requested_tier=fidelity, force_fresh=force)
            doc = result.document
            chunked = False
            for field_name, value in doc.values.items():
                if isinstance(value, str) and len(value) >= 60:
                    for piece in _pieces(value):
                        yield _sse("chunk", {"field": field_name, "delta": piece})
                    chunked = True
            if not chunked:
                texts = [(n, v) for n, v in doc.values.items() if isinstance(v, str)]
                if texts:
                    longest, value = max(texts, key=lambda item: len(item[1]))
                    for piece in _pieces(value):
                        yield _sse("chunk", {"field": longest, "delta": piece})
            yield _sse(
                "done",
                {"tier_used": result.tier_used, "retries": result.retries, "document": doc.to_wire()},
            )

        return StreamingResponse(
            event_stream(),
            media_type="text/event-stream",
            headers={"Cache-Control": "no-store", "X-Accel-Buffering": "no"},
        )

    @app.post("/api/voyager/{session_id}/action")
    def post_action(session_id: str, payload: dict = Body(default=None)):
        if payload is None:
            return error_response(422, "InvalidAction", "missing JSON body")
        try:
            event = ActionEvent.from_dict(payload)
        except InvalidAction as exc:
            return error_response(422, exc.code, exc.message, exc.details)
        lock = sessions.lock_for(session_id)
        if not lock.acquire(blocking=False):
            return error_response(
                409, "SessionBusy", "another action for this session is in flight", {"session_id": session_id}
            )
        try:
            state = sessions.get_or_create(session_id)
            try:
                new_state = apply_action(state, event)
            except DomainError as exc:
                return error_response(422, exc.code, exc.message, exc.details)
            sessions.commit(session_id, new_state, event)
            body = {
                "session_id": session_id,
                "tick": new_state.tick,
                "voyager": new_state.voyager.to_dict(),
                "params": new_state.params.to_dict(),
                "action": event.to_dict(),
            }
            if event.kind == "scan":
                target = event.target or new_state.voyager.location
                body["brief_ref"] = {"node_id": target, "url": brief_url(target, new_state.params)}
            return JSONResponse(body)
        finally:
            lock.release()

    @app.get("/api/plugins")
    def get_plugins():
        return JSONResponse(
            {"plugins": [{"name": spec.name, "schema": spec.schema.to_dict()} for spec in registry.specs()]}
        )

    @app.get("/api/meta")
    def get_meta():
        return JSONResponse(
            {
                "uptime_seconds": round(time.monotonic() - app.state.started, 3),
                "provider_configured": engine.provider_configured,
                "cache_entries": engine.cache.count(),
                "tiers": engine.counters(),
                "sessions": sessions.count(),
                "version": __version__,
            }
        )

    return app
