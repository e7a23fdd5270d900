"""Generative layer: provider calls, schema-gated retries, cache, templates.

``ImaginationEngine.synthesize`` always returns a schema-valid document.
The cost-ordered path is cache, then live provider, then the pre-authored
template; which path produced the result is reported as the tier
(``medium``, ``high``, ``base``). Live output enters the world only after
closed-world validation, with rejected replies retried a bounded number
of times carrying the accumulated violation list.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from dataclasses import dataclass, field

import httpx

from .hashing import unit_float
from .schema import (
    WRONG_KIND,
    GeneratedDocument,
    SchemaDef,
    ValidationIssue,
    schema_to_prompt_fragment,
    validate_document,
)
from .serialize import canonical_json

log = logging.getLogger("galaxyatlas.imagination")

TIERS = ("high", "medium", "base")

PROVIDER_TIMEOUT = "Timeout"
PROVIDER_TRANSPORT = "TransportError"
PROVIDER_STATUS = "NonSuccessStatus"
PROVIDER_EMPTY = "EmptyBody"


class ProviderError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind
        self.message = message


class RejectAfterRetries(Exception):
    def __init__(self, issues: list[ValidationIssue], attempts: int):
        super().__init__(f"document rejected after {attempts} attempts")
        self.issues = issues
        self.attempts = attempts


@dataclass(frozen=True)
class ProviderConfig:
    endpoint_url: str
    api_key: str = field(repr=False, default="")
    timeout_ms: int = 10000
    max_retries: int = 2
    sampling_seed_supported: bool = True

    def __post_init__(self):
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be non-negative")


def call_provider(config: ProviderConfig, prompt: str, schema_fragment: str, seed: int | None) -> str:
    """One POST to the provider; returns response text or raises ProviderError."""
    body: dict = {"prompt": prompt, "schema": schema_fragment}
    if config.sampling_seed_supported and seed is not None:
        body["seed"] = seed
    headers = {}
    if config.api_key:
        headers["Authorization"] = f"Bearer {config.api_key}"
    try:
        resp = httpx.post(
            config.endpoint_url,
            json=body,
            headers=headers,
            timeout=config.timeout_ms / 1000.0,
        )
    except httpx.TimeoutException as exc:
        raise ProviderError(PROVIDER_TIMEOUT, f"provider timed out: {exc}") from exc
    except httpx.TransportError as exc:
        raise ProviderError(PROVIDER_TRANSPORT, f"provider unreachable: {exc}") from exc
    if not 200 <= resp.status_code < 300:
        raise ProviderError(PROVIDER_STATUS, f"provider returned status {resp.status_code}")
    try:
        payload = resp.json()
    except ValueError as exc:
        raise ProviderError(PROVIDER_EMPTY, "provider body is not JSON") from exc
    text = payload.get("text") if isinstance(payload, dict) else None
    if not isinstance(text, str) or not text.strip():
        raise ProviderError(PROVIDER_EMPTY, "provider body carries no text")
    return text


def _strip_fences(raw: str) -> str:
    text = raw.strip()
    if text.startswith("```"):
        first_break = text.find("\n")
        if first_break != -1:
            text = text[first_break + 1 :]
        if text.endswith("```"):
            text = text[: -3]
    return text.strip()


def parse_document(raw: str, schema: SchemaDef) -> tuple[GeneratedDocument | None, list[ValidationIssue]]:
    """Parse provider text into a document and validate it; issues explain any reject."""
    try:
        payload = json.loads(_strip_fences(raw))
    except ValueError:
        return None, [ValidationIssue(WRONG_KIND, "$document", "reply is not valid JSON")]
    if not isinstance(payload, dict):
        return None, [ValidationIssue(WRONG_KIND, "$document", "reply must be a JSON object")]
    if "$schema" in payload or "$v" in payload:
        if payload.get("$schema") != schema.name or payload.get("$v") != schema.version:
            return None, [
                ValidationIssue(
                    WRONG_KIND, "$document", f"reply claims a schema other than {schema.name} v{schema.version}"
                )
            ]
        payload = {k: v for k, v in payload.items() if k not in ("$schema", "$v")}
    doc = GeneratedDocument(schema.name, schema.version, payload)
    issues = validate_document(doc, schema)
    if issues:
        return None, issues
    return doc, []


def feedback_prompt(base_prompt: str, issues: list[ValidationIssue]) -> str:
    lines = [base_prompt, "", "Your previous reply was rejected for these violations:"]
    lines.extend(f"- {i.field}: {i.kind}: {i.message}" for i in issues)
    lines.append("Return a corrected JSON object that fixes every violation.")
    return "\n".join(lines)


def validate_and_retry(raw: str, schema: SchemaDef, config: ProviderConfig, reissue) -> tuple[GeneratedDocument, int]:
    """Gate ``raw`` through the schema, reissuing via ``reissue(issues)`` on failure.

    Returns (document, retries_used). Total attempts are bounded by
    1 + config.max_retries; exhaustion raises RejectAfterRetries.
    """
    accumulated: list[ValidationIssue] = []
    text = raw
    for attempt in range(1 + config.max_retries):
        doc, issues = parse_document(text, schema)
        if doc is not None:
            return doc, attempt
        accumulated.extend(issues)
        if attempt == config.max_retries:
            break
        text = reissue(accumulated)
    raise RejectAfterRetries(accumulated, 1 + config.max_retries)


# --- template machinery -------------------------------------------------
#
# Template streams start at 64 so they never reuse the (seed, index) pairs
# the universe generator and namer draw from for the same node seed.

@dataclass(frozen=True)
class TextSlot:
    stream: int
    skeletons: tuple[str, ...]
    slots: tuple[tuple[str, tuple[str, ...]], ...] = ()


@dataclass(frozen=True)
class ContextEnum:
    key: str


@dataclass(frozen=True)
class SeededInt:
    stream: int
    minimum: int
    maximum: int


@dataclass(frozen=True)
class SeededList:
    stream: int
    pool: tuple[str, ...]
    min_items: int
    max_items: int


@dataclass(frozen=True)
class TemplateSpec:
    fields: tuple[tuple[str, TextSlot | ContextEnum | SeededInt | SeededList], ...]


def _pick(options: tuple[str, ...] | tuple, seed: int, stream: int):
    return options[int(unit_float(seed, stream) * len(options))]


def _render_field(part, seed: int, context: dict):
    if isinstance(part, TextSlot):
        skeleton = _pick(part.skeletons, seed, part.stream)
        fills = dict(context)
        for i, (slot_name, options) in enumerate(part.slots):
            fills[slot_name] = _pick(options, seed, part.stream + 1 + i)
        return skeleton.format_map(fills)
    if isinstance(part, ContextEnum):
        return context[part.key]
    if isinstance(part, SeededInt):
        span = part.maximum - part.minimum + 1
        return part.minimum + int(unit_float(seed, part.stream) * span)
    if isinstance(part, SeededList):
        span = part.max_items - part.min_items + 1
        count = part.min_items + int(unit_float(seed, part.stream) * span)
        items: list[str] = []
        for i in range(count):
            idx = int(unit_float(seed, part.stream + 1 + i) * len(part.pool))
            while part.pool[idx] in items:
                idx = (idx + 1) % len(part.pool)
            items.append(part.pool[idx])
        return items
    raise TypeError(f"unknown template part: {part!r}")


def render_template(spec: TemplateSpec, schema: SchemaDef, seed: int, context: dict) -> GeneratedDocument:
    """Deterministic document from pre-authored skeletons; always schema-valid."""
    values = {name: _render_field(part, seed, context) for name, part in spec.fields}
    doc = GeneratedDocument(schema.name, schema.version, values)
    issues = validate_document(doc, schema)
    if issues:
        raise RuntimeError(f"template produced an invalid document: {issues[0].message}")
    return doc


# --- file cache ---------------------------------------------------------

class StorageError(OSError):
    pass


@dataclass(frozen=True)
class CacheKey:
    seed_hex: str
    plugin: str
    schema_name: str
    schema_version: int


@dataclass(frozen=True)
class CacheEntry:
    key: CacheKey
    document: GeneratedDocument
    created_at: float
    tier: str = "high"
    seeded_sampling: bool = True


class FileCache:
    """One JSON file per entry under <root>/<schema_name>/<version>/<seed>-<plugin>.json."""

    def __init__(self, root: str):
        self.root = root

    def _path(self, key: CacheKey) -> str:
        return os.path.join(
            self.root, key.schema_name, str(key.schema_version), f"{key.seed_hex}-{key.plugin}.json"
        )

    def get(self, key: CacheKey) -> CacheEntry | None:
        path = self._path(key)
        try:
            with open(path, "r", encoding="utf-8") as fh:
                payload = json.load(fh)
            return CacheEntry(
                key=key,
                document=GeneratedDocument.from_wire(payload["document"]),
                created_at=float(payload["created_at"]),
                tier=payload.get("tier", "high"),
                seeded_sampling=bool(payload.get("seeded_sampling", True)),
            )
        except FileNotFoundError:
            return None
        except (OSError, ValueError, KeyError) as exc:
            log.warning("cache read failed for %s: %s", path, exc)
            return None

    def put(self, entry: CacheEntry) -> bool:
        path = self._path(entry.key)
        payload = {
            "key": {
                "seed": entry.key.seed_hex,
                "plugin": entry.key.plugin,
                "schema": entry.key.schema_name,
                "version": entry.key.schema_version,
            },
            "created_at": entry.created_at,
            "tier": entry.tier,
            "seeded_sampling": entry.seeded_sampling,
            "document": entry.document.to_wire(),
        }
        try:
            os.makedirs(os.path.dirname(path), exist_ok=True)
            tmp = path + ".tmp"
            with open(tmp, "w", encoding="utf-8") as fh:
                fh.write(canonical_json(payload))
            os.replace(tmp, path)
            return True
        except OSError as exc:
            log.warning("cache write failed for %s: %s", path, exc)
            return False

    def _walk(self):
        if not os.path.isdir(self.root):
            return
        for schema_name in sorted(os.listdir(self.root)):
            schema_dir = os.path.join(self.root, schema_name)
            if not os.path.isdir(schema_dir):
                continue
            for version in sorted(os.listdir(schema_dir)):
                version_dir = os.path.join(schema_dir, version)
                if not os.path.isdir(version_dir):
                    continue
                for name in sorted(os.listdir(version_dir)):
                    if name.endswith(".json"):
                        yield os.path.join(version_dir, name)

    def count(self) -> int:
        return sum(1 for _ in self._walk())

    def entries(self):
        for path in self._walk():
            try:
                with open(path, "r", encoding="utf-8") as fh:
                    yield json.load(fh)
            except (OSError, ValueError) as exc:
                log.warning("cache read failed for %s: %s", path, exc)

    def clear(self) -> int:
        removed = 0
        for path in list(self._walk()):
            try:
                os.remove(path)
                removed += 1
            except OSError as exc:
                log.warning("cache delete failed for %s: %s", path, exc)
        return removed


# --- synthesis controller -----------------------------------------------

@dataclass(frozen=True)
class SynthesisResult:
    document: GeneratedDocument
    tier_used: str
    retries: int = 0


class ImaginationEngine:
    """Tier controller: resolves each request via cache, provider, or template."""

    def __init__(
        self,
        registry,
        cache: FileCache,
        provider: ProviderConfig | None = None,
        in_flight_limit: int = 4,
        force_fresh: bool = False,
    ):
        self.registry = registry
        self.cache = cache
        self.provider = provider
        self.force_fresh = force_fresh
        self._in_flight = threading.BoundedSemaphore(max(1, in_flight_limit))
        self._master = threading.Lock()
        self._key_locks: dict[CacheKey, threading.Lock] = {}
        self._counter_lock = threading.Lock()
        self.tier_counters = {"high": 0, "medium": 0, "base": 0}

    @property
    def provider_configured(self) -> bool:
        return self.provider is not None and bool(self.provider.api_key)

    def _count(self, tier: str):
        with self._counter_lock:
            self.tier_counters[tier] += 1

    def counters(self) -> dict:
        with self._counter_lock:
            return dict(self.tier_counters)

    def _lock_for(self, key: CacheKey) -> threading.Lock:
        with self._master:
            lock = self._key_locks.get(key)
            if lock is None:
                lock = self._key_locks[key] = threading.Lock()
            return lock

    def _try_cache(self, key: CacheKey, schema: SchemaDef) -> GeneratedDocument | None:
        entry = self.cache.get(key)
        if entry is None:
            return None
        if validate_document(entry.document, schema):
            log.warning("cache entry for %s fails validation; treating as miss", key)
            return None
        return entry.document

    def _try_live(self, key: CacheKey, schema: SchemaDef, prompt: str, seed: int) -> tuple[GeneratedDocument, int] | None:
        if not self.provider_configured:
            return None
        config = self.provider
        fragment = schema_to_prompt_fragment(schema)
        full_prompt = f"{prompt}\n\n{fragment}"
        send_seed = seed if config.sampling_seed_supported else None

        def reissue(issues: list[ValidationIssue]) -> str:
            with self._in_flight:
                return call_provider(config, feedback_prompt(full_prompt, issues), fragment, send_seed)

        try:
            with self._in_flight:
                raw = call_provider(config, full_prompt, fragment, send_seed)
            doc, retries = validate_and_retry(raw, schema, config, reissue)
        except ProviderError as exc:
            log.warning("provider degraded (%s): %s", exc.kind, exc.message)
            return None
        except RejectAfterRetries as exc:
            log.warning("provider output rejected after %d attempts for %s", exc.attempts, key)
            return None
        self.cache.put(
            CacheEntry(
                key=key,
                document=doc,
                created_at=time.time(),
                tier="high",
                seeded_sampling=config.sampling_seed_supported,
            )
        )
        return doc, retries

    def synthesize(
        self,
        plugin_name: str,
        node,
        physics=None,
        requested_tier: str = "high",
        force_fresh: bool | None = None,
    ) -> SynthesisResult:
        if requested_tier not in TIERS:
            raise ValueError(f"unknown fidelity tier: {requested_tier!r}")
        spec = self.registry.get(plugin_name)
        schema = spec.schema
        seed = int(node.node_id, 16)
        key = CacheKey(node.node_id, plugin_name, schema.name, schema.version)
        fresh = self.force_fresh if force_fresh is None else force_fresh

        with self._lock_for(key):
            if requested_tier != "base":
                live_first = fresh and requested_tier == "high"
                if not live_first:
                    cached = self._try_cache(key, schema)
                    if cached is not None:
                        self._count("medium")
                        return SynthesisResult(cached, "medium")
                if requested_tier == "high":
                    prompt = spec.prompt_builder(node, physics)
                    live = self._try_live(key, schema, prompt, seed)
                    if live is not None:
                        self._count("high")
                        return SynthesisResult(live[0], "high", live[1])
                if live_first:
                    cached = self._try_cache(key, schema)
                    if cached is not None:
                        self._count("medium")
                        return SynthesisResult(cached, "medium")
            context = template_context(node)
            doc = render_template(spec.template, schema, seed, context)
            self._count("base")
            return SynthesisResult(doc, "base")


def template_context(node) -> dict:
    return {
        "name": node.display_name,
        "sector": node.sector,
        "node_type": node.node_type,
        "risk": node.risk,
        "resources": node.resources,
    }
