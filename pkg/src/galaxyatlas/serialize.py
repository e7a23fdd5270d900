"""Canonical JSON serialization used everywhere byte-stability matters."""

from __future__ import annotations

import hashlib
import json
from typing import Any


def canonical_json(obj: Any) -> str:
    """Stable, compact JSON text: sorted keys, no whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def canonical_bytes(obj: Any) -> bytes:
    return canonical_json(obj).encode("utf-8")


def content_digest(obj: Any) -> str:
    """Hex sha256 of the canonical serialization."""
    return hashlib.sha256(canonical_bytes(obj)).hexdigest()
