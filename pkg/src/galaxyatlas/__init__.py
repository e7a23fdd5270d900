"""Deterministic galaxy atlas with a schema-gated generative flavour layer.

Hard state (coordinates, lanes, fuel) is pure code and regenerates
bit-for-bit from seeds. Soft content (briefs, logs) comes from pluggable
generators whose output must pass schema validation before it is shown,
and degrades to deterministic templates when no provider is available.
"""

from .hashing import GOLDEN_GAMMA, MASK64, hash_coordinate, mix64, unit_float
from .naming import name_from_seed
from .schema import (
    DuplicateSchema,
    FieldSpec,
    GeneratedDocument,
    MalformedSchema,
    SchemaDef,
    SchemaRegistry,
    UnknownSchema,
    ValidationIssue,
    validate_document,
)
from .serialize import canonical_bytes, canonical_json, content_digest
from .universe import (
    GenerationParams,
    NodeRecord,
    ParamError,
    UniverseLayout,
    adjacency_map,
    cached_universe,
    generate_universe,
    lane_cost,
    node_index,
    record_from_seed,
    spawn_node_id,
)
from .world import (
    ActionEvent,
    DomainError,
    IllegalDensity,
    ImaginationState,
    InsufficientFuel,
    InvalidAction,
    NoLane,
    OrphanDocument,
    PhysicsState,
    UnknownNode,
    VoyagerSession,
    WorldState,
    apply_action,
    compose_state,
    new_session,
)

__version__ = "0.1.0"

__all__ = [
    "GOLDEN_GAMMA",
    "MASK64",
    "hash_coordinate",
    "mix64",
    "unit_float",
    "name_from_seed",
    "DuplicateSchema",
    "FieldSpec",
    "GeneratedDocument",
    "MalformedSchema",
    "SchemaDef",
    "SchemaRegistry",
    "UnknownSchema",
    "ValidationIssue",
    "validate_document",
    "canonical_bytes",
    "canonical_json",
    "content_digest",
    "GenerationParams",
    "NodeRecord",
    "ParamError",
    "UniverseLayout",
    "adjacency_map",
    "cached_universe",
    "generate_universe",
    "lane_cost",
    "node_index",
    "record_from_seed",
    "spawn_node_id",
    "ActionEvent",
    "DomainError",
    "IllegalDensity",
    "ImaginationState",
    "InsufficientFuel",
    "InvalidAction",
    "NoLane",
    "OrphanDocument",
    "PhysicsState",
    "UnknownNode",
    "VoyagerSession",
    "WorldState",
    "apply_action",
    "compose_state",
    "new_session",
    "__version__",
]
