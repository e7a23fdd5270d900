"""Deterministic world state and the transition rules that govern it.

Physics state (location, fuel, credits, route, tick) changes only through
``apply_action``, which either returns a fresh state or raises a
``DomainError`` leaving the input untouched. Generated flavour documents
live in a separate ``ImaginationState`` and can never push values back
into physics.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .schema import GeneratedDocument, SchemaDef, validate_document
from .serialize import canonical_bytes, content_digest
from .universe import (
    DENSITY_RANGE,
    GenerationParams,
    adjacency_map,
    node_index,
    spawn_node_id,
)

ACTION_KINDS = ("travel", "scan", "reseed", "set_density")

START_FUEL = 100
START_CREDITS = 50


class DomainError(Exception):
    code = "DomainError"

    def __init__(self, message: str, details: dict | None = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class UnknownNode(DomainError):
    code = "UnknownNode"


class NoLane(DomainError):
    code = "NoLane"


class InsufficientFuel(DomainError):
    code = "InsufficientFuel"


class IllegalDensity(DomainError):
    code = "IllegalDensity"


class InvalidAction(DomainError):
    code = "InvalidAction"


class OrphanDocument(DomainError):
    code = "OrphanDocument"


@dataclass(frozen=True)
class ActionEvent:
    kind: str
    target: str | None = None
    value: float | None = None

    @classmethod
    def from_dict(cls, payload: dict) -> "ActionEvent":
        if not isinstance(payload, dict):
            raise InvalidAction("action must be an object")
        kind = payload.get("kind")
        if kind not in ACTION_KINDS:
            raise InvalidAction(f"unknown action kind: {kind!r}")
        target = payload.get("target")
        if target is not None and not isinstance(target, str):
            raise InvalidAction("action target must be a string node id")
        value = payload.get("value")
        if value is not None and not isinstance(value, (int, float)):
            raise InvalidAction("action value must be a number")
        return cls(kind=kind, target=target, value=value)

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.target is not None:
            out["target"] = self.target
        if self.value is not None:
            out["value"] = self.value
        return out


@dataclass(frozen=True)
class VoyagerSession:
    session_id: str
    location: str
    fuel: int
    credits: int
    route: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "location": self.location,
            "fuel": self.fuel,
            "credits": self.credits,
            "route": list(self.route),
        }


@dataclass(frozen=True)
class PhysicsState:
    params: GenerationParams
    voyager: VoyagerSession
    tick: int = 0

    def to_dict(self) -> dict:
        return {
            "universe_params": self.params.to_dict(),
            "voyager": self.voyager.to_dict(),
            "tick": self.tick,
        }

    def to_bytes(self) -> bytes:
        return canonical_bytes(self.to_dict())

    def digest(self) -> str:
        return content_digest(self.to_dict())


@dataclass
class ImaginationState:
    """Validated decorative documents, keyed by (node_id, plugin name)."""

    documents: dict[tuple[str, str], GeneratedDocument] = field(default_factory=dict)
    tiers: dict[tuple[str, str], str] = field(default_factory=dict)

    def record(
        self,
        node_id: str,
        plugin_name: str,
        document: GeneratedDocument,
        tier: str,
        schema: SchemaDef | None = None,
    ):
        if schema is not None:
            issues = validate_document(document, schema)
            if issues:
                raise ValueError(f"rejecting invalid document for {node_id}: {issues[0].message}")
        key = (node_id, plugin_name)
        self.documents[key] = document
        self.tiers[key] = tier


@dataclass(frozen=True)
class WorldState:
    physics: PhysicsState
    imagination: ImaginationState


def new_session(session_id: str, params: GenerationParams) -> PhysicsState:
    spawn = spawn_node_id(params)
    voyager = VoyagerSession(
        session_id=session_id,
        location=spawn,
        fuel=START_FUEL,
        credits=START_CREDITS,
        route=(spawn,),
    )
    return PhysicsState(params=params, voyager=voyager, tick=0)


def _relocate(state: PhysicsState, params: GenerationParams) -> PhysicsState:
    """Re-anchor the voyager after the universe itself changed shape."""
    index = node_index(params)
    voyager = state.voyager
    if voyager.location in index:
        voyager = replace(voyager, route=(voyager.location,))
    else:
        spawn = spawn_node_id(params)
        voyager = replace(voyager, location=spawn, route=(spawn,))
    return PhysicsState(params=params, voyager=voyager, tick=state.tick + 1)


def apply_action(state: PhysicsState, action: ActionEvent) -> PhysicsState:
    if action.kind not in ACTION_KINDS:
        raise InvalidAction(f"unknown action kind: {action.kind!r}")

    if action.kind == "travel":
        if action.target is None:
            raise InvalidAction("travel needs a target node id")
        index = node_index(state.params)
        if action.target not in index:
            raise UnknownNode(f"no node {action.target} in this universe", {"target": action.target})
        lanes = adjacency_map(state.params).get(state.voyager.location, {})
        if action.target not in lanes:
            raise NoLane(
                f"no lane from {state.voyager.location} to {action.target}",
                {"from": state.voyager.location, "to": action.target},
            )
        cost = lanes[action.target]
        if cost > state.voyager.fuel:
            raise InsufficientFuel(
                f"lane costs {cost} fuel, only {state.voyager.fuel} left",
                {"cost": cost, "fuel": state.voyager.fuel},
            )
        voyager = replace(
            state.voyager,
            location=action.target,
            fuel=state.voyager.fuel - cost,
            route=state.voyager.route + (action.target,),
        )
        return PhysicsState(params=state.params, voyager=voyager, tick=state.tick + 1)

    if action.kind == "scan":
        target = action.target if action.target is not None else state.voyager.location
        if target not in node_index(state.params):
            raise UnknownNode(f"no node {target} in this universe", {"target": target})
        return replace(state, tick=state.tick + 1)

    if action.kind == "reseed":
        params = state.params.with_world_seed(state.params.world_seed + 1)
        return _relocate(state, params)

    # set_density
    if action.value is None:
        raise InvalidAction("set_density needs a value")
    value = float(action.value)
    lo, hi = DENSITY_RANGE
    if not lo <= value <= hi:
        raise IllegalDensity(f"density {value} outside [{lo}, {hi}]", {"value": value})
    if value == state.params.density:
        return replace(state, tick=state.tick + 1)
    return _relocate(state, state.params.with_density(value))


def check_invariants(state: PhysicsState):
    """Raise if the state violates a structural rule; used by fuzzing and audits."""
    index = node_index(state.params)
    voyager = state.voyager
    if voyager.location not in index:
        raise AssertionError(f"voyager at unknown node {voyager.location}")
    if voyager.fuel < 0:
        raise AssertionError(f"negative fuel {voyager.fuel}")
    if voyager.credits < 0:
        raise AssertionError(f"negative credits {voyager.credits}")
    if not voyager.route or voyager.route[-1] != voyager.location:
        raise AssertionError("route must end at the current location")
    lanes = adjacency_map(state.params)
    for a, b in zip(voyager.route, voyager.route[1:]):
        if b not in lanes.get(a, {}):
            raise AssertionError(f"route hop {a} -> {b} has no lane")


def compose_state(physics: PhysicsState, imagination: ImaginationState) -> WorldState:
    index = node_index(physics.params)
    for node_id, plugin_name in imagination.documents:
        if node_id not in index:
            raise OrphanDocument(
                f"document for {plugin_name} refers to missing node {node_id}",
                {"node_id": node_id, "plugin": plugin_name},
            )
    return WorldState(physics=physics, imagination=imagination)
