"""Database-free procedural universe construction.

Every galaxy, system and node is a pure function of the generation
parameters. Regeneration *is* the storage strategy: revisiting a coordinate
rebuilds the identical record, so nothing here persists anything.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

from .hashing import MASK64, hash_coordinate, unit_float
from .naming import name_from_seed
from .serialize import canonical_bytes, content_digest

DENSITY_RANGE = (0.2, 3.0)
GALAXY_COUNT_RANGE = (1, 8)
SYSTEMS_PER_GALAXY_RANGE = (4, 32)

# Side length of the square plane each galaxy's nodes are scattered on.
# Lane costs are ceil(distance / 10), so the scale directly prices travel.
GALAXY_EXTENT = 360.0
DISTANCE_PER_FUEL = 10.0

NODE_TYPES = ("rocky", "oceanic", "gas-giant", "metropolis", "outpost", "anchor")
RISK_LEVELS = ("low", "medium", "high")

# Cumulative thresholds for the node type draw.
_TYPE_THRESHOLDS = (
    (0.28, "rocky"),
    (0.50, "oceanic"),
    (0.66, "gas-giant"),
    (0.80, "metropolis"),
    (0.92, "outpost"),
    (1.01, "anchor"),
)
_RISK_THRESHOLDS = ((0.50, "low"), (0.83, "medium"), (1.01, "high"))

_TYPE_WORD = {
    "rocky": "Node",
    "oceanic": "Node",
    "gas-giant": "Spire",
    "metropolis": "Reach",
    "outpost": "Outpost",
    "anchor": "Anchor",
}

# unit_float stream indices for system-level draws (seeded by the system
# meta seed, coordinate (system_index, -1)).
_SYS_BASE_NODES = 0
_SYS_POS_X = 1
_SYS_POS_Y = 2


class ParamError(ValueError):
    """A generation parameter outside its legal range."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


@dataclass(frozen=True)
class GenerationParams:
    world_seed: int = 42
    density: float = 1.0
    galaxy_count: int = 3
    systems_per_galaxy: int = 8

    def __post_init__(self):
        if not isinstance(self.world_seed, int) or not 0 <= self.world_seed <= MASK64:
            raise ParamError("IllegalWorldSeed", "world_seed must be an unsigned 64-bit integer")
        lo, hi = DENSITY_RANGE
        if not isinstance(self.density, (int, float)) or not lo <= self.density <= hi:
            raise ParamError("IllegalDensity", f"density must be within [{lo}, {hi}]")
        lo, hi = GALAXY_COUNT_RANGE
        if not isinstance(self.galaxy_count, int) or not lo <= self.galaxy_count <= hi:
            raise ParamError("IllegalGalaxyCount", f"galaxy_count must be within [{lo}, {hi}]")
        lo, hi = SYSTEMS_PER_GALAXY_RANGE
        if not isinstance(self.systems_per_galaxy, int) or not lo <= self.systems_per_galaxy <= hi:
            raise ParamError(
                "IllegalSystemsPerGalaxy", f"systems_per_galaxy must be within [{lo}, {hi}]"
            )

    def with_world_seed(self, seed: int) -> "GenerationParams":
        return replace(self, world_seed=seed & MASK64)

    def with_density(self, density: float) -> "GenerationParams":
        return replace(self, density=float(density))

    def to_dict(self) -> dict:
        # world_seed travels as a decimal string: values above 2**53 would
        # lose precision in JavaScript JSON parsers.
        return {
            "world_seed": str(self.world_seed),
            "density": self.density,
            "galaxy_count": self.galaxy_count,
            "systems_per_galaxy": self.systems_per_galaxy,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "GenerationParams":
        return cls(
            world_seed=int(payload["world_seed"]),
            density=float(payload["density"]),
            galaxy_count=int(payload["galaxy_count"]),
            systems_per_galaxy=int(payload["systems_per_galaxy"]),
        )


@dataclass(frozen=True)
class NodeRecord:
    node_id: str
    display_name: str
    sector: str
    node_type: str
    risk: str
    position: tuple[float, float]
    resources: int

    def to_dict(self) -> dict:
        return {
            "node_id": self.node_id,
            "display_name": self.display_name,
            "sector": self.sector,
            "node_type": self.node_type,
            "risk": self.risk,
            "position": [self.position[0], self.position[1]],
            "resources": self.resources,
        }


@dataclass(frozen=True)
class StarSystem:
    index: int
    position: tuple[float, float]
    nodes: tuple[NodeRecord, ...]
    lanes: tuple[tuple[str, str, int], ...]

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "position": [self.position[0], self.position[1]],
            "nodes": [n.to_dict() for n in self.nodes],
            "lanes": [[a, b, c] for a, b, c in self.lanes],
        }


@dataclass(frozen=True)
class GalaxyLayout:
    index: int
    label: str
    position: tuple[float, float]
    systems: tuple[StarSystem, ...]

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "label": self.label,
            "position": [self.position[0], self.position[1]],
            "systems": [s.to_dict() for s in self.systems],
        }


@dataclass(frozen=True)
class UniverseLayout:
    params: GenerationParams
    galaxies: tuple[GalaxyLayout, ...]

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "galaxies": [g.to_dict() for g in self.galaxies],
        }

    def to_bytes(self) -> bytes:
        return canonical_bytes(self.to_dict())

    def etag(self) -> str:
        return content_digest(self.params.to_dict())

    def all_nodes(self):
        for galaxy in self.galaxies:
            for system in galaxy.systems:
                yield from system.nodes


def _pick(thresholds, draw: float) -> str:
    for bound, value in thresholds:
        if draw < bound:
            return value
    return thresholds[-1][1]


def record_from_seed(seed: int) -> NodeRecord:
    """Build the full symbolic record for a node seed.

    Every field comes from the seed's own draw streams, so a record can be
    reproduced from coordinates alone with no surrounding context.
    """
    node_type = _pick(_TYPE_THRESHOLDS, unit_float(seed, 0))
    risk = _pick(_RISK_THRESHOLDS, unit_float(seed, 1))
    resources = int(unit_float(seed, 2) * 101)
    position = (unit_float(seed, 3) * GALAXY_EXTENT, unit_float(seed, 4) * GALAXY_EXTENT)
    name = name_from_seed(seed, "node")
    return NodeRecord(
        node_id=f"{seed:016x}",
        display_name=f"{name} {_TYPE_WORD[node_type]}",
        sector=name_from_seed(seed, "sector"),
        node_type=node_type,
        risk=risk,
        position=position,
        resources=resources,
    )


def lane_cost(a: tuple[float, float], b: tuple[float, float]) -> int:
    """Fuel cost of a lane between two positions; always a positive integer."""
    return max(1, math.ceil(math.dist(a, b) / DISTANCE_PER_FUEL))


def _build_lanes(members: list[tuple[int, NodeRecord]]) -> dict[int, list[tuple[str, str, int]]]:
    """Lane set for one galaxy: spanning tree plus 3 nearest neighbors.

    Returns lanes grouped by the system index of each lane's first endpoint
    (endpoints ordered by node_id). Ties in distance break on node_id so the
    graph is identical on every platform.
    """
    per_system: dict[int, list[tuple[str, str, int]]] = {}
    n = len(members)
    if n < 2:
        return per_system

    system_of = {rec.node_id: sys_idx for sys_idx, rec in members}
    records = [rec for _, rec in members]
    ids = [rec.node_id for rec in records]
    pos = [rec.position for rec in records]

    def dist(i: int, j: int) -> float:
        return math.dist(pos[i], pos[j])

    edges: set[tuple[str, str]] = set()

    def add_edge(i: int, j: int):
        a, b = (ids[i], ids[j]) if ids[i] < ids[j] else (ids[j], ids[i])
        edges.add((a, b))

    # Prim's spanning tree from the lexicographically smallest node id.
    start = min(range(n), key=lambda i: ids[i])
    in_tree = [False] * n
    in_tree[start] = True
    best_dist = [math.inf] * n
    best_from = [start] * n
    for i in range(n):
        if i != start:
            best_dist[i] = dist(start, i)
    for _ in range(n - 1):
        nxt = min(
            (i for i in range(n) if not in_tree[i]),
            key=lambda i: (best_dist[i], ids[i]),
        )
        in_tree[nxt] = True
        add_edge(nxt, best_from[nxt])
        for i in range(n):
            if not in_tree[i]:
                d = dist(nxt, i)
                if d < best_dist[i]:
                    best_dist[i] = d
                    best_from[i] = nxt

    # Each node links to its 3 nearest neighbors.
    for i in range(n):
        neighbors = sorted(
            (j for j in range(n) if j != i),
            key=lambda j: (dist(i, j), ids[j]),
        )
        for j in neighbors[:3]:
            add_edge(i, j)

    by_pos = {rec.node_id: rec.position for rec in records}
    for a, b in sorted(edges):
        cost = lane_cost(by_pos[a], by_pos[b])
        per_system.setdefault(system_of[a], []).append((a, b, cost))
    return per_system


def generate_universe(params: GenerationParams) -> UniverseLayout:
    """Construct the full universe for ``params``; fresh every call."""
    galaxies = []
    seen_ids: set[str] = set()
    for g in range(params.galaxy_count):
        galaxy_seed = hash_coordinate(g, 0, params.world_seed)
        galaxy_pos = (unit_float(galaxy_seed, 0), unit_float(galaxy_seed, 1))
        label = name_from_seed(galaxy_seed, "galaxy")

        members: list[tuple[int, NodeRecord]] = []
        bare_systems = []
        for s in range(params.systems_per_galaxy):
            sys_seed = hash_coordinate(s, -1, galaxy_seed)
            base_nodes = 2 + int(unit_float(sys_seed, _SYS_BASE_NODES) * 5)
            count = max(1, int(base_nodes * params.density + 0.5))
            sys_pos = (
                unit_float(sys_seed, _SYS_POS_X) * GALAXY_EXTENT,
                unit_float(sys_seed, _SYS_POS_Y) * GALAXY_EXTENT,
            )
            nodes = tuple(
                record_from_seed(hash_coordinate(s, n, galaxy_seed)) for n in range(count)
            )
            bare_systems.append((s, sys_pos, nodes))
            members.extend((s, node) for node in nodes)

        lanes_by_system = _build_lanes(members)
        systems = tuple(
            StarSystem(
                index=s,
                position=sys_pos,
                nodes=nodes,
                lanes=tuple(lanes_by_system.get(s, ())),
            )
            for s, sys_pos, nodes in bare_systems
        )
        galaxies.append(
            GalaxyLayout(index=g, label=label, position=galaxy_pos, systems=systems)
        )

        for _, node in members:
            if node.node_id in seen_ids:
                raise RuntimeError(f"node id collision: {node.node_id}")
            seen_ids.add(node.node_id)

    return UniverseLayout(params=params, galaxies=tuple(galaxies))


@lru_cache(maxsize=128)
def cached_universe(params: GenerationParams) -> UniverseLayout:
    """Memoized universe for hot paths; tests of permanence use the raw generator."""
    return generate_universe(params)


@lru_cache(maxsize=128)
def adjacency_map(params: GenerationParams) -> dict[str, dict[str, int]]:
    """node_id -> {neighbor_id: lane cost} over every lane of the universe."""
    adjacency: dict[str, dict[str, int]] = {}
    for galaxy in cached_universe(params).galaxies:
        for system in galaxy.systems:
            for node in system.nodes:
                adjacency.setdefault(node.node_id, {})
            for a, b, cost in system.lanes:
                adjacency.setdefault(a, {})[b] = cost
                adjacency.setdefault(b, {})[a] = cost
    return adjacency


@lru_cache(maxsize=128)
def node_index(params: GenerationParams) -> dict[str, NodeRecord]:
    return {node.node_id: node for node in cached_universe(params).all_nodes()}


def spawn_node_id(params: GenerationParams) -> str:
    universe = cached_universe(params)
    return universe.galaxies[0].systems[0].nodes[0].node_id
