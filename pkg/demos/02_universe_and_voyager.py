"""Generate a universe, then fly a voyager through it under the physics rules.

All legality lives in code: lanes, fuel, node existence. The transition
function is pure, so every attempt either returns a new state or raises
and leaves the old state untouched.
"""

from galaxyatlas import (
    ActionEvent,
    DomainError,
    GenerationParams,
    adjacency_map,
    apply_action,
    cached_universe,
    new_session,
    node_index,
    spawn_node_id,
)

params = GenerationParams(world_seed=42, galaxy_count=2, systems_per_galaxy=6)
layout = cached_universe(params)

nodes = node_index(params)
print(f"universe {params.world_seed}: {len(layout.galaxies)} galaxies, {len(nodes)} nodes")
for galaxy in layout.galaxies:
    count = sum(len(system.nodes) for system in galaxy.systems)
    print(f"  {galaxy.label}: {len(galaxy.systems)} systems, {count} nodes")

# spawn and look around
state = new_session("demo", params)
adj = adjacency_map(params)
here = state.voyager.location
print(f"\nspawn at {nodes[here].display_name} with fuel {state.voyager.fuel}")
for neighbor, cost in sorted(adj[here].items(), key=lambda item: item[1]):
    print(f"  lane to {nodes[neighbor].display_name}: cost {cost}")

# take the cheapest lane a few times
for _ in range(3):
    here = state.voyager.location
    target, cost = min(adj[here].items(), key=lambda item: (item[1], item[0]))
    state = apply_action(state, ActionEvent("travel", target=target))
    print(f"jumped to {nodes[target].display_name}, fuel now {state.voyager.fuel}")

# illegal moves raise typed errors and change nothing
before = state.to_bytes()
far = next(n for n in nodes if n not in adj[state.voyager.location] and n != state.voyager.location)
for action in (
    ActionEvent("travel", target=far),
    ActionEvent("travel", target="no-such-node"),
    ActionEvent("set_density", value=99.0),
):
    try:
        apply_action(state, action)
    except DomainError as exc:
        print(f"rejected {action.kind}: {exc.code} ({exc.message})")
print("state unchanged after rejections:", state.to_bytes() == before)

# reseed advances the world seed; the voyager respawns in the new universe
state = apply_action(state, ActionEvent("reseed"))
print(f"\nafter reseed: world {state.params.world_seed}, "
      f"at {node_index(state.params)[state.voyager.location].display_name}, "
      f"fuel kept at {state.voyager.fuel}")
