"""Reference content plugins: stateless pipelines from node facts to documents.

Each plugin bundles a schema, a pure prompt builder grounded in the node's
symbolic attributes, and a pre-authored template corpus used at base tier.
Slot fillers and skeletons are embedded so degraded mode needs no files.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .imagination import (
    ContextEnum,
    ImaginationEngine,
    SeededInt,
    SeededList,
    TemplateSpec,
    TextSlot,
)
from .schema import (
    GeneratedDocument,
    SchemaDef,
    SchemaRegistry,
    enum_field,
    integer_field,
    list_field,
    text_field,
)

RISK_ENUM = ("low", "medium", "high")


class UnknownPlugin(KeyError):
    pass


@dataclass(frozen=True)
class PluginSpec:
    name: str
    schema: SchemaDef
    prompt_builder: Callable
    template: TemplateSpec


class PluginRegistry:
    def __init__(self, schemas: SchemaRegistry | None = None):
        self.schemas = schemas if schemas is not None else SchemaRegistry()
        self._plugins: dict[str, PluginSpec] = {}

    def register(self, spec: PluginSpec) -> PluginSpec:
        # schema must already be in the registry; raises UnknownSchema otherwise
        self.schemas.get(spec.schema.name, spec.schema.version)
        if spec.name in self._plugins:
            raise ValueError(f"plugin {spec.name} already registered")
        self._plugins[spec.name] = spec
        return spec

    def get(self, name: str) -> PluginSpec:
        try:
            return self._plugins[name]
        except KeyError:
            raise UnknownPlugin(f"no plugin named {name!r}") from None

    def names(self) -> list[str]:
        return sorted(self._plugins)

    def specs(self) -> list[PluginSpec]:
        return [self._plugins[n] for n in self.names()]


def run_plugin(engine: ImaginationEngine, plugin_name: str, node, physics=None, tier: str = "high") -> GeneratedDocument:
    return engine.synthesize(plugin_name, node, physics, requested_tier=tier).document


def _route_tail(physics) -> str:
    if physics is None or not physics.voyager.route:
        return ""
    recent = ", ".join(physics.voyager.route[-3:])
    return f"\nRecent route: {recent}."


def mission_brief_prompt(node, physics=None) -> str:
    return (
        "You are the mission computer of a survey vessel.\n"
        f"Compose a mission brief for {node.display_name}, a {node.node_type} node "
        f"in the {node.sector} sector.\n"
        f"Risk profile: {node.risk}. Resource index: {node.resources}."
        f"{_route_tail(physics)}\n"
        "Ground every field in those facts; invent color, not contradictions."
    )


def field_log_prompt(node, physics=None) -> str:
    return (
        "You are a freighter crew member writing a personal field log.\n"
        f"The ship is holding at {node.display_name} ({node.node_type}, "
        f"{node.sector} sector, risk {node.risk})."
        f"{_route_tail(physics)}\n"
        "Write in first person, grounded in those facts."
    )


_TERRAIN = TextSlot(
    stream=64,
    skeletons=(
        "Surveys of {name} chart {texture} flats broken by {feature} ridges along the approach corridor.",
        "The {node_type} surface presents {texture} terraces that collapse into {feature} basins without warning.",
        "Ground teams should expect {texture} crust over {feature} vents across the landing zone.",
        "Orbital sweeps show {texture} plains giving way to {feature} canyons near the equator.",
        "{name} is dominated by {texture} shelves, with {feature} outcrops marking the old shorelines.",
        "Expect long marches over {texture} ground; the {feature} fields slow wheeled units to a crawl.",
        "The charts mark {texture} dunes stacked against {feature} walls on the windward side.",
        "Most of the sector-facing hemisphere is {texture} rock seamed with {feature} fractures.",
    ),
    slots=(
        ("texture", (
            "stormglass", "basalt", "ashen", "crystalline", "ferric", "saline",
            "obsidian", "chalk", "cindered", "rimefrost", "ochre", "slagged",
            "vitrified", "mossbound", "pumice", "tidelocked",
        )),
        ("feature", (
            "shear", "geyser", "collapse", "spire", "rift", "terrace",
            "sinkhole", "lava-tube", "scarp", "mesa", "crater", "fumarole",
            "karst", "graben", "moraine", "delta",
        )),
    ),
)

_SKY = TextSlot(
    stream=72,
    skeletons=(
        "The sky holds a {hue} haze that thickens to {weather} bands by local dusk.",
        "Expect {hue} light scattered through {weather} cells for most of the rotation.",
        "A {hue} glow sits on the horizon; {weather} fronts cross the zenith twice daily.",
        "Atmospheric report: {hue} overcast with intermittent {weather} columns near the poles.",
        "Auroral activity paints the upper air {hue} whenever the {weather} systems break.",
        "Flight layers are calm below the {hue} deck and turbulent inside the {weather} belt.",
        "The canopy shifts from {hue} to near-black as {weather} squalls roll off the dust sea.",
        "Visibility varies: {hue} mornings, then {weather} walls that ground all shuttles.",
    ),
    slots=(
        ("hue", (
            "violet", "amber", "jade", "cobalt", "pearl", "rust",
            "sodium-orange", "verdigris", "carmine", "slate", "ultramarine",
            "honeyed", "mercury-bright", "smoke-grey", "iridescent", "bruised-purple",
        )),
        ("weather", (
            "ion-storm", "dust", "hail", "static", "monsoon", "cyclone",
            "ash-fall", "sleet", "microburst", "fog", "thunderhead", "sandveil",
            "drizzle", "whiteout", "squall", "jetstream",
        )),
    ),
)

_SIGNAL = TextSlot(
    stream=80,
    skeletons=(
        "Beacon traffic is {quality}; a {source} carrier repeats on the survey band.",
        "Comms report a {quality} channel with {source} interference every few minutes.",
        "Listening posts log {quality} telemetry laced with {source} echoes.",
        "The relay net is {quality} here, though {source} bursts bleed into the guard band.",
        "Expect {quality} reception; the {source} chatter peaks when the twin moons align.",
        "A {quality} handshake greets arrivals, followed by {source} noise from the old grid.",
        "Navigation pings come back {quality}, with {source} ghosts trailing each return.",
        "Signal discipline required: {quality} uplink windows between {source} washes.",
    ),
    slots=(
        ("quality", (
            "clean", "five-by-five", "degraded", "patchy", "razor-thin", "steady",
            "saturated", "intermittent", "weak", "crisp", "muddy", "strong",
            "marginal", "stable", "choppy", "redundant",
        )),
        ("source", (
            "pulsar", "mining-rig", "derelict", "auroral", "beacon-loop", "jammer",
            "quasar", "automated", "monastic", "smuggler", "lighthouse", "relay",
            "survey-drone", "warning-buoy", "carrier-wave", "distress",
        )),
    ),
)

_MISSION_HOOK = TextSlot(
    stream=96,
    skeletons=(
        "Command wants eyes on a {objective} reported by the last {party} crew to pass through {sector}.",
        "A {party} team left an unanswered request concerning a {objective} somewhere past the landing grid.",
        "Standing orders: document the {objective} before the next {party} convoy arrives.",
        "Rumors of a {objective} have drawn a {party} crew; confirm the find or disperse them.",
        "The charter pays out on proof of the {objective}; a rival {party} outfit is two jumps behind.",
        "Recover what the {party} expedition abandoned near the {objective} and log the site for {sector} control.",
        "Quietly verify whether the {objective} still answers, without alerting the {party} watch.",
        "An old {party} ledger prices the {objective} at a year of fuel; verify before bidding.",
    ),
    slots=(
        ("objective", (
            "signal vault", "seed bank", "orbital wreck", "cinder array",
            "survey cairn", "fuel bloom", "glass orchard", "antenna farm",
            "cargo cache", "stasis pod", "mapping core", "relay spine",
            "ice mine", "drift marker", "census plate", "engine relic",
        )),
        ("party", (
            "survey", "salvage", "pilgrim", "mercenary", "courier", "mining",
            "archivist", "smuggler", "terraforming", "quarantine", "prospecting",
            "diplomatic", "research", "freighter", "customs", "cartographer",
        )),
    ),
)

_HAZARDS = SeededList(
    stream=88,
    pool=(
        "crystalline shards", "ion squalls", "magnetic sink", "rogue drones",
        "unstable crust", "radiation pocket", "glass storms", "vacuum bloom",
        "corrosive mist", "graviton eddy", "seismic swarm", "stray ordnance",
        "flash freeze", "dust charge", "signal mirage", "thermal geyser",
    ),
    min_items=1,
    max_items=4,
)

_LOG_TITLE = TextSlot(
    stream=112,
    skeletons=(
        "{mood} watch above the {node_type} fields",
        "Notes from a {mood} descent into {sector}",
        "{name}: a {mood} ledger",
        "What the {mood} survey found",
        "A {mood} orbit, logged in full",
        "{sector} diary, {mood} shift",
        "Against a {mood} horizon",
        "The {mood} approach to {name}",
    ),
    slots=(
        ("mood", (
            "quiet", "restless", "long", "cold", "static-laced", "slow",
            "cautious", "luminous", "gritty", "sleepless", "hopeful", "uneasy",
            "patient", "glittering", "hushed", "stubborn",
        )),
    ),
)

_LOG_BODY = TextSlot(
    stream=120,
    skeletons=(
        "We held station over {name} while the {event} played out below; {outcome}, and the instruments agreed with the old charts to the digit.",
        "Landing parties crossed the {node_type} flats before the {event} forced a recall; {outcome} by the second hour.",
        "The crew logged a {event} near the beacon line. {outcome}, so we marked the site and moved on.",
        "Half the shift went to chasing a {event} across the scopes; {outcome}, which is more than most stops give us.",
        "{sector} control warned us about the {event}; they were right. {outcome}, and nobody argued for a second pass.",
        "Between resupply and the {event}, little time remained for surveying, yet {outcome} before we broke orbit.",
        "A {event} rolled through while we charted the lanes. {outcome}; the log stands as written.",
        "Routine until the {event} lit the boards. {outcome}, and the route ahead looks honest.",
    ),
    slots=(
        ("event", (
            "ion squall", "meteor drizzle", "beacon failure", "aurora surge",
            "engine flutter", "dust front", "sensor ghost", "tide of static",
            "drone flyby", "coolant leak", "gravity ripple", "comms blackout",
            "hull ping", "solar flare", "convoy crossing", "quarantine drill",
        )),
        ("outcome", (
            "Readings stayed inside tolerance", "We lost an hour but no gear",
            "The samples survived intact", "Morale held despite the noise",
            "Repairs closed out clean", "The charts gained two corrections",
            "Nothing pursued us", "Fuel margins stayed comfortable",
            "The beacon answered on the third try", "Every checklist closed green",
            "The cargo shifted but held", "We logged three new contacts",
            "The storm passed north of us", "The relay accepted our packet",
            "No injuries reached the ledger", "The anomaly faded by dawn",
        )),
    ),
)

_ANOMALIES = SeededList(
    stream=128,
    pool=(
        "doubled starlight", "phantom echo", "slow lightning", "inverted compass",
        "humming bulkheads", "cold spot", "mirrored horizon", "silent band",
        "drifting lights", "clock skew", "metal rain", "green dawn",
        "hollow ping", "second shadow", "stuttering beacon", "warm vacuum",
    ),
    min_items=1,
    max_items=3,
)


def mission_brief_schema(version: int = 1) -> SchemaDef:
    return SchemaDef(
        "mission-brief",
        version,
        (
            text_field("terrain"),
            text_field("sky"),
            text_field("signal"),
            list_field("hazards", text_field("item"), 4),
            text_field("mission_hook"),
            enum_field("threat_level", RISK_ENUM),
            integer_field("beacon_strength", 0, 100),
        ),
    )


def field_log_schema(version: int = 1) -> SchemaDef:
    return SchemaDef(
        "field-log",
        version,
        (
            text_field("log_title"),
            text_field("body"),
            enum_field("risk_note", RISK_ENUM),
            list_field("anomalies", text_field("item"), 3),
            integer_field("confidence", 0, 100),
        ),
    )


MISSION_BRIEF_TEMPLATE = TemplateSpec(
    fields=(
        ("terrain", _TERRAIN),
        ("sky", _SKY),
        ("signal", _SIGNAL),
        ("hazards", _HAZARDS),
        ("mission_hook", _MISSION_HOOK),
        ("threat_level", ContextEnum("risk")),
        ("beacon_strength", SeededInt(104, 0, 100)),
    )
)

FIELD_LOG_TEMPLATE = TemplateSpec(
    fields=(
        ("log_title", _LOG_TITLE),
        ("body", _LOG_BODY),
        ("risk_note", ContextEnum("risk")),
        ("anomalies", _ANOMALIES),
        ("confidence", SeededInt(136, 0, 100)),
    )
)


def default_registry(version: int = 1) -> PluginRegistry:
    """The two shipped plugins; ``version`` bumps every schema for invalidation tests."""
    registry = PluginRegistry()
    brief_schema = registry.schemas.register(mission_brief_schema(version))
    log_schema = registry.schemas.register(field_log_schema(version))
    registry.register(
        PluginSpec("mission-brief", brief_schema, mission_brief_prompt, MISSION_BRIEF_TEMPLATE)
    )
    registry.register(
        PluginSpec("field-log", log_schema, field_log_prompt, FIELD_LOG_TEMPLATE)
    )
    return registry
