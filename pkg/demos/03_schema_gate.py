"""Push documents through the closed-world schema gate and read the verdicts.

Generated text only enters the world if it satisfies a declared schema.
The validator accumulates every problem instead of stopping at the first,
which is what makes retry feedback useful.
"""

import json

from galaxyatlas import GeneratedDocument, validate_document
from galaxyatlas.plugins import default_registry
from galaxyatlas.schema import schema_to_prompt_fragment

registry = default_registry()
schema = registry.get("mission-brief").schema

# the same schema definition renders as a prompt fragment for the provider
print(schema_to_prompt_fragment(schema))

good = GeneratedDocument(
    schema_name="mission-brief",
    schema_version=1,
    values={
        "terrain": "Basalt terraces under a thin frost haze.",
        "sky": "Two moons, one badly cracked.",
        "signal": "Clean carrier on the survey band.",
        "hazards": ["thermal vents"],
        "mission_hook": "Chart the vents before the next freeze cycle.",
        "threat_level": "low",
        "beacon_strength": 77,
    },
)
print("valid document issues:", validate_document(good, schema))

# now break it in several ways at once
bad = GeneratedDocument(
    schema_name="mission-brief",
    schema_version=1,
    values={
        "terrain": 12,                       # wrong kind
        "sky": "fine",
        "signal": "fine",
        "hazards": ["a", "b", "c", "d", "e"],  # over the list cap
        "threat_level": "apocalyptic",       # not in the enum
        "beacon_strength": 9000,             # out of range
        "extra_field": True,                 # not in the schema
        # mission_hook missing entirely
    },
)
for issue in validate_document(bad, schema):
    print(f"  {issue.kind:15} {issue.field:20} {issue.message}")

# wire form carries the schema identity with the values
print("\nwire form of the valid document:")
print(json.dumps(good.to_wire(), indent=2)[:240], "...")
