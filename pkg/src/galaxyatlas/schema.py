"""Declarative field schemas: the binding contract between code and model.

A document only enters the world after passing ``validate_document``, which
applies closed-world rules: every required field present, every value of
the right kind and in range, and no fields beyond the schema. All
violations are reported together so a retrying caller gets full feedback.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field

from .serialize import canonical_bytes

KINDS = ("text", "enum", "integer", "real", "list", "record")

MISSING_FIELD = "MissingField"
WRONG_KIND = "WrongKind"
ENUM_VIOLATION = "EnumViolation"
RANGE_VIOLATION = "RangeViolation"
UNKNOWN_FIELD = "UnknownField"
LIST_TOO_LONG = "ListTooLong"

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class MalformedSchema(ValueError):
    pass


class DuplicateSchema(ValueError):
    pass


class UnknownSchema(KeyError):
    pass


@dataclass(frozen=True)
class FieldSpec:
    name: str
    kind: str
    required: bool = True
    values: tuple[str, ...] = ()
    minimum: float | None = None
    maximum: float | None = None
    element: "FieldSpec | None" = None
    max_length: int | None = None
    fields: "SchemaDef | None" = None

    def __post_init__(self):
        if not _NAME_RE.match(self.name):
            raise MalformedSchema(f"illegal field name: {self.name!r}")
        if self.kind not in KINDS:
            raise MalformedSchema(f"unknown kind {self.kind!r} for field {self.name}")
        if self.kind == "enum" and not self.values:
            raise MalformedSchema(f"enum field {self.name} needs at least one value")
        if self.kind in ("integer", "real"):
            if self.minimum is None or self.maximum is None:
                raise MalformedSchema(f"numeric field {self.name} needs minimum and maximum")
            if self.minimum > self.maximum:
                raise MalformedSchema(f"field {self.name}: minimum exceeds maximum")
        if self.kind == "list":
            if self.element is None or self.max_length is None or self.max_length < 1:
                raise MalformedSchema(f"list field {self.name} needs an element spec and max length")
        if self.kind == "record" and self.fields is None:
            raise MalformedSchema(f"record field {self.name} needs a nested schema")

    def to_dict(self) -> dict:
        out: dict = {"name": self.name, "kind": self.kind, "required": self.required}
        if self.kind == "enum":
            out["values"] = list(self.values)
        if self.kind in ("integer", "real"):
            out["minimum"] = self.minimum
            out["maximum"] = self.maximum
        if self.kind == "list":
            out["element"] = self.element.to_dict()
            out["max_length"] = self.max_length
        if self.kind == "record":
            out["fields"] = [f.to_dict() for f in self.fields.fields]
        return out


def text_field(name: str, required: bool = True) -> FieldSpec:
    return FieldSpec(name, "text", required)


def enum_field(name: str, values: tuple[str, ...], required: bool = True) -> FieldSpec:
    return FieldSpec(name, "enum", required, values=tuple(values))


def integer_field(name: str, minimum: int, maximum: int, required: bool = True) -> FieldSpec:
    return FieldSpec(name, "integer", required, minimum=minimum, maximum=maximum)


def real_field(name: str, minimum: float, maximum: float, required: bool = True) -> FieldSpec:
    return FieldSpec(name, "real", required, minimum=minimum, maximum=maximum)


def list_field(name: str, element: FieldSpec, max_length: int, required: bool = True) -> FieldSpec:
    return FieldSpec(name, "list", required, element=element, max_length=max_length)


def record_field(name: str, fields: "SchemaDef", required: bool = True) -> FieldSpec:
    return FieldSpec(name, "record", required, fields=fields)


@dataclass(frozen=True)
class SchemaDef:
    name: str
    version: int
    fields: tuple[FieldSpec, ...]

    def __post_init__(self):
        if not self.name:
            raise MalformedSchema("schema name must be non-empty")
        if not isinstance(self.version, int) or self.version < 1:
            raise MalformedSchema("schema version must be a positive integer")
        names = [f.name for f in self.fields]
        if len(names) != len(set(names)):
            raise MalformedSchema(f"duplicate field names in schema {self.name}")

    def field_map(self) -> dict[str, FieldSpec]:
        return {f.name: f for f in self.fields}

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "version": self.version,
            "fields": [f.to_dict() for f in self.fields],
        }


@dataclass(frozen=True)
class GeneratedDocument:
    schema_name: str
    schema_version: int
    values: dict

    def to_wire(self) -> dict:
        return {"$schema": self.schema_name, "$v": self.schema_version, **self.values}

    def to_bytes(self) -> bytes:
        return canonical_bytes(self.to_wire())

    @classmethod
    def from_wire(cls, payload: dict) -> "GeneratedDocument":
        if not isinstance(payload, dict) or "$schema" not in payload or "$v" not in payload:
            raise ValueError("wire document must carry $schema and $v")
        values = {k: v for k, v in payload.items() if k not in ("$schema", "$v")}
        return cls(schema_name=payload["$schema"], schema_version=int(payload["$v"]), values=values)


@dataclass(frozen=True)
class ValidationIssue:
    kind: str
    field: str
    message: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "field": self.field, "message": self.message}


class SchemaRegistry:
    """Write-once store of schema definitions keyed by (name, version)."""

    def __init__(self):
        self._lock = threading.Lock()
        self._defs: dict[tuple[str, int], SchemaDef] = {}

    def register(self, schema: SchemaDef) -> SchemaDef:
        key = (schema.name, schema.version)
        with self._lock:
            if key in self._defs:
                raise DuplicateSchema(f"schema {schema.name} v{schema.version} already registered")
            self._defs[key] = schema
        return schema

    def get(self, name: str, version: int) -> SchemaDef:
        try:
            return self._defs[(name, version)]
        except KeyError:
            raise UnknownSchema(f"schema {name} v{version} not registered") from None

    def entries(self) -> list[SchemaDef]:
        return list(self._defs.values())


def _check_value(value, spec: FieldSpec, path: str, issues: list[ValidationIssue]):
    kind = spec.kind
    if kind == "text":
        if not isinstance(value, str):
            issues.append(ValidationIssue(WRONG_KIND, path, f"expected text, got {type(value).__name__}"))
    elif kind == "enum":
        if not isinstance(value, str):
            issues.append(ValidationIssue(WRONG_KIND, path, f"expected text, got {type(value).__name__}"))
        elif value not in spec.values:
            allowed = ", ".join(spec.values)
            issues.append(ValidationIssue(ENUM_VIOLATION, path, f"{value!r} not one of: {allowed}"))
    elif kind == "integer":
        if not isinstance(value, int) or isinstance(value, bool):
            issues.append(ValidationIssue(WRONG_KIND, path, f"expected integer, got {type(value).__name__}"))
        elif not spec.minimum <= value <= spec.maximum:
            issues.append(
                ValidationIssue(RANGE_VIOLATION, path, f"{value} outside [{spec.minimum}, {spec.maximum}]")
            )
    elif kind == "real":
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            issues.append(ValidationIssue(WRONG_KIND, path, f"expected number, got {type(value).__name__}"))
        elif not spec.minimum <= value <= spec.maximum:
            issues.append(
                ValidationIssue(RANGE_VIOLATION, path, f"{value} outside [{spec.minimum}, {spec.maximum}]")
            )
    elif kind == "list":
        if not isinstance(value, list):
            issues.append(ValidationIssue(WRONG_KIND, path, f"expected list, got {type(value).__name__}"))
            return
        if len(value) > spec.max_length:
            issues.append(
                ValidationIssue(LIST_TOO_LONG, path, f"{len(value)} items exceed limit {spec.max_length}")
            )
        for i, item in enumerate(value):
            _check_value(item, spec.element, f"{path}[{i}]", issues)
    elif kind == "record":
        if not isinstance(value, dict):
            issues.append(ValidationIssue(WRONG_KIND, path, f"expected object, got {type(value).__name__}"))
            return
        _check_record(value, spec.fields, path + ".", issues)


def _check_record(values: dict, schema: SchemaDef, prefix: str, issues: list[ValidationIssue]):
    specs = schema.field_map()
    for spec in schema.fields:
        if spec.name not in values:
            if spec.required:
                issues.append(
                    ValidationIssue(MISSING_FIELD, prefix + spec.name, "required field is missing")
                )
            continue
        _check_value(values[spec.name], spec, prefix + spec.name, issues)
    for key in values:
        if key not in specs:
            issues.append(ValidationIssue(UNKNOWN_FIELD, prefix + key, "field not in schema"))


def validate_document(doc: GeneratedDocument, schema: SchemaDef) -> list[ValidationIssue]:
    """All violations of ``doc`` against ``schema``; empty list means valid."""
    issues: list[ValidationIssue] = []
    if not isinstance(doc.values, dict):
        issues.append(ValidationIssue(WRONG_KIND, "$document", "document values must be an object"))
        return issues
    _check_record(doc.values, schema, "", issues)
    return issues


def _kind_phrase(spec: FieldSpec) -> str:
    if spec.kind == "text":
        return "text"
    if spec.kind == "enum":
        return "one of " + ", ".join(f'"{v}"' for v in spec.values)
    if spec.kind == "integer":
        return f"integer between {spec.minimum} and {spec.maximum}"
    if spec.kind == "real":
        return f"number between {spec.minimum} and {spec.maximum}"
    if spec.kind == "list":
        return f"list of {_kind_phrase(spec.element)}, at most {spec.max_length} items"
    inner = "; ".join(f"{f.name}: {_kind_phrase(f)}" for f in spec.fields.fields)
    return f"object with fields ({inner})"


def schema_to_prompt_fragment(schema: SchemaDef) -> str:
    """Render a schema as instruction text a provider can follow.

    The layout is fixed line-per-field, so the same definition always yields
    the same string and simple tools can parse it back.
    """
    lines = [
        f"Return a single JSON object for schema {schema.name} v{schema.version}"
        " with exactly these fields and no others:"
    ]
    for spec in schema.fields:
        suffix = "" if spec.required else " (optional)"
        lines.append(f"- {spec.name}: {_kind_phrase(spec)}{suffix}")
    return "\n".join(lines)
