from __future__ import annotations

import pytest

from galaxyatlas.schema import (
    DuplicateSchema,
    FieldSpec,
    GeneratedDocument,
    MalformedSchema,
    SchemaDef,
    SchemaRegistry,
    UnknownSchema,
    enum_field,
    integer_field,
    list_field,
    real_field,
    record_field,
    schema_to_prompt_fragment,
    text_field,
    validate_document,
)

PLANET = SchemaDef("planet", 1, (text_field("biome"), text_field("hazard")))

RICH = SchemaDef(
    "rich",
    1,
    (
        text_field("title"),
        enum_field("grade", ("low", "medium", "high")),
        integer_field("power", 0, 100),
        real_field("ratio", 0.0, 1.0),
        list_field("tags", text_field("item"), 3),
        text_field("footnote", required=False),
    ),
)


def doc(values: dict, schema: SchemaDef = RICH) -> GeneratedDocument:
    return GeneratedDocument(schema.name, schema.version, values)


def valid_rich() -> dict:
    return {"title": "t", "grade": "low", "power": 5, "ratio": 0.5, "tags": ["a"]}


def kinds(issues) -> list[str]:
    return sorted(i.kind for i in issues)


class TestTaxonomy:
    def test_valid_document_passes(self):
        assert validate_document(doc(valid_rich()), RICH) == []

    def test_missing_field(self):
        values = valid_rich()
        del values["grade"]
        issues = validate_document(doc(values), RICH)
        assert kinds(issues) == ["MissingField"]
        assert issues[0].field == "grade"

    def test_wrong_kind(self):
        values = valid_rich()
        values["title"] = 7
        assert kinds(validate_document(doc(values), RICH)) == ["WrongKind"]

    def test_enum_violation(self):
        values = valid_rich()
        values["grade"] = "apocalyptic"
        issues = validate_document(doc(values), RICH)
        assert kinds(issues) == ["EnumViolation"]
        assert "low" in issues[0].message

    def test_enum_wrong_type_is_wrong_kind_not_enum(self):
        values = valid_rich()
        values["grade"] = 3
        assert kinds(validate_document(doc(values), RICH)) == ["WrongKind"]

    def test_range_violation_integer(self):
        values = valid_rich()
        values["power"] = 101
        assert kinds(validate_document(doc(values), RICH)) == ["RangeViolation"]

    def test_range_violation_real(self):
        values = valid_rich()
        values["ratio"] = -0.1
        assert kinds(validate_document(doc(values), RICH)) == ["RangeViolation"]

    def test_bool_is_not_an_integer(self):
        values = valid_rich()
        values["power"] = True
        assert kinds(validate_document(doc(values), RICH)) == ["WrongKind"]

    def test_unknown_field(self):
        values = valid_rich()
        values["extra"] = 1
        issues = validate_document(doc(values), RICH)
        assert kinds(issues) == ["UnknownField"]
        assert issues[0].field == "extra"

    def test_list_too_long(self):
        values = valid_rich()
        values["tags"] = ["a", "b", "c", "d"]
        assert kinds(validate_document(doc(values), RICH)) == ["ListTooLong"]

    def test_list_element_path(self):
        values = valid_rich()
        values["tags"] = ["ok", 5]
        issues = validate_document(doc(values), RICH)
        assert kinds(issues) == ["WrongKind"]
        assert issues[0].field == "tags[1]"

    def test_optional_field_may_be_absent_but_still_typed(self):
        values = valid_rich()
        assert validate_document(doc(values), RICH) == []
        values["footnote"] = 12
        assert kinds(validate_document(doc(values), RICH)) == ["WrongKind"]

    def test_all_violations_accumulate(self):
        values = {"title": 7, "grade": "terrible", "power": -1, "tags": "nope", "extra": 0}
        issues = validate_document(doc(values), RICH)
        assert kinds(issues) == [
            "EnumViolation",
            "MissingField",
            "RangeViolation",
            "UnknownField",
            "WrongKind",
            "WrongKind",
        ]

    def test_integer_accepted_for_real(self):
        values = valid_rich()
        values["ratio"] = 1
        assert validate_document(doc(values), RICH) == []


class TestNestedRecords:
    NESTED = SchemaDef(
        "outer",
        1,
        (
            text_field("label"),
            record_field("inner", SchemaDef("inner", 1, (integer_field("count", 0, 9),))),
        ),
    )

    def test_nested_paths_are_dotted(self):
        bad = doc({"label": "x", "inner": {"count": 99}}, self.NESTED)
        issues = validate_document(bad, self.NESTED)
        assert [i.field for i in issues] == ["inner.count"]
        assert kinds(issues) == ["RangeViolation"]

    def test_nested_unknown_and_missing(self):
        bad = doc({"label": "x", "inner": {"other": 1}}, self.NESTED)
        issues = validate_document(bad, self.NESTED)
        fields = sorted(i.field for i in issues)
        assert fields == ["inner.count", "inner.other"]

    def test_nested_wrong_shape(self):
        bad = doc({"label": "x", "inner": [1, 2]}, self.NESTED)
        issues = validate_document(bad, self.NESTED)
        assert kinds(issues) == ["WrongKind"]
        assert issues[0].field == "inner"


class TestMalformedSchemas:
    def test_empty_enum(self):
        with pytest.raises(MalformedSchema):
            FieldSpec("grade", "enum", values=())

    def test_inverted_range(self):
        with pytest.raises(MalformedSchema):
            integer_field("power", 10, 0)

    def test_duplicate_field_names(self):
        with pytest.raises(MalformedSchema):
            SchemaDef("dup", 1, (text_field("a"), text_field("a")))

    def test_illegal_field_name(self):
        with pytest.raises(MalformedSchema):
            text_field("$schema")
        with pytest.raises(MalformedSchema):
            text_field("bad name")

    def test_version_must_be_positive(self):
        with pytest.raises(MalformedSchema):
            SchemaDef("x", 0, (text_field("a"),))

    def test_list_needs_element_and_length(self):
        with pytest.raises(MalformedSchema):
            FieldSpec("tags", "list")
        with pytest.raises(MalformedSchema):
            FieldSpec("tags", "list", element=text_field("item"), max_length=0)

    def test_unknown_kind(self):
        with pytest.raises(MalformedSchema):
            FieldSpec("x", "blob")


class TestRegistry:
    def test_round_trip(self):
        registry = SchemaRegistry()
        registry.register(PLANET)
        assert registry.get("planet", 1) is PLANET

    def test_duplicate_rejected(self):
        registry = SchemaRegistry()
        registry.register(PLANET)
        with pytest.raises(DuplicateSchema):
            registry.register(SchemaDef("planet", 1, (text_field("biome"),)))

    def test_versions_coexist(self):
        registry = SchemaRegistry()
        registry.register(PLANET)
        v2 = SchemaDef("planet", 2, (text_field("biome"), text_field("hazard")))
        registry.register(v2)
        assert registry.get("planet", 2) is v2
        assert registry.get("planet", 1) is PLANET

    def test_unknown_lookup(self):
        with pytest.raises(UnknownSchema):
            SchemaRegistry().get("ghost", 1)


class TestWireFormat:
    def test_wire_reserves_dollar_keys(self):
        document = GeneratedDocument("planet", 1, {"biome": "stormglass", "hazard": "shards"})
        wire = document.to_wire()
        assert wire["$schema"] == "planet"
        assert wire["$v"] == 1
        assert GeneratedDocument.from_wire(wire) == document

    def test_from_wire_requires_both_keys(self):
        with pytest.raises(ValueError):
            GeneratedDocument.from_wire({"$schema": "planet", "biome": "x"})
        with pytest.raises(ValueError):
            GeneratedDocument.from_wire({"$v": 1})

    def test_bytes_are_canonical(self):
        a = GeneratedDocument("p", 1, {"b": 1, "a": 2})
        b = GeneratedDocument("p", 1, {"a": 2, "b": 1})
        assert a.to_bytes() == b.to_bytes()


class TestPromptFragment:
    def test_line_per_field_format(self):
        fragment = schema_to_prompt_fragment(RICH)
        lines = fragment.splitlines()
        assert lines[0].startswith("Return a single JSON object for schema rich v1")
        assert "- title: text" in lines
        assert '- grade: one of "low", "medium", "high"' in lines
        assert "- power: integer between 0 and 100" in lines
        assert "- ratio: number between 0.0 and 1.0" in lines
        assert "- tags: list of text, at most 3 items" in lines
        assert "- footnote: text (optional)" in lines

    def test_fragment_deterministic(self):
        assert schema_to_prompt_fragment(RICH) == schema_to_prompt_fragment(RICH)
