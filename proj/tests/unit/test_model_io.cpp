#include <string>

#include "dc/io.hpp"
#include "dc/model.hpp"
#include "doctest.h"
#include "fixture_path.hpp"

using namespace dc;

TEST_CASE("model JSON round-trips canonically") {
    ConceptualModel m = read_model(fixture("fig1.cm.json"));
    CHECK(m.family == Family::UML);
    CHECK(m.object_types.size() == 5);
    CHECK(m.relationships.size() == 1);
    CHECK(m.constraints.size() == 3);
    std::string once = model_to_json_text(m);
    std::string twice = model_to_json_text(model_from_json_text(once));
    CHECK(once == twice);
}

TEST_CASE("unknown fields are rejected with a path") {
    std::string text = R"({"formatVersion":"1.0.0","family":"UML","bogus":1})";
    try {
        model_from_json_text(text);
        FAIL("expected a schema error");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::SchemaError);
        CHECK(std::string(e.what()).find("bogus") != std::string::npos);
    }
}

TEST_CASE("major version mismatch is its own error") {
    std::string text = R"({"formatVersion":"2.0.0","family":"UML"})";
    try {
        model_from_json_text(text);
        FAIL("expected a version error");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::VersionMismatch);
    }
}

TEST_CASE("malformed JSON is a parse error") {
    CHECK_THROWS_AS(model_from_json_text("{"), Error);
}

TEST_CASE("unbounded attribute cardinality serializes as a star") {
    ConceptualModel m;
    m.family = Family::UML;
    m.object_types.push_back({"A"});
    m.data_types.push_back({"T"});
    Attribute a;
    a.owner = "A";
    a.name = "x";
    a.datatype = "T";
    a.has_card = true;
    a.card_min = 1;
    a.card_max = std::nullopt;
    m.attributes.push_back(a);
    std::string text = model_to_json_text(m);
    CHECK(text.find("\"max\": \"*\"") != std::string::npos);
    ConceptualModel back = model_from_json_text(text);
    REQUIRE(back.attributes.size() == 1);
    CHECK(back.attributes[0].has_card);
    CHECK_FALSE(back.attributes[0].card_max.has_value());
}

TEST_CASE("validate_model flags dangling references") {
    ConceptualModel m;
    m.family = Family::UML;
    m.object_types.push_back({"A"});
    Relationship r;
    r.roles.push_back({"1", "A", {}});
    r.roles.push_back({"2", "Ghost", {}});
    m.relationships.push_back(r);
    auto violations = validate_model(m);
    REQUIRE_FALSE(violations.empty());
    bool found = false;
    for (const auto &v : violations)
        if (v.detail.find("Ghost") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("validate_model flags family-restricted arities") {
    ConceptualModel m;
    m.family = Family::UML;
    m.object_types.push_back({"A"});
    Relationship r;
    r.roles.push_back({"1", "A", {}});
    r.roles.push_back({"2", "A", {}});
    r.roles.push_back({"3", "A", {}});
    m.relationships.push_back(r);
    CHECK_FALSE(validate_model(m).empty());

    ConceptualModel u;
    u.family = Family::EER; // unary outside ORM
    u.object_types.push_back({"A"});
    Relationship one;
    one.roles.push_back({"1", "A", {}});
    u.relationships.push_back(one);
    CHECK_FALSE(validate_model(u).empty());
}

TEST_CASE("orm value types normalize into attributes") {
    ConceptualModel m;
    m.family = Family::ORM;
    m.object_types.push_back({"Person"});
    m.data_types.push_back({"String"});
    m.value_types.push_back({"Name", "String"});
    Relationship bridge;
    bridge.roles.push_back({"1", "Person", {}});
    bridge.roles.push_back({"2", "Name", {}});
    bridge.readings.push_back("… has …");
    m.relationships.push_back(bridge);
    REQUIRE(validate_model(m).empty());
    ConceptualModel flat = normalize_orm_value_types(m);
    CHECK(flat.value_types.empty());
    CHECK(flat.relationships.empty());
    REQUIRE(flat.attributes.size() == 1);
    CHECK(flat.attributes[0].owner == "Person");
    CHECK(flat.attributes[0].name == "name");
    CHECK(flat.attributes[0].datatype == "String");
}
