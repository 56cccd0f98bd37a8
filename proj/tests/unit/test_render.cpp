#include <string>

#include "dc/encode.hpp"
#include "dc/io.hpp"
#include "dc/modelgen.hpp"
#include "dc/render.hpp"
#include "doctest.h"
#include "fixture_path.hpp"

using namespace dc;

TEST_CASE("readings come from relation names") {
    auto pair = generate_readings("has_member", "member_of");
    CHECK(pair.first == "… has member …");
    CHECK(pair.second == "… member of …");

    pair = generate_readings("has_part");
    CHECK(pair.first == "… has part …");
    CHECK(pair.second == "… part of …");

    pair = generate_readings("supervises");
    CHECK(pair.first == "… supervises …");
    CHECK(pair.second == "… is supervises of …");
}

TEST_CASE("rendered flagship kb converts back to a valid model in every family") {
    KnowledgeBase kb = parse_kb_text(read_text_file(fixture("fig1.dcs.kb")));
    for (Family family : {Family::UML, Family::EER, Family::ORM}) {
        ConceptualModel m = render_model(kb, family);
        CHECK(m.family == family);
        CHECK(validate_model(m).empty());
        CHECK(m.has_object_type("Person"));
    }
}

TEST_CASE("round trip: model -> kb -> model -> kb is equal modulo renaming") {
    for (Family family : {Family::UML, Family::EER, Family::ORM})
        for (unsigned seed = 0; seed < 40; ++seed) {
            ConceptualModel m = generate_model(family, 30, seed, /*core_only=*/true);
            REQUIRE(validate_model(m).empty());
            KnowledgeBase kb = encode_dcs(m);
            ConceptualModel back = render_model(kb, family);
            REQUIRE_MESSAGE(validate_model(back).empty(),
                            std::string(family_name(family)) << " seed " << seed);
            KnowledgeBase kb2 = encode_dcs(back);
            auto bij = kb_equal_modulo_renaming(kb, kb2);
            CHECK_MESSAGE(bij.has_value(), std::string(family_name(family)) << " seed " << seed);
        }
}

TEST_CASE("cross-family conversion preserves the kb modulo renaming") {
    for (unsigned seed = 0; seed < 25; ++seed) {
        ConceptualModel m = generate_model(Family::UML, 25, seed, /*core_only=*/true);
        KnowledgeBase kb = encode_dcs(m);
        for (Family target : {Family::EER, Family::ORM}) {
            ConceptualModel other = render_model(kb, target);
            REQUIRE(validate_model(other).empty());
            KnowledgeBase kb2 = encode_dcs(other);
            CHECK_MESSAGE(kb_equal_modulo_renaming(kb, kb2).has_value(),
                          "target " << std::string(family_name(target)) << " seed " << seed);
        }
    }
}

TEST_CASE("eer relationship names promote the lexicographically smaller label") {
    KnowledgeBase kb = parse_kb_text(read_text_file(fixture("fig1.dcs.kb")));
    ConceptualModel m = render_model(kb, Family::EER);
    REQUIRE(m.relationships.size() == 1);
    REQUIRE(m.relationships[0].name.has_value());
    CHECK(*m.relationships[0].name == "has");
}

TEST_CASE("orm rendering turns attributes into value types with bridge facts") {
    KnowledgeBase kb = parse_kb_text(read_text_file(fixture("fig1.dcs.kb")));
    ConceptualModel m = render_model(kb, Family::ORM);
    CHECK(m.attributes.empty());
    bool isbn_vt = false;
    for (const ValueType &vt : m.value_types)
        if (vt.name == "Isbn" && vt.datatype == "String") isbn_vt = true;
    CHECK(isbn_vt);
    bool bridge = false;
    for (const Relationship &r : m.relationships)
        for (const Role &role : r.roles)
            if (role.player == "Isbn") bridge = true;
    CHECK(bridge);
}

TEST_CASE("non-encoder-shaped axioms are rejected") {
    KnowledgeBase kb = parse_kb_text("profile dcs\n"
                                     "concept A\nconcept B\n"
                                     "rel R / 2\nrel S / 2\n"
                                     "inverse R S\n"
                                     ">= 1 R <= A\n"
                                     ">= 1 inv ( R ) <= B\n"
                                     "all R . B <= A\n");
    CHECK_THROWS_AS(render_model(kb, Family::UML), Error);
}

TEST_CASE("diagram source lists the outline and embeds the canonical json") {
    ConceptualModel m = read_model(fixture("fig1.cm.json"));
    std::string text = render_diagram_source(m);
    CHECK(text.find("UML") != std::string::npos);
    CHECK(text.find("Person") != std::string::npos);
    CHECK(text.find("%%json") != std::string::npos);
    CHECK(text.find(model_to_json_text(m)) != std::string::npos);
}
