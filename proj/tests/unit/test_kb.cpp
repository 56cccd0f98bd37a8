#include <string>

#include "dc/kb.hpp"
#include "doctest.h"

using namespace dc;

TEST_CASE("kb text round-trips through parse and serialize") {
    std::string text = "profile dcs\n"
                       "concept A\n"
                       "concept B\n"
                       "datatype T\n"
                       "attr a\n"
                       "rel R / 2\n"
                       "rel S / 2\n"
                       "inverse R S\n"
                       "A <= >= 1 R\n"
                       "A <= all R . B\n"
                       "A <= some a . T and <=1 a\n"
                       "B <= <= 2 inv ( R )\n"
                       "id A a\n";
    KnowledgeBase kb = parse_kb_text(text);
    CHECK(serialize_kb_text(kb) == text);
    // idempotence on the reparse
    CHECK(serialize_kb_text(parse_kb_text(serialize_kb_text(kb))) == text);
}

TEST_CASE("positionalist constructors round-trip") {
    std::string text = "profile dcp\n"
                       "concept A\n"
                       "concept B\n"
                       "rel P / 2\n"
                       "A <= >= 1 ( 2 : B )\n"
                       "A <= >= 2 [ 1 ] P\n"
                       "B <= <= 5 [ 2 ] P\n";
    CHECK(serialize_kb_text(parse_kb_text(text)) == text);
}

TEST_CASE("ternary and fd syntax round-trips") {
    std::string text = "profile dceer\n"
                       "rel P / 3\n"
                       "fd P 1 , 2 -> 3\n";
    CHECK(serialize_kb_text(parse_kb_text(text)) == text);
}

TEST_CASE("parse errors carry a line position") {
    CHECK_THROWS_AS(parse_kb_text("profile dcs\nconcept\n"), Error);
    CHECK_THROWS_AS(parse_kb_text("concept A\n"), Error); // missing header
    CHECK_THROWS_AS(parse_kb_text("profile dcx\n"), Error);
}

TEST_CASE("profile membership: standard grammar rejects positionalist forms") {
    KnowledgeBase kb = parse_kb_text("profile dcp\n"
                                     "concept A\n"
                                     "rel P / 2\n"
                                     "A <= >= 1 [ 1 ] P\n");
    CHECK(check_profile(kb, Profile::DCp).member());
    CHECK_FALSE(check_profile(kb, Profile::DCs).member());
}

TEST_CASE("profile membership widens monotonically from the standard core") {
    KnowledgeBase kb = parse_kb_text("profile dcs\n"
                                     "concept A\n"
                                     "concept B\n"
                                     "rel R / 2\n"
                                     "A <= >= 1 R\n"
                                     "A <= all R . B\n"
                                     "B <= some inv ( R ) . A\n");
    REQUIRE(check_profile(kb, Profile::DCs).member());
    CHECK(check_profile(kb, Profile::DCuml).member());
    CHECK(check_profile(kb, Profile::DCeer).member());
    CHECK(check_profile(kb, Profile::DCorm).member());
}

TEST_CASE("profile membership: extension features stay out of the core") {
    KnowledgeBase orm = parse_kb_text("profile dcorm\n"
                                      "rel R / 2\n"
                                      "rel S / 2\n"
                                      "R <= not S\n");
    CHECK(check_profile(orm, Profile::DCorm).member());
    CHECK_FALSE(check_profile(orm, Profile::DCs).member());
    CHECK_FALSE(check_profile(orm, Profile::DCuml).member());

    KnowledgeBase eer = parse_kb_text("profile dceer\n"
                                      "concept A\n"
                                      "attr a\n"
                                      "datatype T\n"
                                      "A <= >= 2 a . T\n");
    CHECK(check_profile(eer, Profile::DCeer).member());
    CHECK(check_profile(eer, Profile::DCuml).member());
    CHECK_FALSE(check_profile(eer, Profile::DCs).member());
}

TEST_CASE("equal modulo renaming: identity") {
    KnowledgeBase kb = parse_kb_text("profile dcs\n"
                                     "concept A\n"
                                     "rel R / 2\n"
                                     "A <= >= 1 R\n");
    auto bij = kb_equal_modulo_renaming(kb, kb);
    REQUIRE(bij.has_value());
    for (const auto &[from, to] : bij->mapping) CHECK(from == to);
}

TEST_CASE("equal modulo renaming: generated labels may differ") {
    KnowledgeBase a = parse_kb_text("profile dcs\n"
                                    "concept A\n"
                                    "concept B\n"
                                    "rel has / 2\n"
                                    "rel P_e2 / 2 gen\n"
                                    "inverse has P_e2\n"
                                    ">= 1 has <= A\n"
                                    ">= 1 inv ( has ) <= B\n");
    KnowledgeBase b = parse_kb_text("profile dcs\n"
                                    "concept A\n"
                                    "concept B\n"
                                    "rel has / 2\n"
                                    "rel has_inv / 2 gen\n"
                                    "inverse has has_inv\n"
                                    ">= 1 has <= A\n"
                                    ">= 1 inv ( has ) <= B\n");
    auto bij = kb_equal_modulo_renaming(a, b);
    REQUIRE(bij.has_value());
    CHECK(bij->mapping.at("P_e2") == "has_inv");
}

TEST_CASE("equal modulo renaming: user names must match exactly") {
    KnowledgeBase a = parse_kb_text("profile dcs\nconcept A\n");
    KnowledgeBase b = parse_kb_text("profile dcs\nconcept B\n");
    CHECK_FALSE(kb_equal_modulo_renaming(a, b).has_value());
}

TEST_CASE("equal modulo renaming: axiom count mismatch") {
    KnowledgeBase a = parse_kb_text("profile dcs\nconcept A\nconcept B\nA <= B\n");
    KnowledgeBase b = parse_kb_text("profile dcs\nconcept A\nconcept B\n");
    CHECK_FALSE(kb_equal_modulo_renaming(a, b).has_value());
}

TEST_CASE("canonical order is stable under axiom insertion order") {
    KnowledgeBase a = parse_kb_text("profile dcs\nconcept A\nconcept B\nA <= B\nB <= A\n");
    KnowledgeBase b = parse_kb_text("profile dcs\nconcept A\nconcept B\nB <= A\nA <= B\n");
    a.canonicalize();
    b.canonicalize();
    CHECK(serialize_kb_text(a) == serialize_kb_text(b));
}
