#include <string>

#include "dc/io.hpp"
#include "dc/reasoner.hpp"
#include "doctest.h"
#include "fixture_path.hpp"

using namespace dc;

namespace {

KnowledgeBase load(const std::string &name) {
    return parse_kb_text(read_text_file(fixture(name)));
}

} // namespace

TEST_CASE("declared subsumptions are proved structurally") {
    KnowledgeBase kb = load("fig1.dcs.kb");
    CHECK(subsumes_structural(kb, "Scientist", "Person"));
    CHECK(subsumes_structural(kb, "Popular_science_book", "Book"));
    CHECK(subsumes_structural(kb, "Person", "Person"));
}

TEST_CASE("non-subsumptions get a countermodel with a witness") {
    KnowledgeBase kb = load("fig1.dcs.kb");
    CHECK_FALSE(subsumes_structural(kb, "Person", "Scientist"));
    auto cm = find_countermodel({&kb, "Person", "Scientist"}, 2);
    REQUIRE(cm.has_value());
    CHECK(cm->interp.concept_ext("Person").count(cm->witness) == 1);
    CHECK(cm->interp.concept_ext("Scientist").count(cm->witness) == 0);
    CHECK(is_model(cm->interp, kb).ok);
}

TEST_CASE("structural subsumption follows chains and cardinality weakening") {
    KnowledgeBase kb = parse_kb_text("profile dcs\n"
                                     "concept A\nconcept B\nconcept C\nconcept D\n"
                                     "rel R / 2\n"
                                     "A <= B\n"
                                     "B <= C\n"
                                     "A <= >= 2 R\n"
                                     ">= 1 R <= D\n");
    CHECK(subsumes_structural(kb, "A", "C"));
    CHECK(subsumes_structural(kb, "A", "D")); // ≥2 R weakens to ≥1 R, then fires
    CHECK_FALSE(subsumes_structural(kb, "C", "A"));
}

TEST_CASE("unsatisfiable concepts subsume everything and are reported") {
    KnowledgeBase kb = parse_kb_text("profile dcs\n"
                                     "concept A\nconcept B\n"
                                     "rel R / 2\n"
                                     "A <= >= 2 R\n"
                                     "A <= <= 1 R\n");
    CHECK(subsumes_structural(kb, "A", "B"));
    auto unsat = unsatisfiable_concepts(kb, 3);
    REQUIRE(unsat.size() == 1);
    CHECK(unsat[0] == "A");
    CHECK_FALSE(find_countermodel({&kb, "A", "B"}, 3).has_value());
}

TEST_CASE("inverse partner semantics are honored by the search") {
    // R and S are declared inverses; S-successors of a member of A are
    // exactly its inverse-R successors, so these two bounds conflict.
    KnowledgeBase kb = parse_kb_text("profile dcs\n"
                                     "concept A\nconcept B\n"
                                     "rel R / 2\nrel S / 2\n"
                                     "inverse R S\n"
                                     "A <= >= 1 S\n"
                                     "top <= <= 0 inv ( R )\n");
    CHECK_FALSE(find_countermodel({&kb, "A", "B"}, 3).has_value());
}

TEST_CASE("relation inclusion closure lifts participation") {
    KnowledgeBase kb = parse_kb_text("profile dcorm\n"
                                     "concept A\nconcept B\n"
                                     "rel R / 2\nrel S / 2\n"
                                     "R <= S\n"
                                     "A <= >= 1 R\n"
                                     ">= 1 S <= B\n");
    CHECK(subsumes_structural(kb, "A", "B"));
    CHECK_FALSE(find_countermodel({&kb, "A", "B"}, 3).has_value());
}

TEST_CASE("equivalence via mutual inclusion") {
    KnowledgeBase kb = parse_kb_text("profile dcs\nconcept A\nconcept B\nA <= B\nB <= A\n");
    CHECK(equivalent(kb, "A", "B"));
    ClassificationResult result = classify(kb, 3);
    REQUIRE(result.equivalence_classes.size() == 1);
    CHECK(result.equivalence_classes[0] == std::vector<std::string>{"A", "B"});
}

TEST_CASE("classification on the flagship kb") {
    KnowledgeBase kb = load("fig1.dcs.kb");
    ClassificationResult result = classify(kb, default_bound(kb));
    CHECK(result.subsumed("Scientist", "Person"));
    CHECK(result.subsumed("Popular_science_book", "Book"));
    CHECK_FALSE(result.subsumed("Person", "Book"));
    CHECK(result.verdicts.at({"Person", "Scientist"}) == PairVerdict::RefutedWithWitness);
}

TEST_CASE("default bound follows vocabulary size and cardinalities") {
    KnowledgeBase small = parse_kb_text("profile dcs\nconcept A\nrel R / 2\nA <= >= 2 R\n");
    CHECK(default_bound(small) == 4); // 1 concept + max card 2 + 1
    KnowledgeBase big = load("fig1.dcs.kb");
    CHECK(default_bound(big) == 5); // capped
}

TEST_CASE("positionalist kbs are rejected with a pointer to the rewrite") {
    KnowledgeBase kb = parse_kb_text("profile dcp\nconcept A\nconcept B\nrel P / 2\n"
                                     "A <= >= 1 [ 1 ] P\n");
    CHECK_THROWS_AS(subsumes_structural(kb, "A", "B"), Error);
}

TEST_CASE("soundness spot check: structural yes implies no countermodel") {
    KnowledgeBase kb = parse_kb_text("profile dcs\n"
                                     "concept A\nconcept B\nconcept C\n"
                                     "rel R / 2\n"
                                     "A <= B and >= 1 R\n"
                                     "B <= all R . C\n");
    for (const char *sub : {"A", "B", "C"})
        for (const char *super : {"A", "B", "C"})
            if (subsumes_structural(kb, sub, super))
                CHECK_FALSE(find_countermodel({&kb, sub, super}, 3).has_value());
}
