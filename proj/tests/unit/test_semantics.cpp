#include <random>
#include <set>
#include <string>

#include "dc/io.hpp"
#include "dc/semantics.hpp"
#include "doctest.h"
#include "fixture_path.hpp"

using namespace dc;

namespace {

struct Expected {
    const char *name;
    bool model;
};

// Every entry pairs a hand-built interpretation with a hand-checked verdict.
const Expected kCorpus[] = {
    {"01_min_sat", true},      {"02_min_vio", false},      {"03_max_sat", true},
    {"04_max_vio", false},     {"05_allrel_sat", true},    {"06_allrel_vio", false},
    {"07_somerel_sat", true},  {"08_somerel_vio", false},  {"09_inverse_sat", true},
    {"10_minplace_sat", true}, {"11_maxplace_vio", false}, {"12_selection_sat", true},
    {"13_selection_vio", false}, {"14_attr_sat", true},    {"15_attr_vio", false},
    {"16_allattr_sat", true},  {"17_allattr_vio", false},  {"18_attrcard_sat", true},
    {"19_attrcard_vio", false}, {"20_or_sat", true},       {"21_or_vio", false},
    {"22_complement_vio", false}, {"23_complement_sat", true}, {"24_relinc_sat", true},
    {"25_idattr_sat", true},   {"26_idattr_vio", false},   {"27_idroles_sat", true},
    {"28_idroles_vio", false}, {"29_fd_sat", true},        {"30_fd_vio", false},
    {"31_top2_sat", true},     {"32_invmeta_sat", true},   {"33_invmeta_vio", false},
    {"34_subsume_sat", true},  {"35_subsume_vio", false},
};

Interpretation random_interp(std::mt19937 &rng, Vocabulary &voc) {
    voc.declare_concept("A");
    voc.declare_concept("B");
    voc.declare_relation("R", 2, {"1", "2"});
    Interpretation interp;
    for (const char *o : {"o1", "o2", "o3"}) interp.delta_c.insert(o);
    interp.top_set = interp.delta_c;
    for (const std::string &o : interp.delta_c) {
        if (rng() % 2) interp.concept_map["A"].insert(o);
        if (rng() % 2) interp.concept_map["B"].insert(o);
        for (const std::string &p : interp.delta_c)
            if (rng() % 3 == 0) interp.relation_map["R"].insert({{"1", o}, {"2", p}});
    }
    return interp;
}

} // namespace

TEST_CASE("interpretation fixture corpus matches the hand-checked verdicts") {
    size_t count = 0;
    for (const Expected &e : kCorpus) {
        KnowledgeBase kb = parse_kb_text(read_text_file(fixture(std::string("interp/") + e.name + ".kb")));
        Interpretation interp =
            parse_interpretation(read_text_file(fixture(std::string("interp/") + e.name + ".interp")));
        CHECK_MESSAGE(check_interpretation(interp, kb.vocabulary).empty(), e.name);
        ModelCheck check = is_model(interp, kb);
        CHECK_MESSAGE(check.ok == e.model, e.name);
        if (!e.model) CHECK_FALSE(check.violations.empty());
        ++count;
    }
    CHECK(count >= 20);
}

TEST_CASE("interpretation text round-trips") {
    for (const Expected &e : kCorpus) {
        std::string text = read_text_file(fixture(std::string("interp/") + e.name + ".interp"));
        Interpretation interp = parse_interpretation(text);
        std::string out = serialize_interpretation(interp);
        CHECK(serialize_interpretation(parse_interpretation(out)) == out);
    }
}

TEST_CASE("conjunction evaluates to set intersection") {
    std::mt19937 rng(11);
    for (int round = 0; round < 50; ++round) {
        Vocabulary voc;
        Interpretation interp = random_interp(rng, voc);
        auto conj = eval_concept(interp, voc,
                                 ConceptExpr::conj(ConceptExpr::atomic("A"),
                                                   ConceptExpr::atomic("B")));
        std::set<std::string> expect;
        for (const std::string &o : interp.concept_ext("A"))
            if (interp.concept_ext("B").count(o)) expect.insert(o);
        CHECK(conj == expect);
    }
}

TEST_CASE("inverse swaps the two places and is an involution positionally") {
    std::mt19937 rng(23);
    for (int round = 0; round < 50; ++round) {
        Vocabulary voc;
        Interpretation interp = random_interp(rng, voc);
        auto inv = eval_relation(interp, voc, RelationExpr::inverse("R"));
        std::set<Tuple> swapped;
        for (Tuple t : interp.relation_ext("R")) {
            std::swap(t["1"], t["2"]);
            swapped.insert(t);
        }
        CHECK(inv == swapped);
    }
}

TEST_CASE("universal typing and inverse-domain typing agree") {
    // ⊤ ⊑ ∀R.A holds exactly when ∃R⁻ ⊑ A does
    std::mt19937 rng(37);
    for (int round = 0; round < 100; ++round) {
        Vocabulary voc;
        Interpretation interp = random_interp(rng, voc);
        bool universal = satisfies_axiom(
            interp, voc,
            Axiom::concept_inc(ConceptExpr::top(),
                               ConceptExpr::all_rel(RelationExpr::atomic("R"), "A")));
        bool domain = satisfies_axiom(
            interp, voc,
            Axiom::concept_inc(ConceptExpr::min(1, RelationExpr::inverse("R")),
                               ConceptExpr::atomic("A")));
        CHECK(universal == domain);
    }
}

TEST_CASE("check_interpretation reports containment breaches") {
    Vocabulary voc;
    voc.declare_concept("A");
    Interpretation interp;
    interp.delta_c = {"o1"};
    interp.top_set = {"o1"};
    interp.concept_map["A"] = {"ghost"};
    CHECK_FALSE(check_interpretation(interp, voc).empty());
}
