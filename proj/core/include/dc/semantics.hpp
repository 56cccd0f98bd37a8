#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dc/kb.hpp"

namespace dc {

// A tuple of an n-ary relation, keyed by place label. Place labels carry no
// order of their own; positional views are derived from the declaration.
using Tuple = std::map<std::string, std::string>;

// Finite interpretation: object domain, value domain, and the extension of
// every vocabulary symbol. Unmapped symbols denote the empty set.
struct Interpretation {
    std::set<std::string> delta_c; // object identifiers
    std::set<std::string> delta_t; // value identifiers
    std::set<std::string> top_set; // ⊤ ⊆ delta_c
    std::map<std::string, std::set<std::string>> concept_map;
    std::map<std::string, std::set<Tuple>> relation_map;
    std::map<std::string, std::set<std::pair<std::string, std::string>>> attr_map;
    std::map<std::string, std::set<std::string>> datatype_map;

    const std::set<std::string> &concept_ext(const std::string &name) const;
    const std::set<Tuple> &relation_ext(const std::string &name) const;
    const std::set<std::pair<std::string, std::string>> &attr_ext(const std::string &name) const;
    const std::set<std::string> &datatype_ext(const std::string &name) const;
};

// Containment invariants (top ⊆ Δ_C, A ⊆ ⊤, tuples over ⊤ with declared
// places, attribute pairs over ⊤ × Δ_T, datatype sets over Δ_T); one message
// per violation.
std::vector<std::string> check_interpretation(const Interpretation &interp,
                                              const Vocabulary &voc);

std::set<std::string> eval_concept(const Interpretation &interp, const Vocabulary &voc,
                                   const ConceptExpr &c);
std::set<Tuple> eval_relation(const Interpretation &interp, const Vocabulary &voc,
                              const RelationExpr &r);

bool satisfies_axiom(const Interpretation &interp, const Vocabulary &voc, const Axiom &ax);

struct ModelViolation {
    std::string axiom;   // serialized axiom, or a metadata-condition label
    std::string witness; // offending object / tuple / value
};

struct ModelCheck {
    bool ok = true;
    std::vector<ModelViolation> violations;
};

// Checks every axiom plus the vocabulary side-conditions (inverse partners,
// concept disjointness).
ModelCheck is_model(const Interpretation &interp, const KnowledgeBase &kb);

// Text format: `obj …` / `val …` / `top …` / `set A = {…}` /
// `rel P = {(1:c1,2:c2), …}` / `attr a = {(c1,v1)}` / `dt T = {v1}` lines.
// A missing `top` line means ⊤ = Δ_C.
std::string serialize_interpretation(const Interpretation &interp);
Interpretation parse_interpretation(const std::string &text);

} // namespace dc
