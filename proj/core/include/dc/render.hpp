#pragma once

#include <string>
#include <utility>

#include "dc/kb.hpp"
#include "dc/model.hpp"

namespace dc {

// Fact-type verbalization: "has_member" -> "… has member …", with the
// inverse reading derived from the inverse relation name when one is given,
// from the "has_X -> X of" rule table otherwise, and by the generic
// "… is <name> of …" fallback.
std::pair<std::string, std::string> generate_readings(const std::string &relation_name,
                                                      const std::string &inverse_name = {});

struct LabelGenerator {
    std::pair<std::string, std::string> operator()(const std::string &relation_name,
                                                   const std::string &inverse_name = {}) const {
        return generate_readings(relation_name, inverse_name);
    }
};

// Reverse construction: standard-view kb -> conceptual model of the chosen
// family. Inverse relation pairs collapse to one binary relationship;
// attribute axioms become attributes (ORM: value types with bridging fact
// types); re-encoding the result yields a kb equal to the input modulo
// renaming of generated symbols.
ConceptualModel render_model(const KnowledgeBase &kb, Family family);

// Human-readable outline (one element per line) followed by the canonical
// JSON document; lossless with respect to the model.
std::string render_diagram_source(const ConceptualModel &model);

} // namespace dc
