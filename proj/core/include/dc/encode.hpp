#pragma once

#include <map>
#include <set>
#include <string>

#include "dc/kb.hpp"
#include "dc/model.hpp"

namespace dc {

// Deterministic fresh-name allocator. Generated names never shadow a name
// that was reserved first; collisions get a numeric suffix.
class NamingScheme {
public:
    void reserve(const std::string &name) { used_.insert(name); }
    bool used(const std::string &name) const { return used_.count(name) > 0; }

    std::string fresh(const std::string &base) {
        std::string candidate = base.empty() ? "x" : base;
        int n = 2;
        while (used_.count(candidate))
            candidate = (base.empty() ? "x" : base) + "_" + std::to_string(n++);
        used_.insert(candidate);
        return candidate;
    }

private:
    std::set<std::string> used_;
};

// Where each positionalist relation went during the standard-view rewrite:
// dcp relation name -> (place label -> lifted relation name). The place-i
// lifted relation has the place-i player as its domain.
struct LiftInfo {
    std::map<std::string, std::map<std::string, std::string>> place_map;
};

KnowledgeBase encode_dcp(const ConceptualModel &model);

// Positionalist-to-standard rewrite. `context` supplies role names / fact
// type readings for the directional relation labels; pass an empty model to
// force auto-generated labels.
KnowledgeBase pos_to_standard(const KnowledgeBase &kb, const ConceptualModel &context,
                              LiftInfo *lift_out = nullptr);

KnowledgeBase encode_dcs(const ConceptualModel &model);
KnowledgeBase encode_uml(const ConceptualModel &model);
KnowledgeBase encode_eer(const ConceptualModel &model, bool reify_ternaries = false);
KnowledgeBase encode_orm(const ConceptualModel &model);

// Reification of one n-ary (n = 3) relationship into a fresh concept with
// one typed, total, functional binary per component plus a joint identifier
// over the components. Returns a kb holding just the players' declarations
// and the reification axioms.
KnowledgeBase reify_nary(const ConceptualModel &model, const RelRef &rel);

// Directional relation names for one ORM fact type, one per place in place
// order (binary: forward/inverse). `generated` is set per name.
std::vector<std::pair<std::string, bool>> orm_reading_names(const Relationship &rel);

} // namespace dc
