#include "dc/encode.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace dc {

namespace {

bool all_digits(const std::string &s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
    });
}

std::string rel_path(int idx) { return "relationships[" + std::to_string(idx) + "]"; }

void require_valid(const ConceptualModel &m) {
    auto violations = validate_model(m);
    if (!violations.empty())
        throw Error(ErrorCode::InvalidArgument,
                    "model fails validation: " + violations.front().path + ": " +
                        violations.front().rule_id +
                        (violations.front().detail.empty() ? "" : " (" + violations.front().detail + ")"));
}

// The positionalist relation symbol for a relationship: its name, or a
// deterministic generated one.
std::string dcp_rel_name(const ConceptualModel &m, int idx) {
    if (m.relationships[idx].name) return *m.relationships[idx].name;
    std::string candidate = "p" + std::to_string(idx + 1);
    auto taken = [&](const std::string &n) {
        if (m.has_object_type(n) || m.has_data_type(n)) return true;
        for (const Relationship &r : m.relationships)
            if (r.name && *r.name == n) return true;
        for (const Attribute &a : m.attributes)
            if (a.name == n) return true;
        return false;
    };
    while (taken(candidate)) candidate += "_";
    return candidate;
}

int rel_index_for(const ConceptualModel &m, const std::string &rel_symbol) {
    for (size_t i = 0; i < m.relationships.size(); ++i)
        if (dcp_rel_name(m, static_cast<int>(i)) == rel_symbol) return static_cast<int>(i);
    return -1;
}

const Role *role_at(const Relationship &r, const std::string &place) {
    for (const Role &role : r.roles)
        if (role.place == place) return &role;
    return nullptr;
}

struct DcpBuild {
    KnowledgeBase kb;
    std::map<int, std::string> rel_name; // binary relationship index -> relation symbol
};

// Core construction (typing, attributes, subsumption, cardinality, mandatory,
// single identification). In strict mode anything beyond that is an error;
// in lenient mode it is skipped for a family encoder to pick up.
DcpBuild build_dcp(const ConceptualModel &m, bool strict) {
    DcpBuild out;
    KnowledgeBase &kb = out.kb;
    kb.profile = Profile::DCp;

    if (strict && !m.value_types.empty())
        throw Error(ErrorCode::UnsupportedFeature,
                    "value types require the ORM encoder (normalize_orm_value_types)");

    for (const auto &o : m.object_types) kb.vocabulary.declare_concept(o.name);
    for (const auto &d : m.data_types) kb.vocabulary.declare_datatype(d.name);
    for (const auto &a : m.attributes) kb.vocabulary.declare_attribute(a.name);

    for (size_t i = 0; i < m.relationships.size(); ++i) {
        const Relationship &r = m.relationships[i];
        if (r.arity() != 2) {
            if (strict)
                throw Error(ErrorCode::UnsupportedFeature,
                            rel_path(static_cast<int>(i)) + ": arity " +
                                std::to_string(r.arity()) +
                                " needs the " + (r.arity() == 1 ? "ORM" : "EER/ORM") +
                                " encoder");
            continue;
        }
        std::string name = dcp_rel_name(m, static_cast<int>(i));
        std::vector<std::string> places;
        for (const Role &role : r.roles) places.push_back(role.place);
        kb.vocabulary.declare_relation(name, 2, places, !r.name.has_value());
        out.rel_name[static_cast<int>(i)] = name;
        for (const Role &role : r.roles)
            kb.add_axiom(Axiom::concept_inc(
                             ConceptExpr::min_place(1, role.place, RelationExpr::atomic(name)),
                             ConceptExpr::atomic(role.player)),
                         rel_path(static_cast<int>(i)));
    }

    for (size_t j = 0; j < m.attributes.size(); ++j) {
        const Attribute &a = m.attributes[j];
        if (strict && a.has_card)
            throw Error(ErrorCode::UnsupportedFeature,
                        "attributes[" + std::to_string(j) +
                            "]: attribute cardinality needs the UML or EER encoder");
        kb.add_axiom(Axiom::concept_inc(ConceptExpr::atomic(a.owner),
                                        ConceptExpr::conj(ConceptExpr::some_attr(a.name, a.datatype),
                                                          ConceptExpr::at_most_one_attr(a.name))),
                     "attributes[" + std::to_string(j) + "]");
    }

    for (size_t k = 0; k < m.subsumptions.size(); ++k)
        kb.add_axiom(Axiom::concept_inc(ConceptExpr::atomic(m.subsumptions[k].sub),
                                        ConceptExpr::atomic(m.subsumptions[k].super)),
                     "subsumptions[" + std::to_string(k) + "]");

    if (strict && !m.rel_subsumptions.empty())
        throw Error(ErrorCode::UnsupportedFeature,
                    "relationship subsumption needs the UML or ORM encoder");

    for (size_t c = 0; c < m.constraints.size(); ++c) {
        std::string prov = "constraints[" + std::to_string(c) + "]";
        const Constraint &con = m.constraints[c];
        if (const auto *card = std::get_if<Cardinality>(&con)) {
            int idx = m.find_relationship(card->rel);
            if (m.relationships[idx].arity() != 2) {
                if (strict)
                    throw Error(ErrorCode::UnsupportedFeature,
                                prov + ": cardinality on a non-binary relationship needs the "
                                       "EER/ORM encoder");
                continue;
            }
            std::string rel = out.rel_name.at(idx);
            std::string subject =
                card->player ? *card->player : role_at(m.relationships[idx], card->place)->player;
            std::optional<ConceptExpr> rhs;
            if (card->max)
                rhs = ConceptExpr::max_place(*card->max, card->place, RelationExpr::atomic(rel));
            if (card->min >= 1) {
                ConceptExpr lo =
                    ConceptExpr::min_place(card->min, card->place, RelationExpr::atomic(rel));
                rhs = rhs ? ConceptExpr::conj(std::move(*rhs), std::move(lo)) : std::move(lo);
            }
            if (rhs)
                kb.add_axiom(Axiom::concept_inc(ConceptExpr::atomic(subject), std::move(*rhs)),
                             prov);
        } else if (const auto *mand = std::get_if<Mandatory>(&con)) {
            int idx = m.find_relationship(mand->rel);
            if (m.relationships[idx].arity() != 2) {
                if (strict)
                    throw Error(ErrorCode::UnsupportedFeature,
                                prov + ": mandatory on a non-binary relationship needs the "
                                       "EER/ORM encoder");
                continue;
            }
            std::string rel = out.rel_name.at(idx);
            std::string subject =
                mand->player ? *mand->player : role_at(m.relationships[idx], mand->place)->player;
            kb.add_axiom(
                Axiom::concept_inc(ConceptExpr::atomic(subject),
                                   ConceptExpr::min_place(1, mand->place, RelationExpr::atomic(rel))),
                prov);
        } else if (const auto *sid = std::get_if<SingleIdentification>(&con)) {
            kb.add_axiom(Axiom::id_attr(sid->object_type, sid->attribute), prov);
        } else if (strict) {
            const char *enc = m.family == Family::UML   ? "uml"
                              : m.family == Family::EER ? "eer"
                                                        : "orm";
            throw Error(ErrorCode::UnsupportedFeature,
                        prov + ": " + constraint_kind_name(con) +
                            " is outside the positionalist core; use the " + enc + " encoder");
        }
    }

    kb.canonicalize();
    return out;
}

NamingScheme scheme_for(const KnowledgeBase &kb) {
    NamingScheme names;
    for (const auto &[n, g] : kb.vocabulary.concepts) names.reserve(n);
    for (const auto &[n, d] : kb.vocabulary.relations) names.reserve(n);
    for (const auto &[n, g] : kb.vocabulary.attributes) names.reserve(n);
    for (const auto &[n, g] : kb.vocabulary.datatypes) names.reserve(n);
    return names;
}

struct LiftedNames {
    std::string n1, n2;
    bool g1 = true, g2 = true;
};

// Directional labels for the two lifted relations of binary `P`. The place-1
// relation takes the role name at the opposite end (that is how "has member"
// becomes the Affiliation-to-Person reading); ORM fact types use their
// readings instead, and recursive relationships fall back to place labels.
LiftedNames lifted_names(const ConceptualModel &ctx, int idx, const std::string &P) {
    LiftedNames out;
    out.n1 = P + "_e1";
    out.n2 = P + "_e2";
    if (idx < 0) return out;
    const Relationship &r = ctx.relationships[idx];
    if (ctx.family == Family::ORM) {
        auto names = orm_reading_names(r);
        out.n1 = names[0].first;
        out.g1 = names[0].second;
        out.n2 = names[1].first;
        out.g2 = names[1].second;
        return out;
    }
    const Role &r1 = r.roles[0], &r2 = r.roles[1];
    bool recursive = r1.player == r2.player;
    auto pick = [](const std::optional<std::string> &candidate, std::string &slot, bool &gen) {
        if (candidate && !slugify(*candidate).empty()) {
            slot = slugify(*candidate);
            gen = false;
        }
    };
    if (!recursive) {
        pick(r2.role_name, out.n1, out.g1); // opposite end names the reading
        pick(r1.role_name, out.n2, out.g2);
    } else {
        if (!all_digits(r1.place)) pick(r1.place, out.n1, out.g1);
        if (out.g1) pick(r2.role_name, out.n1, out.g1); // same rule as above
        if (!all_digits(r2.place)) pick(r2.place, out.n2, out.g2);
        if (out.g2) pick(r1.role_name, out.n2, out.g2);
    }
    return out;
}

} // namespace

std::vector<std::pair<std::string, bool>> orm_reading_names(const Relationship &rel) {
    std::vector<std::string> slugs;
    for (const auto &reading : rel.readings) slugs.push_back(slugify(reading));
    std::string base = rel.name ? slugify(*rel.name) : "";
    int n = rel.arity();
    std::vector<std::pair<std::string, bool>> out;
    if (n == 2) {
        if (!slugs.empty() && !slugs[0].empty()) {
            out.emplace_back(slugs[0], false);
            if (slugs.size() >= 2 && !slugs[1].empty())
                out.emplace_back(slugs[1], false);
            else
                out.emplace_back(slugs[0] + "_inv", true);
        } else if (!base.empty()) {
            out.emplace_back(base, false);
            out.emplace_back(base + "_inv", true);
        } else {
            throw Error(ErrorCode::NamingError,
                        "fact type has neither a reading nor a name");
        }
        return out;
    }
    for (int i = 0; i < n; ++i) {
        if (static_cast<size_t>(i) < slugs.size() && !slugs[i].empty()) {
            out.emplace_back(slugs[i], false);
        } else if (!base.empty() || (!slugs.empty() && !slugs[0].empty())) {
            std::string b = base.empty() ? slugs[0] : base;
            out.emplace_back(b + "_c" + std::to_string(i + 1), true);
        } else {
            throw Error(ErrorCode::NamingError,
                        "fact type has neither a reading nor a name");
        }
    }
    return out;
}

KnowledgeBase encode_dcp(const ConceptualModel &model) {
    require_valid(model);
    return build_dcp(model, /*strict=*/true).kb;
}

KnowledgeBase pos_to_standard(const KnowledgeBase &kb, const ConceptualModel &context,
                              LiftInfo *lift_out) {
    if (kb.profile != Profile::DCp)
        throw Error(ErrorCode::InvalidArgument,
                    "positionalist-to-standard rewrite expects a dcp knowledge base");

    KnowledgeBase out;
    out.profile = Profile::DCs;
    out.vocabulary.concepts = kb.vocabulary.concepts;
    out.vocabulary.attributes = kb.vocabulary.attributes;
    out.vocabulary.datatypes = kb.vocabulary.datatypes;

    // Every positionalist relation is consumed by the rewrite, so its symbol
    // is free for reuse as a lifted label (a relationship named after one of
    // its own role names must keep that label unsuffixed).
    NamingScheme names;
    for (const auto &[n, g] : kb.vocabulary.concepts) names.reserve(n);
    for (const auto &[n, g] : kb.vocabulary.attributes) names.reserve(n);
    for (const auto &[n, g] : kb.vocabulary.datatypes) names.reserve(n);
    LiftInfo lift;

    // typing recorded in the dcp kb: relation -> place -> concept
    std::map<std::string, std::map<std::string, std::string>> kb_typing;
    for (const auto &ax : kb.axioms) {
        if (ax.kind != Axiom::Kind::ConceptInc) continue;
        const ConceptExpr &l = ax.lhs_c;
        if (l.kind == ConceptExpr::Kind::MinPlace && l.count == 1 &&
            l.rel->kind == RelationExpr::Kind::Atomic &&
            ax.rhs_c.kind == ConceptExpr::Kind::Atomic)
            kb_typing[l.rel->name].emplace(l.place, ax.rhs_c.name);
    }

    std::map<std::string, std::map<std::string, std::string>> consumed_typing;
    for (const auto &[P, decl] : kb.vocabulary.relations) {
        if (decl.arity != 2)
            throw Error(ErrorCode::UnsupportedFeature,
                        "relation '" + P + "' is not binary; reify it first");
        const std::string &pl1 = decl.places[0], &pl2 = decl.places[1];

        int idx = rel_index_for(context, P);
        std::string domain, range;
        if (idx >= 0) {
            domain = role_at(context.relationships[idx], pl1)->player;
            range = role_at(context.relationships[idx], pl2)->player;
        } else {
            auto it = kb_typing.find(P);
            if (it == kb_typing.end() || !it->second.count(pl1) || !it->second.count(pl2))
                throw Error(ErrorCode::InvalidArgument,
                            "relation '" + P + "' lacks typing axioms for both places");
            domain = it->second.at(pl1);
            range = it->second.at(pl2);
        }

        LiftedNames ln = lifted_names(context, idx, P);
        std::string pe1 = names.fresh(ln.n1);
        std::string pe2 = names.fresh(ln.n2);
        out.vocabulary.declare_relation(pe1, 2, {"1", "2"}, ln.g1);
        out.vocabulary.declare_relation(pe2, 2, {"1", "2"}, ln.g2);
        out.vocabulary.inverse_partners.emplace_back(pe1, pe2);
        lift.place_map[P][pl1] = pe1;
        lift.place_map[P][pl2] = pe2;
        consumed_typing[P][pl1] = domain;
        consumed_typing[P][pl2] = range;

        std::string prov = idx >= 0 ? rel_path(idx) : "relation:" + P;
        // Typing goes on the user-labeled direction when only one direction
        // has a user label; that keeps the axiom pair stable when the kb is
        // rendered to a model and encoded again.
        if (ln.g1 && !ln.g2) {
            out.add_axiom(Axiom::concept_inc(ConceptExpr::min(1, RelationExpr::atomic(pe2)),
                                             ConceptExpr::atomic(range)),
                          prov);
            out.add_axiom(Axiom::concept_inc(ConceptExpr::min(1, RelationExpr::inverse(pe2)),
                                             ConceptExpr::atomic(domain)),
                          prov);
        } else {
            out.add_axiom(Axiom::concept_inc(ConceptExpr::min(1, RelationExpr::atomic(pe1)),
                                             ConceptExpr::atomic(domain)),
                          prov);
            out.add_axiom(Axiom::concept_inc(ConceptExpr::min(1, RelationExpr::inverse(pe1)),
                                             ConceptExpr::atomic(range)),
                          prov);
        }
    }

    // Place-indexed restrictions become plain number restrictions on the
    // lifted relation of that place.
    std::function<ConceptExpr(const ConceptExpr &)> rewrite =
        [&](const ConceptExpr &c) -> ConceptExpr {
        using K = ConceptExpr::Kind;
        switch (c.kind) {
        case K::MinPlace:
        case K::MaxPlace: {
            const RelationExpr &r = *c.rel;
            RelationExpr lifted = RelationExpr::top(2);
            if (r.kind == RelationExpr::Kind::Atomic) {
                auto pit = lift.place_map.find(r.name);
                if (pit == lift.place_map.end() || !pit->second.count(c.place))
                    throw Error(ErrorCode::InvalidArgument,
                                "place '" + c.place + "' unknown for relation " + r.name);
                lifted = RelationExpr::atomic(pit->second.at(c.place));
            } else if (r.kind != RelationExpr::Kind::TopN) {
                throw Error(ErrorCode::UnsupportedFeature,
                            "selection expressions have no standard-view counterpart");
            }
            return c.kind == K::MinPlace ? ConceptExpr::min(c.count, std::move(lifted))
                                         : ConceptExpr::max(c.count, std::move(lifted));
        }
        case K::And:
            return ConceptExpr::conj(rewrite(*c.lhs), rewrite(*c.rhs));
        case K::Or:
            return ConceptExpr::disj(rewrite(*c.lhs), rewrite(*c.rhs));
        default:
            return c;
        }
    };

    bool has_prov = kb.provenance.size() == kb.axioms.size();
    for (size_t i = 0; i < kb.axioms.size(); ++i) {
        const Axiom &ax = kb.axioms[i];
        std::string prov = has_prov ? kb.provenance[i] : std::string{};
        if (ax.kind == Axiom::Kind::IdAttr) {
            out.add_axiom(ax, prov);
            continue;
        }
        if (ax.kind != Axiom::Kind::ConceptInc)
            throw Error(ErrorCode::UnsupportedFeature,
                        "axiom form not part of the positionalist core: " + serialize_axiom(ax));
        // Typing axioms were replaced by the domain/range axioms above.
        const ConceptExpr &l = ax.lhs_c;
        if (l.kind == ConceptExpr::Kind::MinPlace && l.count == 1 &&
            l.rel->kind == RelationExpr::Kind::Atomic &&
            ax.rhs_c.kind == ConceptExpr::Kind::Atomic) {
            auto ct = consumed_typing.find(l.rel->name);
            if (ct != consumed_typing.end() && ct->second.count(l.place) &&
                ct->second.at(l.place) == ax.rhs_c.name)
                continue;
        }
        out.add_axiom(Axiom::concept_inc(rewrite(ax.lhs_c), rewrite(ax.rhs_c)), prov);
    }

    out.canonicalize();
    if (lift_out) *lift_out = std::move(lift);
    return out;
}

KnowledgeBase encode_dcs(const ConceptualModel &model) {
    ConceptualModel m = model;
    if (m.family == Family::ORM && !m.value_types.empty()) m = normalize_orm_value_types(m);
    require_valid(m);
    KnowledgeBase dcp = build_dcp(m, /*strict=*/true).kb;
    return pos_to_standard(dcp, m);
}

// ---- shared family machinery -------------------------------------------

namespace {

struct ReifyResult {
    std::string concept_name;
    std::vector<std::string> components; // one per place, in role order
};

// Algorithm-2 style reification: a fresh concept with one total functional
// binary per component, each typed towards its player, plus (optionally) a
// joint identifier over the component tuple.
ReifyResult reify_impl(KnowledgeBase &kb, NamingScheme &names, const std::string &base,
                       const std::vector<std::string> &players,
                       const std::vector<std::pair<std::string, bool>> &comp_bases,
                       const std::string &concept_override, bool with_id,
                       const std::string &prov) {
    ReifyResult res;
    if (concept_override.empty()) {
        res.concept_name = names.fresh(base + "_r");
        kb.vocabulary.declare_concept(res.concept_name, true);
    } else {
        res.concept_name = concept_override;
    }
    kb.add_axiom(Axiom::concept_inc(ConceptExpr::atomic(res.concept_name), ConceptExpr::top()),
                 prov);
    for (size_t i = 0; i < players.size(); ++i) {
        std::string re = names.fresh(comp_bases[i].first);
        kb.vocabulary.declare_relation(re, 2, {"1", "2"}, comp_bases[i].second);
        res.components.push_back(re);
        kb.add_axiom(Axiom::concept_inc(ConceptExpr::min(1, RelationExpr::atomic(re)),
                                        ConceptExpr::atomic(res.concept_name)),
                     prov);
        kb.add_axiom(Axiom::concept_inc(ConceptExpr::min(1, RelationExpr::inverse(re)),
                                        ConceptExpr::atomic(players[i])),
                     prov);
        kb.add_axiom(Axiom::concept_inc(ConceptExpr::atomic(res.concept_name),
                                        ConceptExpr::min(1, RelationExpr::atomic(re))),
                     prov);
        kb.add_axiom(Axiom::concept_inc(ConceptExpr::atomic(res.concept_name),
                                        ConceptExpr::max(1, RelationExpr::atomic(re))),
                     prov);
    }
    if (with_id) kb.add_axiom(Axiom::id_roles(res.concept_name, res.components), prov);
    return res;
}

void add_attr_card(KnowledgeBase &kb, const std::string &owner, const std::string &attr,
                   const std::string &datatype, unsigned min, std::optional<unsigned> max,
                   const std::string &prov) {
    std::optional<ConceptExpr> rhs;
    if (max) rhs = ConceptExpr::attr_max(*max, attr, datatype);
    if (min >= 1) {
        ConceptExpr lo = ConceptExpr::attr_min(min, attr, datatype);
        rhs = rhs ? ConceptExpr::conj(std::move(*rhs), std::move(lo)) : std::move(lo);
    }
    if (rhs) kb.add_axiom(Axiom::concept_inc(ConceptExpr::atomic(owner), std::move(*rhs)), prov);
}

const std::string *attr_datatype(const ConceptualModel &m, const std::string &owner,
                                 const std::string &attr) {
    for (const Attribute &a : m.attributes)
        if (a.owner == owner && a.name == attr) return &a.datatype;
    return nullptr;
}

// Componentwise alignment of two same-arity relationships: by place label
// when the label sets match, by role order otherwise.
std::vector<std::pair<std::string, std::string>> aligned_places(const Relationship &sub,
                                                                const Relationship &super) {
    std::vector<std::pair<std::string, std::string>> out;
    std::set<std::string> sub_places, super_places;
    for (const Role &r : sub.roles) sub_places.insert(r.place);
    for (const Role &r : super.roles) super_places.insert(r.place);
    if (sub_places == super_places) {
        for (const Role &r : sub.roles) out.emplace_back(r.place, r.place);
    } else {
        for (size_t i = 0; i < sub.roles.size(); ++i)
            out.emplace_back(sub.roles[i].place, super.roles[i].place);
    }
    return out;
}

void add_inverse_relincs(KnowledgeBase &kb, const std::string &prov_prefix) {
    for (const auto &[pe1, pe2] : kb.vocabulary.inverse_partners) {
        kb.add_axiom(Axiom::rel_inc(RelationExpr::atomic(pe1), RelationExpr::inverse(pe2)),
                     prov_prefix + pe1);
        kb.add_axiom(Axiom::rel_inc(RelationExpr::inverse(pe2), RelationExpr::atomic(pe1)),
                     prov_prefix + pe1);
    }
}

} // namespace

KnowledgeBase reify_nary(const ConceptualModel &model, const RelRef &rel) {
    int idx = model.find_relationship(rel);
    if (idx < 0)
        throw Error(ErrorCode::InvalidArgument, "unknown relationship: " + rel);
    const Relationship &r = model.relationships[idx];
    if (r.arity() != 3)
        throw Error(ErrorCode::InvalidArgument,
                    "reification applies to ternary relationships; arity is " +
                        std::to_string(r.arity()));
    KnowledgeBase kb;
    kb.profile = Profile::DCorm;
    std::vector<std::string> players;
    for (const Role &role : r.roles) {
        if (!kb.vocabulary.concepts.count(role.player)) kb.vocabulary.declare_concept(role.player);
        players.push_back(role.player);
    }
    NamingScheme names = scheme_for(kb);
    std::string base = dcp_rel_name(model, idx);
    std::vector<std::pair<std::string, bool>> comp_bases;
    if (model.family == Family::ORM) {
        comp_bases = orm_reading_names(r);
    } else {
        for (int i = 1; i <= 3; ++i)
            comp_bases.emplace_back(base + "_c" + std::to_string(i), true);
    }
    reify_impl(kb, names, base, players, comp_bases, {}, /*with_id=*/true, rel_path(idx));
    kb.canonicalize();
    return kb;
}

KnowledgeBase encode_uml(const ConceptualModel &model) {
    if (model.family != Family::UML)
        throw Error(ErrorCode::InvalidArgument, "encode_uml expects a UML model");
    require_valid(model);
    LiftInfo lift;
    KnowledgeBase kb = pos_to_standard(build_dcp(model, /*strict=*/false).kb, model, &lift);
    kb.profile = Profile::DCuml;

    add_inverse_relincs(kb, "inverse:");

    for (size_t j = 0; j < model.attributes.size(); ++j) {
        const Attribute &a = model.attributes[j];
        if (a.has_card)
            add_attr_card(kb, a.owner, a.name, a.datatype, a.card_min.value_or(0), a.card_max,
                          "attributes[" + std::to_string(j) + "]");
    }
    for (size_t c = 0; c < model.constraints.size(); ++c) {
        if (const auto *ac = std::get_if<AttributeCardinality>(&model.constraints[c])) {
            const std::string *dt = attr_datatype(model, ac->owner, ac->attribute);
            add_attr_card(kb, ac->owner, ac->attribute, *dt, ac->min, ac->max,
                          "constraints[" + std::to_string(c) + "]");
        }
    }
    for (size_t k = 0; k < model.rel_subsumptions.size(); ++k) {
        const RelSubsumption &s = model.rel_subsumptions[k];
        int sub = model.find_relationship(s.sub);
        int super = model.find_relationship(s.super);
        std::string sub_sym = dcp_rel_name(model, sub);
        std::string super_sym = dcp_rel_name(model, super);
        for (const auto &[pl_sub, pl_super] :
             aligned_places(model.relationships[sub], model.relationships[super]))
            kb.add_axiom(
                Axiom::rel_inc(RelationExpr::atomic(lift.place_map.at(sub_sym).at(pl_sub)),
                               RelationExpr::atomic(lift.place_map.at(super_sym).at(pl_super))),
                "relSubsumptions[" + std::to_string(k) + "]");
    }
    kb.canonicalize();
    return kb;
}

KnowledgeBase encode_eer(const ConceptualModel &model, bool reify_ternaries) {
    if (model.family != Family::EER)
        throw Error(ErrorCode::InvalidArgument, "encode_eer expects an EER model");
    require_valid(model);
    LiftInfo lift;
    KnowledgeBase kb = pos_to_standard(build_dcp(model, /*strict=*/false).kb, model, &lift);
    kb.profile = Profile::DCeer;
    NamingScheme names = scheme_for(kb);

    // Ternaries stay atomic in the vocabulary (their component typing has no
    // place-free expression here) unless reification is requested, in which
    // case the output needs the joint-identifier axiom form of the ORM profile.
    std::map<int, ReifyResult> reified;
    bool any_reified = false;
    for (size_t i = 0; i < model.relationships.size(); ++i) {
        const Relationship &r = model.relationships[i];
        if (r.arity() != 3) continue;
        std::string sym = dcp_rel_name(model, static_cast<int>(i));
        if (!reify_ternaries) {
            std::vector<std::string> places;
            for (const Role &role : r.roles) places.push_back(role.place);
            kb.vocabulary.declare_relation(sym, 3, places, !r.name.has_value());
            continue;
        }
        std::vector<std::string> players;
        std::vector<std::pair<std::string, bool>> comp_bases;
        for (size_t p = 0; p < r.roles.size(); ++p) {
            players.push_back(r.roles[p].player);
            comp_bases.emplace_back(sym + "_c" + std::to_string(p + 1), true);
        }
        reified[static_cast<int>(i)] = reify_impl(kb, names, sym, players, comp_bases, {},
                                                  /*with_id=*/true, rel_path(static_cast<int>(i)));
        any_reified = true;
    }
    if (any_reified) kb.profile = Profile::DCorm;

    for (size_t j = 0; j < model.attributes.size(); ++j) {
        const Attribute &a = model.attributes[j];
        if (a.has_card)
            add_attr_card(kb, a.owner, a.name, a.datatype, a.card_min.value_or(0), a.card_max,
                          "attributes[" + std::to_string(j) + "]");
    }

    for (size_t c = 0; c < model.constraints.size(); ++c) {
        std::string prov = "constraints[" + std::to_string(c) + "]";
        const Constraint &con = model.constraints[c];
        if (const auto *ac = std::get_if<AttributeCardinality>(&con)) {
            const std::string *dt = attr_datatype(model, ac->owner, ac->attribute);
            add_attr_card(kb, ac->owner, ac->attribute, *dt, ac->min, ac->max, prov);
        } else if (const auto *wid = std::get_if<WeakIdentification>(&con)) {
            int idx = model.find_relationship(wid->rel);
            if (reified.count(idx))
                throw Error(ErrorCode::UnsupportedFeature,
                            prov + ": weak identification needs the atomic ternary; disable "
                                   "reification");
            kb.add_axiom(Axiom::fd(dcp_rel_name(model, idx), wid->i1, wid->i2, wid->i3), prov);
        } else if (const auto *mid = std::get_if<MultiAttributeIdentification>(&con)) {
            // Composite attribute with single identification.
            std::string composite;
            for (const auto &a : mid->attributes)
                composite += (composite.empty() ? "" : "_") + a;
            composite = names.fresh(composite);
            std::string dt = names.fresh(composite + "_type");
            kb.vocabulary.declare_attribute(composite, true);
            kb.vocabulary.declare_datatype(dt, true);
            kb.add_axiom(Axiom::concept_inc(
                             ConceptExpr::atomic(mid->object_type),
                             ConceptExpr::conj(ConceptExpr::some_attr(composite, dt),
                                               ConceptExpr::at_most_one_attr(composite))),
                         prov);
            kb.add_axiom(Axiom::id_attr(mid->object_type, composite), prov);
        } else if (const auto *aot = std::get_if<AssociativeObjectType>(&con)) {
            int idx = model.find_relationship(aot->rel);
            const Relationship &r = model.relationships[idx];
            std::string sym = dcp_rel_name(model, idx);
            std::vector<std::string> players;
            std::vector<std::pair<std::string, bool>> comp_bases;
            for (size_t p = 0; p < r.roles.size(); ++p) {
                players.push_back(r.roles[p].player);
                comp_bases.emplace_back(slugify(aot->object_type) + "_c" + std::to_string(p + 1),
                                        true);
            }
            // The joint identifier is not expressible in this profile's axiom
            // forms, so the associative concept carries the components only.
            reify_impl(kb, names, sym, players, comp_bases, aot->object_type,
                       /*with_id=*/false, prov);
        } else if (const auto *card = std::get_if<Cardinality>(&con)) {
            int idx = model.find_relationship(card->rel);
            if (model.relationships[idx].arity() != 3) continue; // binary: already in core
            auto rit = reified.find(idx);
            if (rit == reified.end())
                throw Error(ErrorCode::UnsupportedFeature,
                            prov + ": cardinality on a ternary place needs reification "
                                   "(reify_ternaries)");
            const Relationship &r = model.relationships[idx];
            size_t pos = 0;
            while (r.roles[pos].place != card->place) ++pos;
            std::string re = rit->second.components[pos];
            std::string subject = card->player ? *card->player : r.roles[pos].player;
            std::optional<ConceptExpr> rhs;
            if (card->max) rhs = ConceptExpr::max(*card->max, RelationExpr::inverse(re));
            if (card->min >= 1) {
                ConceptExpr lo = ConceptExpr::min(card->min, RelationExpr::inverse(re));
                rhs = rhs ? ConceptExpr::conj(std::move(*rhs), std::move(lo)) : std::move(lo);
            }
            if (rhs)
                kb.add_axiom(Axiom::concept_inc(ConceptExpr::atomic(subject), std::move(*rhs)),
                             prov);
        } else if (const auto *mand = std::get_if<Mandatory>(&con)) {
            int idx = model.find_relationship(mand->rel);
            if (model.relationships[idx].arity() != 3) continue;
            auto rit = reified.find(idx);
            if (rit == reified.end())
                throw Error(ErrorCode::UnsupportedFeature,
                            prov + ": mandatory on a ternary place needs reification "
                                   "(reify_ternaries)");
            const Relationship &r = model.relationships[idx];
            size_t pos = 0;
            while (r.roles[pos].place != mand->place) ++pos;
            std::string subject = mand->player ? *mand->player : r.roles[pos].player;
            kb.add_axiom(
                Axiom::concept_inc(
                    ConceptExpr::atomic(subject),
                    ConceptExpr::min(1, RelationExpr::inverse(rit->second.components[pos]))),
                prov);
        }
    }
    kb.canonicalize();
    return kb;
}

KnowledgeBase encode_orm(const ConceptualModel &input) {
    if (input.family != Family::ORM)
        throw Error(ErrorCode::InvalidArgument, "encode_orm expects an ORM model");
    ConceptualModel model =
        input.value_types.empty() ? input : normalize_orm_value_types(input);

    // Value constraints restrict an attribute (or a whole datatype) to an
    // enumerated set; representable only as a fresh datatype standing for the
    // restricted value space.
    std::vector<std::string> restricted_dts;
    std::set<std::string> former_value_types;
    for (const ValueType &vt : input.value_types) former_value_types.insert(vt.name);
    for (size_t c = 0; c < model.constraints.size(); ++c) {
        const auto *vc = std::get_if<ValueConstraint>(&model.constraints[c]);
        if (!vc) continue;
        auto dot = vc->target.find('.');
        bool on_value_type = dot == std::string::npos && former_value_types.count(vc->target);
        std::string base = dot != std::string::npos ? vc->target.substr(dot + 1) + "_vals"
                           : on_value_type         ? slugify(vc->target) + "_vals"
                                                   : vc->target + "_restricted";
        std::string fresh = base;
        int n = 2;
        while (model.has_data_type(fresh) || model.has_object_type(fresh))
            fresh = base + "_" + std::to_string(n++);
        model.data_types.push_back({fresh});
        restricted_dts.push_back(fresh);
        if (on_value_type) {
            // the value type was flattened into an attribute of the same slug;
            // retarget the constraint so it resolves in the normalized model
            for (Attribute &a : model.attributes)
                if (a.name == slugify(vc->target)) a.datatype = fresh;
            std::get<ValueConstraint>(model.constraints[c]).target = fresh;
        } else if (dot == std::string::npos) {
            for (Attribute &a : model.attributes)
                if (a.datatype == vc->target) a.datatype = fresh;
        } else {
            std::string owner = vc->target.substr(0, dot);
            std::string attr = vc->target.substr(dot + 1);
            for (Attribute &a : model.attributes)
                if (a.owner == owner && a.name == attr) a.datatype = fresh;
        }
    }
    require_valid(model);

    LiftInfo lift;
    KnowledgeBase kb = pos_to_standard(build_dcp(model, /*strict=*/false).kb, model, &lift);
    kb.profile = Profile::DCorm;
    for (const std::string &dt : restricted_dts) kb.vocabulary.datatypes[dt] = true;
    NamingScheme names = scheme_for(kb);

    add_inverse_relincs(kb, "inverse:");

    auto role_lift = [&](const RolePos &rp) -> std::string {
        int idx = model.find_relationship(rp.rel);
        auto pit = lift.place_map.find(dcp_rel_name(model, idx));
        if (pit == lift.place_map.end() || !pit->second.count(rp.place))
            throw Error(ErrorCode::UnsupportedFeature,
                        "role (" + rp.rel + ", " + rp.place + ") has no lifted binary relation");
        return pit->second.at(rp.place);
    };

    // Rule 1 (ternaries reified) and rule 2 (unaries as boolean attributes).
    std::map<int, ReifyResult> reified;
    std::string boolean_dt;
    for (size_t i = 0; i < model.relationships.size(); ++i) {
        const Relationship &r = model.relationships[i];
        std::string prov = rel_path(static_cast<int>(i));
        if (r.arity() == 1) {
            if (boolean_dt.empty()) {
                if (model.has_data_type("Boolean")) {
                    boolean_dt = "Boolean";
                } else {
                    boolean_dt = names.fresh("Boolean");
                    kb.vocabulary.declare_datatype(boolean_dt, true);
                }
            }
            std::string base = !r.readings.empty() ? slugify(r.readings[0])
                                                   : slugify(r.name.value_or(""));
            if (base.empty())
                throw Error(ErrorCode::NamingError,
                            prov + ": unary fact type has neither a reading nor a name");
            std::string attr = names.fresh(base);
            kb.vocabulary.declare_attribute(attr, false);
            kb.add_axiom(Axiom::concept_inc(
                             ConceptExpr::atomic(r.roles[0].player),
                             ConceptExpr::conj(ConceptExpr::all_attr(attr, boolean_dt),
                                               ConceptExpr::at_most_one_attr(attr))),
                         prov);
        } else if (r.arity() == 3) {
            std::vector<std::string> players;
            for (const Role &role : r.roles) players.push_back(role.player);
            reified[static_cast<int>(i)] =
                reify_impl(kb, names, dcp_rel_name(model, static_cast<int>(i)), players,
                           orm_reading_names(r), {}, /*with_id=*/true, prov);
        }
    }

    // Rule 7: nested (objectified) fact types become reified concepts too.
    std::map<int, ReifyResult> objectified;
    for (size_t c = 0; c < model.constraints.size(); ++c) {
        const auto *aot = std::get_if<AssociativeObjectType>(&model.constraints[c]);
        if (!aot) continue;
        int idx = model.find_relationship(aot->rel);
        if (reified.count(idx)) {
            objectified[idx] = reified[idx]; // ternary: already reified, reuse
            continue;
        }
        const Relationship &r = model.relationships[idx];
        std::vector<std::string> players;
        std::vector<std::pair<std::string, bool>> comp_bases;
        for (size_t p = 0; p < r.roles.size(); ++p) {
            players.push_back(r.roles[p].player);
            comp_bases.emplace_back(slugify(aot->object_type) + "_c" + std::to_string(p + 1), true);
        }
        objectified[idx] =
            reify_impl(kb, names, dcp_rel_name(model, idx), players, comp_bases,
                       aot->object_type, /*with_id=*/true,
                       "constraints[" + std::to_string(c) + "]");
        objectified[idx].concept_name = aot->object_type;
    }

    // Rule 3: relationships of different arity are pairwise disjoint. Only
    // the reified ones live in the concept domain, and no profile has concept
    // negation, so this is vocabulary metadata enforced by the evaluator.
    {
        std::vector<std::pair<std::string, int>> reified_concepts;
        for (const auto &[idx, res] : reified)
            reified_concepts.emplace_back(res.concept_name, model.relationships[idx].arity());
        for (const auto &[idx, res] : objectified)
            if (!reified.count(idx))
                reified_concepts.emplace_back(res.concept_name, model.relationships[idx].arity());
        for (size_t a = 0; a < reified_concepts.size(); ++a)
            for (size_t b = a + 1; b < reified_concepts.size(); ++b)
                if (reified_concepts[a].second != reified_concepts[b].second)
                    kb.vocabulary.disjoint_concepts.emplace_back(reified_concepts[a].first,
                                                                 reified_concepts[b].first);
    }

    // Rule 5: relationship subsumption, componentwise (and between reified
    // concepts when both sides are reified).
    for (size_t k = 0; k < model.rel_subsumptions.size(); ++k) {
        const RelSubsumption &s = model.rel_subsumptions[k];
        std::string prov = "relSubsumptions[" + std::to_string(k) + "]";
        int sub = model.find_relationship(s.sub);
        int super = model.find_relationship(s.super);
        const Relationship &rsub = model.relationships[sub];
        const Relationship &rsuper = model.relationships[super];
        auto pairs = aligned_places(rsub, rsuper);
        if (rsub.arity() == 2) {
            std::string sub_sym = dcp_rel_name(model, sub);
            std::string super_sym = dcp_rel_name(model, super);
            for (const auto &[pl_sub, pl_super] : pairs)
                kb.add_axiom(Axiom::rel_inc(
                                 RelationExpr::atomic(lift.place_map.at(sub_sym).at(pl_sub)),
                                 RelationExpr::atomic(lift.place_map.at(super_sym).at(pl_super))),
                             prov);
        } else {
            const ReifyResult &a = reified.at(sub);
            const ReifyResult &b = reified.at(super);
            kb.add_axiom(Axiom::concept_inc(ConceptExpr::atomic(a.concept_name),
                                            ConceptExpr::atomic(b.concept_name)),
                         prov);
            for (size_t p = 0; p < pairs.size(); ++p) {
                size_t qa = 0, qb = 0;
                while (rsub.roles[qa].place != pairs[p].first) ++qa;
                while (rsuper.roles[qb].place != pairs[p].second) ++qb;
                kb.add_axiom(Axiom::rel_inc(RelationExpr::atomic(a.components[qa]),
                                            RelationExpr::atomic(b.components[qb])),
                             prov);
            }
        }
    }

    // Remaining ORM constraints.
    for (size_t c = 0; c < model.constraints.size(); ++c) {
        std::string prov = "constraints[" + std::to_string(c) + "]";
        const Constraint &con = model.constraints[c];
        if (const auto *rs = std::get_if<RoleSubsumption>(&con)) {
            kb.add_axiom(Axiom::rel_inc(RelationExpr::atomic(role_lift(rs->sub)),
                                        RelationExpr::atomic(role_lift(rs->super))),
                         prov);
        } else if (const auto *rd = std::get_if<RoleDisjointness>(&con)) {
            std::string r1 = role_lift(rd->first), r2 = role_lift(rd->second);
            kb.add_axiom(Axiom::rel_inc(RelationExpr::atomic(r1),
                                        RelationExpr::complement(RelationExpr::atomic(r2))),
                         prov);
            kb.add_axiom(Axiom::rel_inc(RelationExpr::atomic(r2),
                                        RelationExpr::complement(RelationExpr::atomic(r1))),
                         prov);
        } else if (const auto *dm = std::get_if<DisjunctiveMandatory>(&con)) {
            std::optional<ConceptExpr> rhs;
            for (const RolePos &rp : dm->roles) {
                ConceptExpr some = ConceptExpr::min(1, RelationExpr::atomic(role_lift(rp)));
                rhs = rhs ? ConceptExpr::disj(std::move(*rhs), std::move(some)) : std::move(some);
            }
            kb.add_axiom(Axiom::concept_inc(ConceptExpr::atomic(dm->object_type), std::move(*rhs)),
                         prov);
        } else if (const auto *iu = std::get_if<InternalUniqueness>(&con)) {
            int idx = model.find_relationship(iu->rel);
            const Relationship &r = model.relationships[idx];
            const ReifyResult *res = nullptr;
            if (auto it = objectified.find(idx); it != objectified.end()) res = &it->second;
            else if (auto it2 = reified.find(idx); it2 != reified.end()) res = &it2->second;
            if (res) {
                std::vector<std::string> comps;
                for (const auto &pl : iu->places) {
                    size_t pos = 0;
                    while (r.roles[pos].place != pl) ++pos;
                    comps.push_back(res->components[pos]);
                }
                kb.add_axiom(Axiom::id_roles(res->concept_name, comps), prov);
            } else if (iu->places.size() == 1) {
                // Single-role uniqueness on a plain binary is functionality of
                // the role player over the lifted relation.
                const Role *role = role_at(r, iu->places[0]);
                kb.add_axiom(Axiom::concept_inc(
                                 ConceptExpr::atomic(role->player),
                                 ConceptExpr::max(1, RelationExpr::atomic(role_lift(
                                                         {model.ref_for(idx), iu->places[0]})))),
                             prov);
            } else if (iu->places.size() == static_cast<size_t>(r.arity())) {
                // Spanning uniqueness over a plain fact type: tuple sets are
                // duplicate-free by construction, nothing to assert.
            } else {
                throw Error(ErrorCode::UnsupportedFeature,
                            prov + ": multi-role internal uniqueness needs an objectified "
                                   "fact type");
            }
        } else if (const auto *eu = std::get_if<ExternalUniqueness>(&con)) {
            // Connector = the object type playing the other place of every
            // constrained binary role.
            std::optional<std::string> connector;
            bool have_connector = true;
            std::vector<std::pair<int, std::string>> connector_places; // (rel idx, place of A)
            for (const RolePos &rp : eu->roles) {
                int idx = model.find_relationship(rp.rel);
                const Relationship &r = model.relationships[idx];
                if (r.arity() != 2)
                    throw Error(ErrorCode::UnsupportedFeature,
                                prov + ": external uniqueness over non-binary roles");
                const Role *other = nullptr;
                for (const Role &role : r.roles)
                    if (role.place != rp.place) other = &role;
                connector_places.emplace_back(idx, other->place);
                if (!connector) connector = other->player;
                else if (*connector != other->player) have_connector = false;
            }
            if (have_connector && connector) {
                std::vector<std::string> rels;
                for (const auto &[idx, pl] : connector_places)
                    rels.push_back(role_lift({model.ref_for(idx), pl}));
                kb.add_axiom(Axiom::id_roles(*connector, rels), prov);
            } else {
                // No shared player: identify through a fresh reified concept
                // linked to each constrained role's player.
                std::vector<std::string> players;
                std::vector<std::pair<std::string, bool>> comp_bases;
                for (size_t p = 0; p < eu->roles.size(); ++p) {
                    const Relationship &r =
                        model.relationships[model.find_relationship(eu->roles[p].rel)];
                    players.push_back(role_at(r, eu->roles[p].place)->player);
                    comp_bases.emplace_back("eu_c" + std::to_string(p + 1), true);
                }
                reify_impl(kb, names, "eu", players, comp_bases, {}, /*with_id=*/true, prov);
            }
        } else if (const auto *ei = std::get_if<ExternalIdentification>(&con)) {
            std::vector<std::string> rels;
            for (const RolePos &rp : ei->roles) {
                int idx = model.find_relationship(rp.rel);
                const Relationship &r = model.relationships[idx];
                if (r.arity() != 2)
                    throw Error(ErrorCode::UnsupportedFeature,
                                prov + ": external identification over non-binary roles");
                const Role *other = nullptr;
                for (const Role &role : r.roles)
                    if (role.place != rp.place) other = &role;
                if (!other || other->player != ei->object_type)
                    throw Error(ErrorCode::InvalidArgument,
                                prov + ": " + ei->object_type +
                                    " does not play the opposite role of (" + rp.rel + ", " +
                                    rp.place + ")");
                rels.push_back(role_lift({model.ref_for(idx), other->place}));
            }
            kb.add_axiom(Axiom::id_roles(ei->object_type, rels), prov);
        }
    }

    kb.canonicalize();
    return kb;
}

} // namespace dc
