#include "dc/render.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "dc/encode.hpp"
#include "dc/io.hpp"

namespace dc {

namespace {

std::string spaced(const std::string &name) {
    std::string out = name;
    std::replace(out.begin(), out.end(), '_', ' ');
    return out;
}

std::string verbalize(const std::string &name) { return "… " + spaced(name) + " …"; }

[[noreturn]] void shape_fail(const Axiom &ax, const std::string &why) {
    throw Error(ErrorCode::UnsupportedFeature,
                "axiom '" + serialize_axiom(ax) + "' is not encoder-shaped: " + why);
}

} // namespace

std::pair<std::string, std::string> generate_readings(const std::string &relation_name,
                                                      const std::string &inverse_name) {
    if (relation_name.empty())
        throw Error(ErrorCode::InvalidArgument, "relation name must be non-empty");
    std::string fwd = verbalize(relation_name);
    std::string bwd;
    if (!inverse_name.empty()) {
        bwd = verbalize(inverse_name);
    } else if (relation_name.rfind("has_", 0) == 0 && relation_name.size() > 4) {
        bwd = verbalize(relation_name.substr(4) + "_of");
    } else {
        bwd = "… is " + spaced(relation_name) + " of …";
    }
    return {fwd, bwd};
}

ConceptualModel render_model(const KnowledgeBase &kb, Family family) {
    MembershipReport rep = check_profile(kb, Profile::DCs);
    if (!rep.member())
        throw Error(ErrorCode::UnsupportedFeature,
                    "kb is outside the dcs grammar: " + rep.violations.front().first + " (" +
                        rep.violations.front().second + ")");

    ConceptualModel m;
    m.family = family;
    for (const auto &[name, gen] : kb.vocabulary.concepts) m.object_types.push_back({name});
    for (const auto &[name, gen] : kb.vocabulary.datatypes) m.data_types.push_back({name});

    // typing axioms: >= 1 P <= A gives the domain, >= 1 inv ( P ) <= A the range
    std::map<std::string, std::string> domain, range;
    std::vector<bool> consumed(kb.axioms.size(), false);
    for (size_t i = 0; i < kb.axioms.size(); ++i) {
        const Axiom &ax = kb.axioms[i];
        if (ax.kind != Axiom::Kind::ConceptInc) continue;
        const ConceptExpr &l = ax.lhs_c;
        if (l.kind != ConceptExpr::Kind::Min || l.count != 1) continue;
        if (ax.rhs_c.kind != ConceptExpr::Kind::Atomic) continue;
        if (l.rel->kind == RelationExpr::Kind::Atomic) {
            if (!domain.emplace(l.rel->name, ax.rhs_c.name).second)
                shape_fail(ax, "duplicate domain typing for " + l.rel->name);
            consumed[i] = true;
        } else if (l.rel->kind == RelationExpr::Kind::Inverse) {
            if (!range.emplace(l.rel->name, ax.rhs_c.name).second)
                shape_fail(ax, "duplicate range typing for " + l.rel->name);
            consumed[i] = true;
        }
    }

    auto generated = [&](const std::string &n) { return kb.vocabulary.is_generated(n); };

    std::map<std::string, std::pair<int, std::string>> role_of; // lifted rel -> (index, place)
    std::set<std::string> paired;
    for (const auto &[p, q] : kb.vocabulary.inverse_partners) {
        paired.insert(p);
        paired.insert(q);
        std::string dom, rng;
        if (domain.count(p)) dom = domain.at(p);
        else if (range.count(q)) dom = range.at(q);
        if (range.count(p)) rng = range.at(p);
        else if (domain.count(q)) rng = domain.at(q);
        if (dom.empty() || rng.empty())
            throw Error(ErrorCode::UnsupportedFeature,
                        "relation '" + p + "' lacks domain/range typing axioms");

        // keep a user-named relation in the forward position for ORM readings
        std::string fwd = p, bwd = q;
        std::string fdom = dom, frng = rng;
        if (family == Family::ORM && generated(p) && !generated(q)) {
            std::swap(fwd, bwd);
            std::swap(fdom, frng);
        }

        Relationship r;
        r.roles.push_back({"1", fdom, std::nullopt});
        r.roles.push_back({"2", frng, std::nullopt});
        if (family == Family::ORM) {
            if (!generated(fwd)) {
                r.readings.push_back(verbalize(fwd));
                if (!generated(bwd)) r.readings.push_back(verbalize(bwd));
            } else {
                r.name = fwd; // no user label survives; keep the symbol as the name
            }
        } else {
            // the forward relation is the reading from place 1, so it labels
            // the association end at place 2, and vice versa
            if (!generated(bwd)) r.roles[0].role_name = bwd;
            if (!generated(fwd)) r.roles[1].role_name = fwd;
            if (family == Family::EER) {
                std::string name;
                if (!generated(fwd)) name = fwd;
                if (!generated(bwd) && (name.empty() || bwd < name)) name = bwd;
                if (!name.empty()) r.name = name;
            }
        }
        int idx = static_cast<int>(m.relationships.size());
        m.relationships.push_back(std::move(r));
        role_of[fwd] = {idx, "1"};
        role_of[bwd] = {idx, "2"};
    }
    for (const auto &[name, decl] : kb.vocabulary.relations)
        if (!paired.count(name))
            throw Error(ErrorCode::UnsupportedFeature,
                        "relation '" + name + "' has no inverse partner; kb is not encoder-shaped");

    auto partner = [&](const std::string &n) { return kb.vocabulary.inverse_partner_of(n); };

    for (size_t i = 0; i < kb.axioms.size(); ++i) {
        if (consumed[i]) continue;
        const Axiom &ax = kb.axioms[i];
        if (ax.kind == Axiom::Kind::IdAttr) {
            m.constraints.push_back(SingleIdentification{ax.concept_name, ax.attribute});
            continue;
        }
        if (ax.kind != Axiom::Kind::ConceptInc || ax.lhs_c.kind != ConceptExpr::Kind::Atomic)
            shape_fail(ax, "expected an atomic concept on the left");
        const std::string &owner = ax.lhs_c.name;

        std::vector<const ConceptExpr *> stack{&ax.rhs_c}, lits;
        while (!stack.empty()) {
            const ConceptExpr *c = stack.back();
            stack.pop_back();
            if (c->kind == ConceptExpr::Kind::And) {
                stack.push_back(c->rhs.get());
                stack.push_back(c->lhs.get());
            } else {
                lits.push_back(c);
            }
        }
        std::reverse(lits.begin(), lits.end());

        std::map<std::string, std::string> attr_dt;       // attribute -> datatype (SomeAttr)
        std::set<std::string> attr_fun;                   // attributes with <=1 a
        std::map<std::string, std::pair<std::optional<unsigned>, std::optional<unsigned>>>
            cards;                                        // relation -> (min, max)
        for (const ConceptExpr *c : lits) {
            switch (c->kind) {
            case ConceptExpr::Kind::Atomic:
                m.subsumptions.push_back({owner, c->name});
                break;
            case ConceptExpr::Kind::SomeAttr:
                if (!attr_dt.emplace(c->name, c->datatype).second)
                    shape_fail(ax, "attribute '" + c->name + "' constrained twice");
                break;
            case ConceptExpr::Kind::AtMostOneAttr:
                attr_fun.insert(c->name);
                break;
            case ConceptExpr::Kind::Min:
            case ConceptExpr::Kind::Max: {
                std::string rel;
                if (c->rel->kind == RelationExpr::Kind::Atomic) {
                    rel = c->rel->name;
                } else if (c->rel->kind == RelationExpr::Kind::Inverse) {
                    auto pq = partner(c->rel->name);
                    if (!pq) shape_fail(ax, "inverse of a relation without a partner");
                    rel = *pq;
                } else {
                    shape_fail(ax, "number restriction over a non-atomic relation");
                }
                auto &slot = cards[rel];
                if (c->kind == ConceptExpr::Kind::Min) {
                    if (slot.first) shape_fail(ax, "two lower bounds on '" + rel + "'");
                    slot.first = c->count;
                } else {
                    if (slot.second) shape_fail(ax, "two upper bounds on '" + rel + "'");
                    slot.second = c->count;
                }
                break;
            }
            default:
                shape_fail(ax, "constructor has no conceptual-model counterpart here");
            }
        }
        for (const auto &[a, dt] : attr_dt) {
            if (!attr_fun.count(a))
                shape_fail(ax, "attribute '" + a + "' lacks the functionality conjunct");
            attr_fun.erase(a);
            Attribute attr;
            attr.owner = owner;
            attr.name = a;
            attr.datatype = dt;
            m.attributes.push_back(std::move(attr));
        }
        if (!attr_fun.empty())
            shape_fail(ax, "functionality conjunct without its existence conjunct");
        for (const auto &[rel, mm] : cards) {
            auto it = role_of.find(rel);
            if (it == role_of.end()) shape_fail(ax, "unknown relation '" + rel + "'");
            auto [idx, place] = it->second;
            const Role *role = nullptr;
            for (const Role &rr : m.relationships[idx].roles)
                if (rr.place == place) role = &rr;
            Cardinality card;
            card.rel = m.ref_for(idx);
            card.place = place;
            card.min = mm.first.value_or(0);
            card.max = mm.second;
            if (role->player != owner) card.player = owner;
            m.constraints.push_back(std::move(card));
        }
    }

    if (family == Family::ORM && !m.attributes.empty()) {
        // attributes render back to value types bridged by a fact type
        auto taken = [&](const std::string &n) {
            return m.has_object_type(n) || m.has_data_type(n) || m.has_value_type(n);
        };
        for (const Attribute &a : m.attributes) {
            std::string vt = a.name;
            if (!vt.empty())
                vt[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(vt[0])));
            while (taken(vt)) vt += "_vt";
            m.value_types.push_back({vt, a.datatype});
            Relationship bridge;
            bridge.roles.push_back({"1", a.owner, std::nullopt});
            bridge.roles.push_back({"2", vt, std::nullopt});
            bridge.readings.push_back("… has " + spaced(a.name) + " …");
            m.relationships.push_back(std::move(bridge));
        }
        m.attributes.clear();
    }
    return m;
}

std::string render_diagram_source(const ConceptualModel &m) {
    std::ostringstream os;
    os << "family " << family_name(m.family) << "\n";
    for (const auto &o : m.object_types) os << "object type " << o.name << "\n";
    for (const auto &d : m.data_types) os << "data type " << d.name << "\n";
    for (const auto &v : m.value_types)
        os << "value type " << v.name << " : " << v.datatype << "\n";
    for (size_t i = 0; i < m.relationships.size(); ++i) {
        const Relationship &r = m.relationships[i];
        os << (m.family == Family::ORM ? "fact type" : "relationship");
        if (r.name) os << " " << *r.name;
        os << " (";
        for (size_t j = 0; j < r.roles.size(); ++j) {
            if (j) os << ", ";
            os << r.roles[j].place << ":" << r.roles[j].player;
            if (r.roles[j].role_name) os << "/" << *r.roles[j].role_name;
        }
        os << ")";
        for (const std::string &reading : r.readings) os << " \"" << reading << "\"";
        os << "\n";
    }
    for (const auto &a : m.attributes) {
        os << "attribute " << a.owner << "." << a.name << " : " << a.datatype;
        if (a.has_card) {
            os << " [" << a.card_min.value_or(0) << "..";
            if (a.card_max) os << *a.card_max;
            else os << "*";
            os << "]";
        }
        os << "\n";
    }
    for (const auto &s : m.subsumptions) os << "subsumption " << s.sub << " <= " << s.super << "\n";
    for (const auto &s : m.rel_subsumptions)
        os << "rel subsumption " << s.sub << " <= " << s.super << "\n";
    for (const auto &c : m.constraints) os << "constraint " << constraint_kind_name(c) << "\n";
    os << "%%json\n" << model_to_json_text(m);
    return os.str();
}

} // namespace dc
