#include "dc/modelgen.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>

namespace dc {

namespace {

struct Gen {
    std::mt19937 rng;
    int pick(int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); }
    bool chance(int pct) { return pick(100) < pct; }
};

} // namespace

ConceptualModel generate_model(Family family, int n, unsigned seed, bool core_only) {
    Gen g{std::mt19937(seed * 2654435761u + static_cast<unsigned>(family) * 7919u +
                       static_cast<unsigned>(n))};
    ConceptualModel m;
    m.family = family;

    int n_ot = std::max(2, n / 4);
    int n_dt = std::max(1, std::min(3, n / 10 + 1));
    int n_rel = std::max(1, n / 4);
    int n_attr = family == Family::ORM ? 0 : std::max(1, n / 6);
    int n_vt = family == Family::ORM ? std::max(1, n / 8) : 0;
    int n_sub = n / 8;
    int n_con = std::max(1, n / 6);

    for (int i = 0; i < n_ot; ++i) m.object_types.push_back({"Ot" + std::to_string(i + 1)});
    for (int i = 0; i < n_dt; ++i) m.data_types.push_back({"Dt" + std::to_string(i + 1)});
    auto ot = [&] { return m.object_types[g.pick(n_ot)].name; };
    auto dt = [&] { return m.data_types[g.pick(n_dt)].name; };

    for (int i = 0; i < n_attr; ++i) {
        Attribute a;
        a.owner = ot();
        a.name = "at" + std::to_string(i + 1);
        a.datatype = dt();
        if (!core_only && g.chance(30)) {
            a.has_card = true;
            switch (g.pick(4)) {
            case 0: a.card_min = 0; a.card_max = 1; break;
            case 1: a.card_min = 1; a.card_max = 1; break;
            case 2: a.card_min = 1; a.card_max = std::nullopt; break;
            default: a.card_min = 0; a.card_max = 3; break;
            }
        }
        m.attributes.push_back(std::move(a));
    }

    std::vector<int> binaries, ternaries, unaries;
    for (int i = 0; i < n_rel; ++i) {
        Relationship r;
        int arity = 2;
        if (!core_only && family == Family::EER && g.chance(25)) arity = 3;
        if (!core_only && family == Family::ORM) {
            if (g.chance(15)) arity = 1;
            else if (g.chance(18)) arity = 3;
        }
        for (int p = 0; p < arity; ++p)
            r.roles.push_back({std::to_string(p + 1), ot(), std::nullopt});
        if (family == Family::ORM) {
            r.readings.push_back("… fact" + std::to_string(i + 1) + " …");
            if (arity == 2 && g.chance(40))
                r.readings.push_back("… back" + std::to_string(i + 1) + " …");
            if (arity == 3 && g.chance(50)) {
                r.readings.push_back("… f" + std::to_string(i + 1) + "b …");
                r.readings.push_back("… f" + std::to_string(i + 1) + "c …");
            }
        } else {
            if (g.chance(40)) r.name = "Rel" + std::to_string(i + 1);
            if (arity == 2) {
                if (g.chance(50)) r.roles[0].role_name = "rn" + std::to_string(i + 1) + "a";
                if (g.chance(50)) r.roles[1].role_name = "rn" + std::to_string(i + 1) + "b";
            }
        }
        int idx = static_cast<int>(m.relationships.size());
        (arity == 2 ? binaries : arity == 3 ? ternaries : unaries).push_back(idx);
        m.relationships.push_back(std::move(r));
    }

    // ORM value types, each linked through one binary bridging fact type
    std::vector<std::pair<std::string, std::string>> vt_owner; // (slug attr, owner)
    for (int i = 0; i < n_vt; ++i) {
        std::string name = "Vt" + std::to_string(i + 1);
        std::string owner = ot();
        m.value_types.push_back({name, dt()});
        Relationship bridge;
        bridge.roles.push_back({"1", owner, std::nullopt});
        bridge.roles.push_back({"2", name, std::nullopt});
        bridge.readings.push_back("… hasvt" + std::to_string(i + 1) + " …");
        m.relationships.push_back(std::move(bridge));
        vt_owner.emplace_back(slugify(name), owner);
    }

    std::set<std::pair<std::string, std::string>> sub_pairs;
    for (int i = 0; i < n_sub; ++i) {
        std::string a = ot(), b = ot();
        if (a != b && sub_pairs.emplace(a, b).second && !sub_pairs.count({b, a}))
            m.subsumptions.push_back({a, b});
    }

    if (!core_only && (family == Family::UML || family == Family::ORM) && binaries.size() >= 2 &&
        g.chance(60)) {
        int a = binaries[g.pick(static_cast<int>(binaries.size()))];
        int b = binaries[g.pick(static_cast<int>(binaries.size()))];
        if (a != b) m.rel_subsumptions.push_back({m.ref_for(a), m.ref_for(b)});
    }

    std::set<std::string> card_keys; // rel|place|player to avoid duplicate bounds
    auto card_key = [&](const RelRef &rel, const std::string &place,
                       const std::optional<std::string> &player) {
        return rel + "|" + place + "|" + player.value_or("");
    };
    for (int i = 0; i < n_con; ++i) {
        if (binaries.empty()) break;
        int which = g.pick(10);
        if (which < 4) { // cardinality
            int rel = binaries[g.pick(static_cast<int>(binaries.size()))];
            std::string place = m.relationships[rel].roles[g.pick(2)].place;
            Cardinality c;
            c.rel = m.ref_for(rel);
            c.place = place;
            switch (g.pick(4)) {
            case 0: c.min = 0; c.max = 1; break;
            case 1: c.min = 1; c.max = 1; break;
            case 2: c.min = 1; c.max = std::nullopt; break;
            default: c.min = 0; c.max = 3; break;
            }
            if (card_keys.insert(card_key(c.rel, c.place, c.player)).second)
                m.constraints.push_back(std::move(c));
        } else if (which < 6) { // mandatory
            int rel = binaries[g.pick(static_cast<int>(binaries.size()))];
            std::string place = m.relationships[rel].roles[g.pick(2)].place;
            Mandatory c{m.ref_for(rel), place, std::nullopt};
            if (card_keys.insert(card_key(c.rel, c.place, c.player)).second)
                m.constraints.push_back(std::move(c));
        } else if (which == 6) { // single identification
            if (family == Family::ORM) {
                if (!vt_owner.empty()) {
                    auto &[attr, owner] = vt_owner[g.pick(static_cast<int>(vt_owner.size()))];
                    m.constraints.push_back(SingleIdentification{owner, attr});
                }
            } else if (!m.attributes.empty()) {
                const Attribute &a = m.attributes[g.pick(static_cast<int>(m.attributes.size()))];
                m.constraints.push_back(SingleIdentification{a.owner, a.name});
            }
        } else if (core_only) {
            continue;
        } else if (family == Family::UML || family == Family::EER) {
            if (which == 7 && !m.attributes.empty()) {
                const Attribute &a = m.attributes[g.pick(static_cast<int>(m.attributes.size()))];
                m.constraints.push_back(AttributeCardinality{a.owner, a.name, 1, 2});
            } else if (family == Family::EER && which == 8 && !ternaries.empty()) {
                int rel = ternaries[g.pick(static_cast<int>(ternaries.size()))];
                m.constraints.push_back(WeakIdentification{m.ref_for(rel), "1", "2", "3"});
            } else if (family == Family::EER && which == 9) {
                // composite identifier over two attributes of one owner
                for (size_t a = 0; a < m.attributes.size(); ++a)
                    for (size_t b = a + 1; b < m.attributes.size(); ++b)
                        if (m.attributes[a].owner == m.attributes[b].owner) {
                            m.constraints.push_back(MultiAttributeIdentification{
                                m.attributes[a].owner,
                                {m.attributes[a].name, m.attributes[b].name}});
                            a = m.attributes.size();
                            break;
                        }
            }
        } else { // ORM extras
            if (which == 7 && binaries.size() >= 2) {
                int a = binaries[g.pick(static_cast<int>(binaries.size()))];
                int b = binaries[g.pick(static_cast<int>(binaries.size()))];
                if (a != b) {
                    RolePos sub{m.ref_for(a), m.relationships[a].roles[g.pick(2)].place};
                    RolePos super{m.ref_for(b), m.relationships[b].roles[g.pick(2)].place};
                    if (g.chance(50))
                        m.constraints.push_back(RoleSubsumption{sub, super});
                    else
                        m.constraints.push_back(RoleDisjointness{sub, super});
                }
            } else if (which == 8) {
                int rel = binaries[g.pick(static_cast<int>(binaries.size()))];
                int p = g.pick(2);
                const Role &role = m.relationships[rel].roles[p];
                m.constraints.push_back(
                    DisjunctiveMandatory{role.player, {{m.ref_for(rel), role.place}}});
            } else if (which == 9) {
                int rel = binaries[g.pick(static_cast<int>(binaries.size()))];
                m.constraints.push_back(InternalUniqueness{
                    m.ref_for(rel), {m.relationships[rel].roles[g.pick(2)].place}});
            }
        }
    }

    // EER: associative object type over a binary, with a dedicated concept
    if (!core_only && family == Family::EER && !binaries.empty() && g.chance(35)) {
        int rel = binaries[g.pick(static_cast<int>(binaries.size()))];
        m.object_types.push_back({"Aot1"});
        m.constraints.push_back(AssociativeObjectType{m.ref_for(rel), "Aot1"});
    }
    return m;
}

} // namespace dc
