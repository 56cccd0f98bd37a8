#include "dc/model.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace dc {

const char *family_name(Family f) {
    switch (f) {
    case Family::UML: return "UML";
    case Family::EER: return "EER";
    case Family::ORM: return "ORM";
    }
    return "?";
}

std::optional<Family> family_from_name(const std::string &name) {
    if (name == "UML") return Family::UML;
    if (name == "EER") return Family::EER;
    if (name == "ORM") return Family::ORM;
    return std::nullopt;
}

const char *constraint_kind_name(const Constraint &c) {
    struct Visitor {
        const char *operator()(const Cardinality &) { return "Cardinality"; }
        const char *operator()(const Mandatory &) { return "Mandatory"; }
        const char *operator()(const AttributeCardinality &) { return "AttributeCardinality"; }
        const char *operator()(const SingleIdentification &) { return "SingleIdentification"; }
        const char *operator()(const WeakIdentification &) { return "WeakIdentification"; }
        const char *operator()(const MultiAttributeIdentification &) {
            return "MultiAttributeIdentification";
        }
        const char *operator()(const AssociativeObjectType &) { return "AssociativeObjectType"; }
        const char *operator()(const RoleSubsumption &) { return "RoleSubsumption"; }
        const char *operator()(const RoleDisjointness &) { return "RoleDisjointness"; }
        const char *operator()(const DisjunctiveMandatory &) { return "DisjunctiveMandatory"; }
        const char *operator()(const InternalUniqueness &) { return "InternalUniqueness"; }
        const char *operator()(const ExternalUniqueness &) { return "ExternalUniqueness"; }
        const char *operator()(const ExternalIdentification &) { return "ExternalIdentification"; }
        const char *operator()(const ValueConstraint &) { return "ValueConstraint"; }
    };
    return std::visit(Visitor{}, c);
}

bool ConceptualModel::has_object_type(const std::string &name) const {
    return std::any_of(object_types.begin(), object_types.end(),
                       [&](const ObjectType &o) { return o.name == name; });
}

bool ConceptualModel::has_data_type(const std::string &name) const {
    return std::any_of(data_types.begin(), data_types.end(),
                       [&](const DataType &d) { return d.name == name; });
}

bool ConceptualModel::has_value_type(const std::string &name) const {
    return std::any_of(value_types.begin(), value_types.end(),
                       [&](const ValueType &v) { return v.name == name; });
}

int ConceptualModel::find_relationship(const RelRef &ref) const {
    if (!ref.empty() && ref[0] == '#') {
        try {
            size_t idx = std::stoul(ref.substr(1));
            if (idx < relationships.size()) return static_cast<int>(idx);
        } catch (const std::exception &) {
        }
        return -1;
    }
    for (size_t i = 0; i < relationships.size(); ++i)
        if (relationships[i].name && *relationships[i].name == ref)
            return static_cast<int>(i);
    return -1;
}

RelRef ConceptualModel::ref_for(int index) const {
    const Relationship &r = relationships.at(index);
    return r.name ? *r.name : "#" + std::to_string(index);
}

std::string slugify(const std::string &text) {
    std::string out;
    for (size_t i = 0; i < text.size();) {
        unsigned char c = text[i];
        if (text.compare(i, 3, "…") == 0) { // ellipsis placeholder
            i += 3;
            continue;
        }
        if (c == '.') {
            ++i;
            continue;
        }
        if (std::isalnum(c) || c == '_' || c == '\'') {
            out += static_cast<char>(std::tolower(c));
        } else if (std::isspace(c) || c == '-') {
            if (!out.empty() && out.back() != '_') out += '_';
        }
        ++i;
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    size_t start = 0;
    while (start < out.size() && out[start] == '_') ++start;
    return out.substr(start);
}

// ---- validation ---------------------------------------------------------

namespace {

struct Validator {
    const ConceptualModel &m;
    std::vector<Violation> out;

    void fail(std::string path, std::string rule, std::string detail = {}) {
        out.push_back({std::move(path), std::move(rule), std::move(detail)});
    }

    bool player_ok(const std::string &name) const {
        if (m.has_object_type(name)) return true;
        return m.family == Family::ORM && m.has_value_type(name);
    }

    void check_declarations() {
        std::set<std::string> seen;
        for (size_t i = 0; i < m.object_types.size(); ++i) {
            const auto &o = m.object_types[i];
            std::string path = "objectTypes[" + std::to_string(i) + "]";
            if (o.name.empty()) fail(path, "empty-name");
            if (!seen.insert(o.name).second) fail(path, "duplicate-object-type", o.name);
        }
        std::set<std::string> dts;
        for (size_t i = 0; i < m.data_types.size(); ++i) {
            std::string path = "dataTypes[" + std::to_string(i) + "]";
            if (m.data_types[i].name.empty()) fail(path, "empty-name");
            if (!dts.insert(m.data_types[i].name).second)
                fail(path, "duplicate-data-type", m.data_types[i].name);
        }
        std::set<std::string> vts;
        for (size_t i = 0; i < m.value_types.size(); ++i) {
            const auto &v = m.value_types[i];
            std::string path = "valueTypes[" + std::to_string(i) + "]";
            if (m.family != Family::ORM) fail(path, "value-type-outside-orm", v.name);
            if (v.name.empty()) fail(path, "empty-name");
            if (!vts.insert(v.name).second) fail(path, "duplicate-value-type", v.name);
            if (seen.count(v.name)) fail(path, "value-type-shadows-object-type", v.name);
            if (!m.has_data_type(v.datatype))
                fail(path, "unresolved-datatype", v.datatype);
        }
    }

    void check_relationships() {
        std::set<std::string> names;
        for (size_t i = 0; i < m.relationships.size(); ++i) {
            const Relationship &r = m.relationships[i];
            std::string path = "relationships[" + std::to_string(i) + "]";
            if (r.name && !names.insert(*r.name).second)
                fail(path, "duplicate-relationship-name", *r.name);
            int arity = r.arity();
            if (arity < 1) fail(path, "empty-relationship");
            if (arity == 1 && m.family != Family::ORM)
                fail(path, "unary-outside-orm");
            if (arity == 3 && m.family == Family::UML)
                fail(path, "arity-3-not-in-UML-profile-input");
            if (arity > 3)
                fail(path, "arity-above-3",
                     "relationships of arity > 3 must be reified before ingestion");
            std::set<std::string> places;
            for (size_t j = 0; j < r.roles.size(); ++j) {
                const Role &role = r.roles[j];
                std::string rpath = path + "/roles[" + std::to_string(j) + "]";
                if (!places.insert(role.place).second)
                    fail(rpath, "duplicate-place-label", role.place);
                if (!player_ok(role.player))
                    fail(rpath, "unresolved-player", role.player);
            }
            if (m.family == Family::ORM && !r.name && r.readings.empty())
                fail(path, "missing-fact-type-reading");
        }
    }

    void check_attributes() {
        std::set<std::string> seen;
        for (size_t i = 0; i < m.attributes.size(); ++i) {
            const Attribute &a = m.attributes[i];
            std::string path = "attributes[" + std::to_string(i) + "]";
            if (!m.has_object_type(a.owner)) fail(path, "unresolved-attribute-owner", a.owner);
            if (!m.has_data_type(a.datatype)) fail(path, "unresolved-datatype", a.datatype);
            if (!seen.insert(a.owner + "." + a.name).second)
                fail(path, "duplicate-attribute", a.owner + "." + a.name);
            if (a.has_card && a.card_max && a.card_min && *a.card_min > *a.card_max)
                fail(path, "cardinality-min-above-max");
        }
    }

    void check_subsumptions() {
        for (size_t i = 0; i < m.subsumptions.size(); ++i) {
            const auto &s = m.subsumptions[i];
            std::string path = "subsumptions[" + std::to_string(i) + "]";
            if (!m.has_object_type(s.sub)) fail(path, "unresolved-subsumption", s.sub);
            if (!m.has_object_type(s.super)) fail(path, "unresolved-subsumption", s.super);
        }
        for (size_t i = 0; i < m.rel_subsumptions.size(); ++i) {
            const auto &s = m.rel_subsumptions[i];
            std::string path = "relSubsumptions[" + std::to_string(i) + "]";
            int sub = m.find_relationship(s.sub);
            int super = m.find_relationship(s.super);
            if (sub < 0) fail(path, "unresolved-relationship-ref", s.sub);
            if (super < 0) fail(path, "unresolved-relationship-ref", s.super);
            if (sub >= 0 && super >= 0 &&
                m.relationships[sub].arity() != m.relationships[super].arity())
                fail(path, "rel-subsumption-arity-mismatch");
        }
    }

    // Returns the relationship index, or -1 after reporting.
    int resolve_rel(const RelRef &ref, const std::string &path) {
        int idx = m.find_relationship(ref);
        if (idx < 0) fail(path, "unresolved-relationship-ref", ref);
        return idx;
    }

    bool place_ok(int rel_idx, const std::string &place) const {
        if (rel_idx < 0) return true; // already reported
        const auto &roles = m.relationships[rel_idx].roles;
        return std::any_of(roles.begin(), roles.end(),
                           [&](const Role &r) { return r.place == place; });
    }

    void check_role_pos(const RolePos &rp, const std::string &path) {
        int idx = resolve_rel(rp.rel, path);
        if (!place_ok(idx, rp.place)) fail(path, "unresolved-place", rp.place);
    }

    void family_gate(const std::string &path, const Constraint &c) {
        struct Gate {
            bool uml, eer, orm;
        };
        auto gate = std::visit(
            [](auto &&v) -> Gate {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, Cardinality> || std::is_same_v<T, Mandatory> ||
                              std::is_same_v<T, SingleIdentification>)
                    return {true, true, true};
                else if constexpr (std::is_same_v<T, AttributeCardinality>)
                    return {true, true, false};
                else if constexpr (std::is_same_v<T, WeakIdentification> ||
                                   std::is_same_v<T, MultiAttributeIdentification>)
                    return {false, true, false};
                else if constexpr (std::is_same_v<T, AssociativeObjectType>)
                    return {false, true, true};
                else
                    return {false, false, true};
            },
            c);
        bool ok = (m.family == Family::UML && gate.uml) ||
                  (m.family == Family::EER && gate.eer) ||
                  (m.family == Family::ORM && gate.orm);
        if (!ok)
            fail(path, "constraint-not-in-family",
                 std::string(constraint_kind_name(c)) + " not available in " +
                     family_name(m.family));
    }

    void check_constraints() {
        // (relationship index, place, constrained player) -> count
        std::map<std::string, int> card_counts;
        for (size_t i = 0; i < m.constraints.size(); ++i) {
            const Constraint &c = m.constraints[i];
            std::string path = "constraints[" + std::to_string(i) + "]";
            family_gate(path, c);
            std::visit(
                [&](auto &&v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, Cardinality>) {
                        int idx = resolve_rel(v.rel, path);
                        if (!place_ok(idx, v.place)) fail(path, "unresolved-place", v.place);
                        if (v.max && v.min > *v.max) fail(path, "cardinality-min-above-max");
                        if (v.player && !m.has_object_type(*v.player))
                            fail(path, "unresolved-player", *v.player);
                        std::string key = std::to_string(idx) + "|" + v.place + "|" +
                                          v.player.value_or("");
                        if (++card_counts[key] > 1)
                            fail(path, "duplicate-cardinality-constraint",
                                 "only one cardinality constraint per relationship place");
                    } else if constexpr (std::is_same_v<T, Mandatory>) {
                        int idx = resolve_rel(v.rel, path);
                        if (!place_ok(idx, v.place)) fail(path, "unresolved-place", v.place);
                        if (v.player && !m.has_object_type(*v.player))
                            fail(path, "unresolved-player", *v.player);
                    } else if constexpr (std::is_same_v<T, AttributeCardinality>) {
                        bool found = std::any_of(
                            m.attributes.begin(), m.attributes.end(), [&](const Attribute &a) {
                                return a.owner == v.owner && a.name == v.attribute;
                            });
                        if (!found) fail(path, "unresolved-attribute", v.owner + "." + v.attribute);
                        if (v.max && v.min > *v.max) fail(path, "cardinality-min-above-max");
                    } else if constexpr (std::is_same_v<T, SingleIdentification>) {
                        if (!m.has_object_type(v.object_type))
                            fail(path, "unresolved-object-type", v.object_type);
                        bool found = std::any_of(
                            m.attributes.begin(), m.attributes.end(), [&](const Attribute &a) {
                                return a.owner == v.object_type && a.name == v.attribute;
                            });
                        // ORM: the identifier may be a value type attached to
                        // the object type (it becomes an attribute on
                        // normalization)
                        if (!found && m.family == Family::ORM)
                            found = std::any_of(
                                m.value_types.begin(), m.value_types.end(),
                                [&](const ValueType &vt) {
                                    return slugify(vt.name) == v.attribute;
                                });
                        if (!found)
                            fail(path, "unresolved-attribute", v.object_type + "." + v.attribute);
                    } else if constexpr (std::is_same_v<T, WeakIdentification>) {
                        int idx = resolve_rel(v.rel, path);
                        if (idx >= 0 && m.relationships[idx].arity() != 3)
                            fail(path, "weak-identification-needs-ternary");
                        for (const std::string *p : {&v.i1, &v.i2, &v.i3})
                            if (!place_ok(idx, *p)) fail(path, "unresolved-place", *p);
                        if (v.i1 == v.i2 || v.i1 == v.i3 || v.i2 == v.i3)
                            fail(path, "weak-identification-places-not-distinct");
                    } else if constexpr (std::is_same_v<T, MultiAttributeIdentification>) {
                        if (!m.has_object_type(v.object_type))
                            fail(path, "unresolved-object-type", v.object_type);
                        if (v.attributes.size() < 2)
                            fail(path, "multi-attribute-id-needs-two-attributes");
                        for (const auto &attr : v.attributes) {
                            bool found = std::any_of(
                                m.attributes.begin(), m.attributes.end(), [&](const Attribute &a) {
                                    return a.owner == v.object_type && a.name == attr;
                                });
                            if (!found)
                                fail(path, "unresolved-attribute", v.object_type + "." + attr);
                        }
                    } else if constexpr (std::is_same_v<T, AssociativeObjectType>) {
                        resolve_rel(v.rel, path);
                        if (!m.has_object_type(v.object_type))
                            fail(path, "unresolved-object-type", v.object_type);
                    } else if constexpr (std::is_same_v<T, RoleSubsumption>) {
                        check_role_pos(v.sub, path);
                        check_role_pos(v.super, path);
                    } else if constexpr (std::is_same_v<T, RoleDisjointness>) {
                        check_role_pos(v.first, path);
                        check_role_pos(v.second, path);
                    } else if constexpr (std::is_same_v<T, DisjunctiveMandatory>) {
                        if (!m.has_object_type(v.object_type))
                            fail(path, "unresolved-object-type", v.object_type);
                        if (v.roles.empty()) fail(path, "disjunctive-mandatory-empty");
                        for (const auto &rp : v.roles) check_role_pos(rp, path);
                    } else if constexpr (std::is_same_v<T, InternalUniqueness>) {
                        int idx = resolve_rel(v.rel, path);
                        if (v.places.empty()) fail(path, "internal-uniqueness-empty");
                        for (const auto &p : v.places)
                            if (!place_ok(idx, p)) fail(path, "unresolved-place", p);
                    } else if constexpr (std::is_same_v<T, ExternalUniqueness>) {
                        if (v.roles.size() < 2) fail(path, "external-uniqueness-needs-two-roles");
                        for (const auto &rp : v.roles) check_role_pos(rp, path);
                    } else if constexpr (std::is_same_v<T, ExternalIdentification>) {
                        if (!m.has_object_type(v.object_type))
                            fail(path, "unresolved-object-type", v.object_type);
                        if (v.roles.empty()) fail(path, "external-identification-empty");
                        for (const auto &rp : v.roles) check_role_pos(rp, path);
                    } else if constexpr (std::is_same_v<T, ValueConstraint>) {
                        if (v.values.empty()) fail(path, "value-constraint-empty");
                        auto dot = v.target.find('.');
                        if (dot == std::string::npos) {
                            if (!m.has_data_type(v.target) && !m.has_value_type(v.target))
                                fail(path, "unresolved-datatype", v.target);
                        } else {
                            std::string owner = v.target.substr(0, dot);
                            std::string attr = v.target.substr(dot + 1);
                            bool found = std::any_of(
                                m.attributes.begin(), m.attributes.end(), [&](const Attribute &a) {
                                    return a.owner == owner && a.name == attr;
                                });
                            if (!found) fail(path, "unresolved-attribute", v.target);
                        }
                    }
                },
                c);
        }
    }
};

} // namespace

std::vector<Violation> validate_model(const ConceptualModel &model) {
    Validator v{model, {}};
    v.check_declarations();
    v.check_relationships();
    v.check_attributes();
    v.check_subsumptions();
    v.check_constraints();
    return v.out;
}

// ---- ORM value-type normalization --------------------------------------

ConceptualModel normalize_orm_value_types(const ConceptualModel &model) {
    if (model.family != Family::ORM)
        throw Error(ErrorCode::InvalidArgument,
                    "value-type normalization applies to ORM models only");
    if (model.value_types.empty()) return model;

    ConceptualModel out = model;
    std::set<size_t> bridges; // relationship indices to drop

    for (const ValueType &vt : model.value_types) {
        bool attached = false;
        for (size_t i = 0; i < model.relationships.size(); ++i) {
            const Relationship &r = model.relationships[i];
            bool involves = std::any_of(r.roles.begin(), r.roles.end(),
                                        [&](const Role &role) { return role.player == vt.name; });
            if (!involves) continue;
            if (r.arity() != 2)
                throw Error(ErrorCode::UnsupportedFeature,
                            "value type '" + vt.name + "' participates in a non-binary fact type");
            const Role *owner_role = nullptr;
            for (const Role &role : r.roles)
                if (role.player != vt.name) owner_role = &role;
            if (!owner_role || !model.has_object_type(owner_role->player))
                throw Error(ErrorCode::UnsupportedFeature,
                            "value type '" + vt.name +
                                "' is not connected to an object type (ambiguous attachment)");
            Attribute a;
            a.owner = owner_role->player;
            a.name = slugify(vt.name);
            a.datatype = vt.datatype;
            out.attributes.push_back(std::move(a));
            bridges.insert(i);
            attached = true;
        }
        if (!attached)
            throw Error(ErrorCode::UnsupportedFeature,
                        "value type '" + vt.name + "' is not connected to any object type");
    }

    // Drop the bridging fact types and any constraints that mention them;
    // value-type attachment semantics live entirely in the new attributes.
    std::vector<Relationship> kept;
    std::map<int, int> remap; // old index -> new index
    for (size_t i = 0; i < out.relationships.size(); ++i) {
        if (bridges.count(i)) continue;
        remap[static_cast<int>(i)] = static_cast<int>(kept.size());
        kept.push_back(out.relationships[i]);
    }
    auto rewrite_ref = [&](RelRef &ref) -> bool {
        int idx = model.find_relationship(ref);
        if (idx < 0) return true;
        if (bridges.count(idx)) return false;
        if (!ref.empty() && ref[0] == '#') ref = "#" + std::to_string(remap.at(idx));
        return true;
    };
    std::vector<Constraint> kept_constraints;
    for (Constraint c : out.constraints) {
        bool keep = std::visit(
            [&](auto &&v) -> bool {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, Cardinality> || std::is_same_v<T, Mandatory> ||
                              std::is_same_v<T, WeakIdentification> ||
                              std::is_same_v<T, AssociativeObjectType> ||
                              std::is_same_v<T, InternalUniqueness>)
                    return rewrite_ref(v.rel);
                else if constexpr (std::is_same_v<T, RoleSubsumption>)
                    return rewrite_ref(v.sub.rel) && rewrite_ref(v.super.rel);
                else if constexpr (std::is_same_v<T, RoleDisjointness>)
                    return rewrite_ref(v.first.rel) && rewrite_ref(v.second.rel);
                else if constexpr (std::is_same_v<T, DisjunctiveMandatory> ||
                                   std::is_same_v<T, ExternalIdentification>) {
                    for (auto &rp : v.roles)
                        if (!rewrite_ref(rp.rel)) return false;
                    return true;
                } else if constexpr (std::is_same_v<T, ExternalUniqueness>) {
                    for (auto &rp : v.roles)
                        if (!rewrite_ref(rp.rel)) return false;
                    return true;
                } else {
                    return true;
                }
            },
            c);
        if (keep) kept_constraints.push_back(std::move(c));
    }
    std::vector<RelSubsumption> kept_rel_subs;
    for (RelSubsumption s : out.rel_subsumptions)
        if (rewrite_ref(s.sub) && rewrite_ref(s.super)) kept_rel_subs.push_back(std::move(s));

    out.relationships = std::move(kept);
    out.constraints = std::move(kept_constraints);
    out.rel_subsumptions = std::move(kept_rel_subs);
    out.value_types.clear();
    return out;
}

} // namespace dc
