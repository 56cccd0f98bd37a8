#include "dc/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dc {

using nlohmann::json;

namespace {

json role_pos_to_json(const RolePos &rp) {
    return json{{"place", rp.place}, {"rel", rp.rel}};
}

json constraint_to_json(const Constraint &c) {
    json j;
    j["kind"] = constraint_kind_name(c);
    std::visit(
        [&](auto &&v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Cardinality>) {
                j["rel"] = v.rel;
                j["place"] = v.place;
                j["min"] = v.min;
                if (v.max) j["max"] = *v.max;
                if (v.player) j["player"] = *v.player;
            } else if constexpr (std::is_same_v<T, Mandatory>) {
                j["rel"] = v.rel;
                j["place"] = v.place;
                if (v.player) j["player"] = *v.player;
            } else if constexpr (std::is_same_v<T, AttributeCardinality>) {
                j["owner"] = v.owner;
                j["attribute"] = v.attribute;
                j["min"] = v.min;
                if (v.max) j["max"] = *v.max;
            } else if constexpr (std::is_same_v<T, SingleIdentification>) {
                j["objectType"] = v.object_type;
                j["attribute"] = v.attribute;
            } else if constexpr (std::is_same_v<T, WeakIdentification>) {
                j["rel"] = v.rel;
                j["i1"] = v.i1;
                j["i2"] = v.i2;
                j["i3"] = v.i3;
            } else if constexpr (std::is_same_v<T, MultiAttributeIdentification>) {
                j["objectType"] = v.object_type;
                j["attributes"] = v.attributes;
            } else if constexpr (std::is_same_v<T, AssociativeObjectType>) {
                j["rel"] = v.rel;
                j["objectType"] = v.object_type;
            } else if constexpr (std::is_same_v<T, RoleSubsumption>) {
                j["sub"] = role_pos_to_json(v.sub);
                j["super"] = role_pos_to_json(v.super);
            } else if constexpr (std::is_same_v<T, RoleDisjointness>) {
                j["first"] = role_pos_to_json(v.first);
                j["second"] = role_pos_to_json(v.second);
            } else if constexpr (std::is_same_v<T, DisjunctiveMandatory>) {
                j["objectType"] = v.object_type;
                json roles = json::array();
                for (const RolePos &rp : v.roles) roles.push_back(role_pos_to_json(rp));
                j["roles"] = roles;
            } else if constexpr (std::is_same_v<T, InternalUniqueness>) {
                j["rel"] = v.rel;
                j["places"] = v.places;
            } else if constexpr (std::is_same_v<T, ExternalUniqueness>) {
                json roles = json::array();
                for (const RolePos &rp : v.roles) roles.push_back(role_pos_to_json(rp));
                j["roles"] = roles;
            } else if constexpr (std::is_same_v<T, ExternalIdentification>) {
                j["objectType"] = v.object_type;
                json roles = json::array();
                for (const RolePos &rp : v.roles) roles.push_back(role_pos_to_json(rp));
                j["roles"] = roles;
            } else if constexpr (std::is_same_v<T, ValueConstraint>) {
                j["target"] = v.target;
                j["values"] = v.values;
            }
        },
        c);
    return j;
}

// ---- reading side -------------------------------------------------------

[[noreturn]] void schema_fail(const std::string &path, const std::string &msg) {
    throw Error(ErrorCode::SchemaError, path + ": " + msg);
}

const json &field(const json &obj, const std::string &path, const char *key) {
    auto it = obj.find(key);
    if (it == obj.end()) schema_fail(path, std::string("missing field '") + key + "'");
    return *it;
}

std::string get_string(const json &obj, const std::string &path, const char *key) {
    const json &v = field(obj, path, key);
    if (!v.is_string()) schema_fail(path + "/" + key, "expected a string");
    return v.get<std::string>();
}

unsigned get_uint(const json &obj, const std::string &path, const char *key) {
    const json &v = field(obj, path, key);
    if (!v.is_number_unsigned()) schema_fail(path + "/" + key, "expected a non-negative integer");
    return v.get<unsigned>();
}

std::optional<unsigned> opt_uint(const json &obj, const std::string &path, const char *key) {
    auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    if (it->is_string() && it->get<std::string>() == "*") return std::nullopt;
    if (!it->is_number_unsigned())
        schema_fail(path + "/" + key, "expected a non-negative integer or \"*\"");
    return it->get<unsigned>();
}

std::optional<std::string> opt_string(const json &obj, const std::string &path, const char *key) {
    auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    if (!it->is_string()) schema_fail(path + "/" + key, "expected a string");
    return it->get<std::string>();
}

void check_keys(const json &obj, const std::string &path,
                std::initializer_list<const char *> allowed) {
    if (!obj.is_object()) schema_fail(path, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char *k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) schema_fail(path, "unknown field '" + it.key() + "'");
    }
}

std::vector<std::string> string_array(const json &v, const std::string &path) {
    if (!v.is_array()) schema_fail(path, "expected an array of strings");
    std::vector<std::string> out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_string()) schema_fail(path + "[" + std::to_string(i) + "]", "expected a string");
        out.push_back(v[i].get<std::string>());
    }
    return out;
}

RolePos role_pos_from_json(const json &v, const std::string &path) {
    check_keys(v, path, {"rel", "place"});
    return {get_string(v, path, "rel"), get_string(v, path, "place")};
}

std::vector<RolePos> role_pos_array(const json &v, const std::string &path) {
    if (!v.is_array()) schema_fail(path, "expected an array of roles");
    std::vector<RolePos> out;
    for (size_t i = 0; i < v.size(); ++i)
        out.push_back(role_pos_from_json(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

Constraint constraint_from_json(const json &v, const std::string &path) {
    std::string kind = get_string(v, path, "kind");
    if (kind == "Cardinality") {
        check_keys(v, path, {"kind", "rel", "place", "min", "max", "player"});
        return Cardinality{get_string(v, path, "rel"), get_string(v, path, "place"),
                           get_uint(v, path, "min"), opt_uint(v, path, "max"),
                           opt_string(v, path, "player")};
    }
    if (kind == "Mandatory") {
        check_keys(v, path, {"kind", "rel", "place", "player"});
        return Mandatory{get_string(v, path, "rel"), get_string(v, path, "place"),
                         opt_string(v, path, "player")};
    }
    if (kind == "AttributeCardinality") {
        check_keys(v, path, {"kind", "owner", "attribute", "min", "max"});
        return AttributeCardinality{get_string(v, path, "owner"),
                                    get_string(v, path, "attribute"), get_uint(v, path, "min"),
                                    opt_uint(v, path, "max")};
    }
    if (kind == "SingleIdentification") {
        check_keys(v, path, {"kind", "objectType", "attribute"});
        return SingleIdentification{get_string(v, path, "objectType"),
                                    get_string(v, path, "attribute")};
    }
    if (kind == "WeakIdentification") {
        check_keys(v, path, {"kind", "rel", "i1", "i2", "i3"});
        return WeakIdentification{get_string(v, path, "rel"), get_string(v, path, "i1"),
                                  get_string(v, path, "i2"), get_string(v, path, "i3")};
    }
    if (kind == "MultiAttributeIdentification") {
        check_keys(v, path, {"kind", "objectType", "attributes"});
        return MultiAttributeIdentification{
            get_string(v, path, "objectType"),
            string_array(field(v, path, "attributes"), path + "/attributes")};
    }
    if (kind == "AssociativeObjectType") {
        check_keys(v, path, {"kind", "rel", "objectType"});
        return AssociativeObjectType{get_string(v, path, "rel"),
                                     get_string(v, path, "objectType")};
    }
    if (kind == "RoleSubsumption") {
        check_keys(v, path, {"kind", "sub", "super"});
        return RoleSubsumption{role_pos_from_json(field(v, path, "sub"), path + "/sub"),
                               role_pos_from_json(field(v, path, "super"), path + "/super")};
    }
    if (kind == "RoleDisjointness") {
        check_keys(v, path, {"kind", "first", "second"});
        return RoleDisjointness{role_pos_from_json(field(v, path, "first"), path + "/first"),
                                role_pos_from_json(field(v, path, "second"), path + "/second")};
    }
    if (kind == "DisjunctiveMandatory") {
        check_keys(v, path, {"kind", "objectType", "roles"});
        return DisjunctiveMandatory{get_string(v, path, "objectType"),
                                    role_pos_array(field(v, path, "roles"), path + "/roles")};
    }
    if (kind == "InternalUniqueness") {
        check_keys(v, path, {"kind", "rel", "places"});
        return InternalUniqueness{get_string(v, path, "rel"),
                                  string_array(field(v, path, "places"), path + "/places")};
    }
    if (kind == "ExternalUniqueness") {
        check_keys(v, path, {"kind", "roles"});
        return ExternalUniqueness{role_pos_array(field(v, path, "roles"), path + "/roles")};
    }
    if (kind == "ExternalIdentification") {
        check_keys(v, path, {"kind", "objectType", "roles"});
        return ExternalIdentification{get_string(v, path, "objectType"),
                                      role_pos_array(field(v, path, "roles"), path + "/roles")};
    }
    if (kind == "ValueConstraint") {
        check_keys(v, path, {"kind", "target", "values"});
        return ValueConstraint{get_string(v, path, "target"),
                               string_array(field(v, path, "values"), path + "/values")};
    }
    schema_fail(path + "/kind", "unknown constraint kind '" + kind + "'");
}

} // namespace

std::string model_to_json_text(const ConceptualModel &model) {
    json j;
    j["formatVersion"] = model_format_version;
    j["family"] = family_name(model.family);
    if (!model.object_types.empty()) {
        json arr = json::array();
        for (const auto &o : model.object_types) arr.push_back(json{{"name", o.name}});
        j["objectTypes"] = arr;
    }
    if (!model.data_types.empty()) {
        json arr = json::array();
        for (const auto &d : model.data_types) arr.push_back(json{{"name", d.name}});
        j["dataTypes"] = arr;
    }
    if (!model.value_types.empty()) {
        json arr = json::array();
        for (const auto &v : model.value_types)
            arr.push_back(json{{"datatype", v.datatype}, {"name", v.name}});
        j["valueTypes"] = arr;
    }
    if (!model.relationships.empty()) {
        json arr = json::array();
        for (const auto &r : model.relationships) {
            json rj;
            if (r.name) rj["name"] = *r.name;
            json roles = json::array();
            for (const Role &role : r.roles) {
                json jr{{"place", role.place}, {"player", role.player}};
                if (role.role_name) jr["roleName"] = *role.role_name;
                roles.push_back(jr);
            }
            rj["roles"] = roles;
            if (!r.readings.empty()) rj["readings"] = r.readings;
            arr.push_back(rj);
        }
        j["relationships"] = arr;
    }
    if (!model.attributes.empty()) {
        json arr = json::array();
        for (const auto &a : model.attributes) {
            json aj{{"datatype", a.datatype}, {"name", a.name}, {"owner", a.owner}};
            if (a.has_card) {
                json card;
                card["min"] = a.card_min.value_or(0);
                if (a.card_max) card["max"] = *a.card_max;
                else card["max"] = "*";
                aj["card"] = card;
            }
            arr.push_back(aj);
        }
        j["attributes"] = arr;
    }
    if (!model.subsumptions.empty()) {
        json arr = json::array();
        for (const auto &s : model.subsumptions)
            arr.push_back(json{{"sub", s.sub}, {"super", s.super}});
        j["subsumptions"] = arr;
    }
    if (!model.rel_subsumptions.empty()) {
        json arr = json::array();
        for (const auto &s : model.rel_subsumptions)
            arr.push_back(json{{"sub", s.sub}, {"super", s.super}});
        j["relSubsumptions"] = arr;
    }
    if (!model.constraints.empty()) {
        json arr = json::array();
        for (const auto &c : model.constraints) arr.push_back(constraint_to_json(c));
        j["constraints"] = arr;
    }
    return j.dump(2) + "\n";
}

ConceptualModel model_from_json_text(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
    }
    check_keys(j, "$",
               {"formatVersion", "family", "objectTypes", "dataTypes", "valueTypes",
                "relationships", "attributes", "subsumptions", "relSubsumptions",
                "constraints"});
    std::string version = get_string(j, "$", "formatVersion");
    if (version.substr(0, version.find('.')) != "1")
        throw Error(ErrorCode::VersionMismatch,
                    "unsupported format version '" + version + "' (expected 1.x.y)");

    ConceptualModel m;
    std::string fam = get_string(j, "$", "family");
    auto f = family_from_name(fam);
    if (!f) schema_fail("$/family", "unknown family '" + fam + "'");
    m.family = *f;

    auto each = [&](const char *key, auto fn) {
        auto it = j.find(key);
        if (it == j.end()) return;
        if (!it->is_array()) schema_fail(std::string("$/") + key, "expected an array");
        for (size_t i = 0; i < it->size(); ++i)
            fn((*it)[i], std::string("$/") + key + "[" + std::to_string(i) + "]");
    };

    each("objectTypes", [&](const json &v, const std::string &path) {
        check_keys(v, path, {"name"});
        m.object_types.push_back({get_string(v, path, "name")});
    });
    each("dataTypes", [&](const json &v, const std::string &path) {
        check_keys(v, path, {"name"});
        m.data_types.push_back({get_string(v, path, "name")});
    });
    each("valueTypes", [&](const json &v, const std::string &path) {
        check_keys(v, path, {"name", "datatype"});
        m.value_types.push_back({get_string(v, path, "name"), get_string(v, path, "datatype")});
    });
    each("relationships", [&](const json &v, const std::string &path) {
        check_keys(v, path, {"name", "roles", "readings"});
        Relationship r;
        r.name = opt_string(v, path, "name");
        const json &roles = field(v, path, "roles");
        if (!roles.is_array()) schema_fail(path + "/roles", "expected an array");
        for (size_t i = 0; i < roles.size(); ++i) {
            std::string rp = path + "/roles[" + std::to_string(i) + "]";
            check_keys(roles[i], rp, {"place", "player", "roleName"});
            r.roles.push_back({get_string(roles[i], rp, "place"),
                               get_string(roles[i], rp, "player"),
                               opt_string(roles[i], rp, "roleName")});
        }
        if (auto it = v.find("readings"); it != v.end())
            r.readings = string_array(*it, path + "/readings");
        m.relationships.push_back(std::move(r));
    });
    each("attributes", [&](const json &v, const std::string &path) {
        check_keys(v, path, {"owner", "name", "datatype", "card"});
        Attribute a;
        a.owner = get_string(v, path, "owner");
        a.name = get_string(v, path, "name");
        a.datatype = get_string(v, path, "datatype");
        if (auto it = v.find("card"); it != v.end()) {
            check_keys(*it, path + "/card", {"min", "max"});
            a.has_card = true;
            a.card_min = get_uint(*it, path + "/card", "min");
            a.card_max = opt_uint(*it, path + "/card", "max");
        }
        m.attributes.push_back(std::move(a));
    });
    each("subsumptions", [&](const json &v, const std::string &path) {
        check_keys(v, path, {"sub", "super"});
        m.subsumptions.push_back({get_string(v, path, "sub"), get_string(v, path, "super")});
    });
    each("relSubsumptions", [&](const json &v, const std::string &path) {
        check_keys(v, path, {"sub", "super"});
        m.rel_subsumptions.push_back({get_string(v, path, "sub"), get_string(v, path, "super")});
    });
    each("constraints", [&](const json &v, const std::string &path) {
        m.constraints.push_back(constraint_from_json(v, path));
    });
    return m;
}

std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for reading");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

ConceptualModel read_model(const std::string &path) {
    return model_from_json_text(read_text_file(path));
}

void write_model(const ConceptualModel &model, const std::string &path) {
    write_text_file(path, model_to_json_text(model));
}

} // namespace dc
